import { WorkbenchApp } from "./app.js";

document.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) {
    console.error("missing #app container");
    return;
  }
  const app = new WorkbenchApp(root);
  void app.init();
  // handy when poking around in the browser console
  (window as unknown as { workbench: WorkbenchApp }).workbench = app;
});
