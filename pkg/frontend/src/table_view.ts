// Renders a table payload as a DOM table. Merged anchors carry their
// rowspan/colspan attributes, heading cells render as <th>, highlighted
// cells get the "highlighted" class. Covered positions produce no element
// (the anchor's spans occupy them), exactly mirroring the payload.

import { TablePayload, isCovered } from "./api.js";

export interface TableViewHandlers {
  /** Single click anywhere in a cell: toggle its highlight in the buffer. */
  onToggleHighlight?: (row: number, col: number) => void;
  /** Committed in-place edit (double-click, type, Enter/blur). */
  onEditValue?: (row: number, col: number, value: string) => void;
}

export function renderTable(
  table: TablePayload,
  handlers: TableViewHandlers = {},
): HTMLTableElement {
  const doc = document;
  const element = doc.createElement("table");
  element.className = "grid";
  for (let r = 0; r < table.cells.length; r++) {
    const rowElement = doc.createElement("tr");
    for (let c = 0; c < table.cells[r].length; c++) {
      const cell = table.cells[r][c];
      if (isCovered(cell)) continue;
      const cellElement = doc.createElement(cell.heading ? "th" : "td");
      cellElement.textContent = cell.value;
      if (cell.rowspan > 1) cellElement.rowSpan = cell.rowspan;
      if (cell.colspan > 1) cellElement.colSpan = cell.colspan;
      if (cell.highlighted) cellElement.classList.add("highlighted");
      cellElement.dataset.row = String(r);
      cellElement.dataset.col = String(c);
      attachCellHandlers(cellElement, r, c, handlers);
      rowElement.appendChild(cellElement);
    }
    element.appendChild(rowElement);
  }
  return element;
}

function attachCellHandlers(
  cellElement: HTMLTableCellElement,
  row: number,
  col: number,
  handlers: TableViewHandlers,
): void {
  if (handlers.onToggleHighlight) {
    cellElement.addEventListener("click", () => {
      if (cellElement.querySelector("input")) return; // editing in progress
      handlers.onToggleHighlight!(row, col);
    });
  }
  if (handlers.onEditValue) {
    cellElement.addEventListener("dblclick", () => {
      if (cellElement.querySelector("input")) return;
      startInlineEdit(cellElement, row, col, handlers.onEditValue!);
    });
  }
}

function startInlineEdit(
  cellElement: HTMLTableCellElement,
  row: number,
  col: number,
  commit: (row: number, col: number, value: string) => void,
): void {
  const previous = cellElement.textContent ?? "";
  const input = document.createElement("input");
  input.type = "text";
  input.value = previous;
  input.className = "cell-editor";
  cellElement.textContent = "";
  cellElement.appendChild(input);
  input.focus();

  let finished = false;
  const finish = (save: boolean) => {
    if (finished) return;
    finished = true;
    const value = save ? input.value : previous;
    cellElement.textContent = value;
    if (save && value !== previous) commit(row, col, value);
  };
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") finish(true);
    else if (event.key === "Escape") finish(false);
    event.stopPropagation();
  });
  input.addEventListener("blur", () => finish(true));
  input.addEventListener("click", (event) => event.stopPropagation());
}

export function renderProperties(properties: [string, string][]): HTMLElement {
  const list = document.createElement("dl");
  list.className = "properties";
  for (const [key, value] of properties) {
    const dt = document.createElement("dt");
    dt.textContent = key;
    const dd = document.createElement("dd");
    dd.textContent = value;
    list.append(dt, dd);
  }
  return list;
}
