// The workbench application: a navigation bar plus three panels.
// Left: dataset/split selection, navigation, favorites, dataset info, notes.
// Center: table properties, the table itself (click = toggle highlight,
// double-click = edit value), and a graph view for triple datasets.
// Right: references, system outputs, and the interactive pipeline runner.
//
// All edits live in a client-side buffer until Run posts them as a
// table_override; the server's dataset state is never mutated.

import { Api, ApiError, DatasetInfo, ExamplePayload, TablePayload } from "./api.js";
import {
  EditBuffer,
  RightPane,
  Selection,
  clampIndex,
  formatKey,
  parseIndexInput,
  parseKey,
} from "./state.js";
import { renderGraph } from "./graph_view.js";
import { renderProperties, renderTable } from "./table_view.js";

const NOTE_DEBOUNCE_MS = 400;

export class WorkbenchApp {
  readonly api: Api;
  private readonly root: HTMLElement;

  private datasets: DatasetInfo[] = [];
  private selection: Selection | null = null;
  private example: ExamplePayload | null = null;
  private buffer: EditBuffer | null = null;
  private pipelines: string[] = [];
  private selectedPipeline = "";
  private rightPane: RightPane = "outputs";
  private runInFlight = false;

  private fetchController: AbortController | null = null;
  private noteTimer: ReturnType<typeof setTimeout> | null = null;
  private notePending: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, api: Api | string = new Api()) {
    this.root = root;
    this.api = typeof api === "string" ? new Api(api) : api;
    this.root.innerHTML = this.skeleton();
    this.bindStaticHandlers();
  }

  // --- bootstrapping ---------------------------------------------------------

  async init(): Promise<void> {
    try {
      [this.datasets, this.pipelines] = await Promise.all([
        this.api.datasets(),
        this.fetchPipelines(),
      ]);
    } catch (error) {
      this.showBanner(`failed to reach the service: ${describe(error)}`);
      return;
    }
    this.selectedPipeline = this.pipelines[0] ?? "";
    this.renderDatasetSelect();
    this.renderPipelineSelect();
    const first = this.datasets.find((d) => Object.keys(d.loaded_splits).length > 0);
    if (!first) {
      this.showBanner("no datasets with loaded splits available");
      return;
    }
    const split = Object.keys(first.loaded_splits).sort()[0];
    await this.goto({ datasetId: first.id, split, index: 0 });
  }

  private async fetchPipelines(): Promise<string[]> {
    const response = await fetch(this.api.baseUrl + "/api/pipelines");
    if (!response.ok) return [];
    const body = (await response.json()) as { pipelines: string[] };
    return body.pipelines;
  }

  // --- selection and navigation ----------------------------------------------

  get current(): Selection | null {
    return this.selection;
  }

  get currentExample(): ExamplePayload | null {
    return this.example;
  }

  get editBuffer(): EditBuffer | null {
    return this.buffer;
  }

  private datasetInfo(datasetId: string): DatasetInfo | undefined {
    return this.datasets.find((d) => d.id === datasetId);
  }

  private splitSize(selection: Selection): number {
    return this.datasetInfo(selection.datasetId)?.loaded_splits[selection.split] ?? 0;
  }

  async goto(selection: Selection): Promise<void> {
    // navigation cancels any stale fetch
    this.fetchController?.abort();
    const controller = new AbortController();
    this.fetchController = controller;
    this.clearBanner();
    try {
      const example = await this.api.example(
        selection.datasetId,
        selection.split,
        selection.index,
        controller.signal,
      );
      if (this.fetchController !== controller) return; // superseded
      this.selection = selection;
      this.example = example;
      this.buffer = new EditBuffer(example.table);
      this.renderAll();
    } catch (error) {
      if (controller.signal.aborted) return;
      this.showBanner(`could not load example: ${describe(error)}`);
    }
  }

  async next(): Promise<void> {
    if (!this.selection) return;
    const size = this.splitSize(this.selection);
    const index = clampIndex(this.selection.index + 1, size);
    if (index !== this.selection.index) await this.goto({ ...this.selection, index });
  }

  async prev(): Promise<void> {
    if (!this.selection) return;
    const index = clampIndex(this.selection.index - 1, this.splitSize(this.selection));
    if (index !== this.selection.index) await this.goto({ ...this.selection, index });
  }

  async random(): Promise<void> {
    if (!this.selection) return;
    const index = await this.api.randomIndex(this.selection.datasetId, this.selection.split);
    await this.goto({ ...this.selection, index });
  }

  async gotoInput(raw: string): Promise<boolean> {
    if (!this.selection) return false;
    const index = parseIndexInput(raw, this.splitSize(this.selection));
    const message = this.element("#nav-message");
    if (index === null) {
      message.textContent = `enter an index between 0 and ${this.splitSize(this.selection) - 1}`;
      return false; // invalid input: no request is sent
    }
    message.textContent = "";
    await this.goto({ ...this.selection, index });
    return true;
  }

  async selectDataset(datasetId: string): Promise<void> {
    const info = this.datasetInfo(datasetId);
    if (!info) return;
    const split = Object.keys(info.loaded_splits).sort()[0];
    if (split === undefined) {
      this.showBanner(`dataset ${datasetId} has no loaded splits`);
      return;
    }
    await this.goto({ datasetId, split, index: 0 });
  }

  async selectSplit(split: string): Promise<void> {
    if (!this.selection) return;
    await this.goto({ ...this.selection, split, index: 0 });
  }

  // --- session: favorites and notes -------------------------------------------

  async toggleFavorite(): Promise<void> {
    if (!this.selection || !this.example) return;
    const target = !this.example.favorite;
    await this.api.setFavorite(
      this.selection.datasetId,
      this.selection.split,
      this.selection.index,
      target,
    );
    // reflect server state, not the optimistic guess
    this.example = await this.api.example(
      this.selection.datasetId,
      this.selection.split,
      this.selection.index,
    );
    this.renderFavoriteButton();
    await this.renderFavoritesList();
  }

  noteEdited(text: string): void {
    if (this.noteTimer !== null) clearTimeout(this.noteTimer);
    this.noteTimer = setTimeout(() => {
      this.noteTimer = null;
      this.notePending = this.notePending.then(() => this.flushNote(text));
    }, NOTE_DEBOUNCE_MS);
  }

  private async flushNote(text: string): Promise<void> {
    if (!this.selection) return;
    try {
      await this.api.putNote(
        this.selection.datasetId,
        this.selection.split,
        this.selection.index,
        text,
      );
      if (this.example) this.example.note = text;
    } catch (error) {
      this.showBanner(`saving the note failed: ${describe(error)}`);
    }
  }

  /** Wait for any debounced note write to reach the server (used by tests). */
  async settleNotes(): Promise<void> {
    while (this.noteTimer !== null) {
      await new Promise((resolve) => setTimeout(resolve, 50));
    }
    await this.notePending;
  }

  // --- interactive pipeline -----------------------------------------------------

  selectPipeline(id: string): void {
    this.selectedPipeline = id;
    (this.element("#pipeline-select") as HTMLSelectElement).value = id;
  }

  setPane(pane: RightPane): void {
    this.rightPane = pane;
    this.renderPaneVisibility();
  }

  async run(): Promise<void> {
    if (!this.selection || !this.buffer || this.runInFlight || !this.selectedPipeline) return;
    const runButton = this.element("#btn-run") as HTMLButtonElement;
    this.runInFlight = true;
    runButton.disabled = true;
    this.element("#error-card").hidden = true;
    try {
      const params: Record<string, string> = {};
      const prompt = (this.element("#param-prompt") as HTMLTextAreaElement).value;
      if (prompt.trim()) params.prompt_template = prompt;
      const linearizer = (this.element("#param-linearizer") as HTMLSelectElement).value;
      if (linearizer && linearizer !== "default") params.linearizer = linearizer;
      const output = await this.api.runPipeline(this.selectedPipeline, {
        dataset_id: this.selection.datasetId,
        split: this.selection.split,
        index: this.selection.index,
        table_override: this.buffer.value,
        params,
      });
      const pane = this.element("#pipeline-output");
      pane.innerHTML = "";
      if (output.kind === "text") {
        const block = document.createElement("pre");
        block.className = "output-text";
        block.textContent = output.text ?? "";
        pane.appendChild(block);
      } else if (output.graph) {
        pane.appendChild(renderGraph(output.graph));
      }
    } catch (error) {
      const card = this.element("#error-card");
      card.hidden = false;
      card.textContent =
        error instanceof ApiError
          ? `pipeline failed (${error.status}): ${error.message}`
          : `pipeline failed: ${describe(error)}`;
    } finally {
      this.runInFlight = false;
      runButton.disabled = false;
    }
  }

  reset(): void {
    if (!this.buffer || !this.example) return;
    this.buffer = new EditBuffer(this.example.table);
    this.renderCenter();
  }

  // --- rendering ------------------------------------------------------------------

  private skeleton(): string {
    return `
<header class="topbar">
  <span class="brand">tabbench</span>
  <span id="position" class="position"></span>
  <span id="banner" class="banner" hidden></span>
</header>
<main class="panels">
  <aside class="panel left">
    <section>
      <label>dataset
        <select id="dataset-select"></select>
      </label>
      <label>split
        <select id="split-select"></select>
      </label>
    </section>
    <section class="nav">
      <button id="btn-prev" type="button">&#8592; prev</button>
      <button id="btn-next" type="button">next &#8594;</button>
      <button id="btn-random" type="button">random</button>
      <span class="goto">
        <input id="goto-index" type="text" inputmode="numeric" placeholder="index" />
        <button id="btn-goto" type="button">go</button>
      </span>
      <span id="nav-message" class="nav-message"></span>
    </section>
    <section>
      <button id="btn-favorite" type="button" aria-pressed="false">&#9734; favorite</button>
      <h3>favorites</h3>
      <ul id="favorites-list" class="favorites"></ul>
    </section>
    <section>
      <h3>notes</h3>
      <textarea id="note-editor" rows="4" placeholder="notes for this example"></textarea>
    </section>
    <section id="dataset-info" class="dataset-info"></section>
  </aside>
  <section class="panel center">
    <div id="properties"></div>
    <div id="table-container"></div>
    <div id="graph-container"></div>
  </section>
  <aside class="panel right">
    <nav class="tabs">
      <button id="tab-outputs" type="button">outputs</button>
      <button id="tab-interactive" type="button">interactive</button>
    </nav>
    <section id="pane-outputs">
      <h3>references</h3>
      <ul id="references-list"></ul>
      <h3>system outputs</h3>
      <div id="outputs-list"></div>
    </section>
    <section id="pane-interactive">
      <label>pipeline
        <select id="pipeline-select"></select>
      </label>
      <label>prompt
        <textarea id="param-prompt" rows="3" placeholder="template with {input}"></textarea>
      </label>
      <label>linearization
        <select id="param-linearizer">
          <option value="default">default</option>
          <option value="highlighted">highlighted only</option>
        </select>
      </label>
      <div class="run-controls">
        <button id="btn-run" type="button">run</button>
        <button id="btn-reset" type="button">reset</button>
      </div>
      <div id="error-card" class="error-card" hidden></div>
      <div id="pipeline-output" class="pipeline-output"></div>
    </section>
  </aside>
</main>`;
  }

  private bindStaticHandlers(): void {
    this.element("#btn-prev").addEventListener("click", () => void this.prev());
    this.element("#btn-next").addEventListener("click", () => void this.next());
    this.element("#btn-random").addEventListener("click", () => void this.random());
    this.element("#btn-goto").addEventListener("click", () => {
      void this.gotoInput((this.element("#goto-index") as HTMLInputElement).value);
    });
    this.element("#btn-favorite").addEventListener("click", () => void this.toggleFavorite());
    this.element("#note-editor").addEventListener("input", (event) => {
      this.noteEdited((event.target as HTMLTextAreaElement).value);
    });
    this.element("#dataset-select").addEventListener("change", (event) => {
      void this.selectDataset((event.target as HTMLSelectElement).value);
    });
    this.element("#split-select").addEventListener("change", (event) => {
      void this.selectSplit((event.target as HTMLSelectElement).value);
    });
    this.element("#pipeline-select").addEventListener("change", (event) => {
      this.selectPipeline((event.target as HTMLSelectElement).value);
    });
    this.element("#btn-run").addEventListener("click", () => void this.run());
    this.element("#btn-reset").addEventListener("click", () => this.reset());
    this.element("#tab-outputs").addEventListener("click", () => this.setPane("outputs"));
    this.element("#tab-interactive").addEventListener("click", () =>
      this.setPane("interactive"),
    );
  }

  element(selector: string): HTMLElement {
    const found = this.root.querySelector(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found as HTMLElement;
  }

  private showBanner(message: string): void {
    const banner = this.element("#banner");
    banner.hidden = false;
    banner.textContent = message;
  }

  private clearBanner(): void {
    const banner = this.element("#banner");
    banner.hidden = true;
    banner.textContent = "";
  }

  private renderDatasetSelect(): void {
    const select = this.element("#dataset-select") as HTMLSelectElement;
    select.innerHTML = "";
    for (const info of this.datasets) {
      const option = document.createElement("option");
      option.value = info.id;
      option.textContent = info.name || info.id;
      option.disabled = Object.keys(info.loaded_splits).length === 0;
      select.appendChild(option);
    }
  }

  private renderPipelineSelect(): void {
    const select = this.element("#pipeline-select") as HTMLSelectElement;
    select.innerHTML = "";
    for (const id of this.pipelines) {
      const option = document.createElement("option");
      option.value = id;
      option.textContent = id;
      select.appendChild(option);
    }
    select.value = this.selectedPipeline;
  }

  private renderAll(): void {
    if (!this.selection || !this.example) return;
    const info = this.datasetInfo(this.selection.datasetId);
    (this.element("#dataset-select") as HTMLSelectElement).value = this.selection.datasetId;
    this.renderSplitSelect(info);
    this.renderPosition();
    this.renderDatasetInfo(info);
    this.renderCenter();
    this.renderRight();
    this.renderFavoriteButton();
    void this.renderFavoritesList();
    (this.element("#note-editor") as HTMLTextAreaElement).value = this.example.note;
    this.renderPaneVisibility();
  }

  private renderSplitSelect(info: DatasetInfo | undefined): void {
    const select = this.element("#split-select") as HTMLSelectElement;
    select.innerHTML = "";
    for (const split of Object.keys(info?.loaded_splits ?? {}).sort()) {
      const option = document.createElement("option");
      option.value = split;
      option.textContent = `${split} (${info!.loaded_splits[split]})`;
      select.appendChild(option);
    }
    if (this.selection) select.value = this.selection.split;
  }

  private renderPosition(): void {
    if (!this.selection) return;
    const size = this.splitSize(this.selection);
    this.element("#position").textContent =
      `${this.selection.datasetId} / ${this.selection.split} ` +
      `[${this.selection.index} of 0..${size - 1}]`;
  }

  private renderDatasetInfo(info: DatasetInfo | undefined): void {
    const container = this.element("#dataset-info");
    container.innerHTML = "";
    if (!info) return;
    const title = document.createElement("h3");
    title.textContent = info.name || info.id;
    const description = document.createElement("p");
    description.textContent = info.description;
    const meta = document.createElement("p");
    meta.className = "meta";
    meta.textContent = [
      info.version && `version ${info.version}`,
      info.license && `license: ${info.license}`,
      `type: ${info.data_type}`,
    ]
      .filter(Boolean)
      .join(" · ");
    container.append(title, description, meta);
    if (info.homepage) {
      const link = document.createElement("a");
      link.href = info.homepage;
      link.textContent = "homepage";
      link.target = "_blank";
      container.appendChild(link);
    }
  }

  private renderCenter(): void {
    if (!this.example || !this.buffer) return;
    const properties = this.element("#properties");
    properties.innerHTML = "";
    properties.appendChild(renderProperties(this.example.properties));

    const tableContainer = this.element("#table-container");
    tableContainer.innerHTML = "";
    tableContainer.appendChild(
      renderTable(this.buffer.value, {
        onToggleHighlight: (row, col) => {
          this.buffer!.toggleHighlight(row, col);
          this.renderCenter();
        },
        onEditValue: (row, col, value) => {
          this.buffer!.setValue(row, col, value);
          this.renderCenter();
        },
      }),
    );

    const graphContainer = this.element("#graph-container");
    graphContainer.innerHTML = "";
    const info = this.selection && this.datasetInfo(this.selection.datasetId);
    if (info?.data_type === "graph" && this.selection) {
      void this.renderTripleGraph(graphContainer);
    }
  }

  private async renderTripleGraph(container: HTMLElement): Promise<void> {
    if (!this.selection || !this.pipelines.includes("rdf_graph")) return;
    const requested = this.selection;
    try {
      const output = await this.api.runPipeline("rdf_graph", {
        dataset_id: requested.datasetId,
        split: requested.split,
        index: requested.index,
      });
      if (this.selection !== requested || !output.graph) return;
      container.innerHTML = "";
      container.appendChild(renderGraph(output.graph));
    } catch {
      // the table view stands on its own when the graph pipeline fails
    }
  }

  private renderRight(): void {
    if (!this.example) return;
    const referencesList = this.element("#references-list");
    referencesList.innerHTML = "";
    for (const reference of this.example.references) {
      const item = document.createElement("li");
      item.textContent = reference;
      referencesList.appendChild(item);
    }
    const outputsList = this.element("#outputs-list");
    outputsList.innerHTML = "";
    if (this.example.outputs.length === 0) {
      const placeholder = document.createElement("p");
      placeholder.className = "placeholder";
      placeholder.id = "outputs-placeholder";
      placeholder.textContent = "no system outputs for this example";
      outputsList.appendChild(placeholder);
    }
    for (const output of this.example.outputs) {
      const card = document.createElement("div");
      card.className = "output-card";
      const head = document.createElement("h4");
      head.textContent = output.system_id;
      const body = document.createElement("p");
      body.textContent = output.text;
      card.append(head, body);
      outputsList.appendChild(card);
    }
    this.element("#pipeline-output").innerHTML = "";
    this.element("#error-card").hidden = true;
  }

  private renderFavoriteButton(): void {
    const button = this.element("#btn-favorite");
    const favorite = this.example?.favorite ?? false;
    button.setAttribute("aria-pressed", String(favorite));
    button.innerHTML = favorite ? "&#9733; favorited" : "&#9734; favorite";
  }

  private async renderFavoritesList(): Promise<void> {
    const list = this.element("#favorites-list");
    try {
      const session = await this.api.session();
      list.innerHTML = "";
      for (const key of session.favorites) {
        const selection = parseKey(key);
        if (!selection) continue;
        const item = document.createElement("li");
        const link = document.createElement("a");
        link.href = "#";
        link.textContent = key;
        link.addEventListener("click", (event) => {
          event.preventDefault();
          void this.goto(selection);
        });
        item.appendChild(link);
        list.appendChild(item);
      }
    } catch {
      // favorites list is non-critical; leave the previous content
    }
  }

  private renderPaneVisibility(): void {
    this.element("#pane-outputs").hidden = this.rightPane !== "outputs";
    this.element("#pane-interactive").hidden = this.rightPane !== "interactive";
    this.element("#tab-outputs").classList.toggle("active", this.rightPane === "outputs");
    this.element("#tab-interactive").classList.toggle(
      "active",
      this.rightPane === "interactive",
    );
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.label}: ${error.message}`;
  if (error instanceof Error) return error.message;
  return String(error);
}

export function currentSelectionKey(app: WorkbenchApp): string | null {
  return app.current ? formatKey(app.current) : null;
}

export type { TablePayload };
