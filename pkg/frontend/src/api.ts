// Typed client for the workbench JSON API. Every payload shape mirrors
// the service exactly; the UI never transforms text it displays.

export interface AnchorCellPayload {
  value: string;
  heading: boolean;
  highlighted: boolean;
  rowspan: number;
  colspan: number;
}

export interface CoveredCellPayload {
  covered: [number, number];
}

export type CellPayload = AnchorCellPayload | CoveredCellPayload;

export function isCovered(cell: CellPayload): cell is CoveredCellPayload {
  return (cell as CoveredCellPayload).covered !== undefined;
}

export interface TablePayload {
  n_rows: number;
  n_cols: number;
  properties: [string, string][];
  cells: CellPayload[][];
}

export interface DatasetInfo {
  id: string;
  name: string;
  description: string;
  homepage: string;
  license: string;
  version: string;
  data_type: "key_value" | "graph" | "table" | "table_highlighted";
  split_sizes: Record<string, number>;
  loaded_splits: Record<string, number>;
}

export interface SystemOutput {
  system_id: string;
  text: string;
}

export interface ExamplePayload {
  dataset_id: string;
  split: string;
  index: number;
  table: TablePayload;
  properties: [string, string][];
  references: string[];
  outputs: SystemOutput[];
  note: string;
  favorite: boolean;
}

export interface GraphPayload {
  nodes: { id: string; label: string }[];
  edges: { source: string; target: string; label: string }[];
}

export interface PipelineOutputPayload {
  kind: "text" | "graph";
  text?: string;
  graph?: GraphPayload;
}

export interface SessionPayload {
  notes: Record<string, string>;
  favorites: string[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly label: string,
    detail: string,
  ) {
    super(detail);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let label = "http_error";
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (typeof body.error === "string") label = body.error;
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, label, detail);
}

export class Api {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.baseUrl + path, { ...init, signal });
    if (!response.ok) throw await parseError(response);
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  datasets(signal?: AbortSignal): Promise<DatasetInfo[]> {
    return this.request("/api/datasets", undefined, signal);
  }

  example(
    datasetId: string,
    split: string,
    index: number,
    signal?: AbortSignal,
  ): Promise<ExamplePayload> {
    return this.request(`/api/dataset/${datasetId}/${split}/${index}`, undefined, signal);
  }

  randomIndex(datasetId: string, split: string, signal?: AbortSignal): Promise<number> {
    return this.request<{ index: number }>(
      `/api/dataset/${datasetId}/${split}/random`,
      undefined,
      signal,
    ).then((body) => body.index);
  }

  runPipeline(
    pipelineId: string,
    body: {
      dataset_id: string;
      split: string;
      index: number;
      table_override?: TablePayload | null;
      params?: Record<string, string>;
    },
    signal?: AbortSignal,
  ): Promise<PipelineOutputPayload> {
    return this.request(
      `/api/pipeline/${pipelineId}`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
      signal,
    );
  }

  putNote(datasetId: string, split: string, index: number, text: string): Promise<void> {
    return this.request(`/api/note/${datasetId}/${split}/${index}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  setFavorite(
    datasetId: string,
    split: string,
    index: number,
    favorite: boolean,
  ): Promise<void> {
    return this.request(`/api/favorite/${datasetId}/${split}/${index}`, {
      method: favorite ? "PUT" : "DELETE",
    });
  }

  session(): Promise<SessionPayload> {
    return this.request("/api/session");
  }

  exportUrl(datasetId: string, split: string, index: number, format: string): string {
    return `${this.baseUrl}/api/export/${datasetId}/${split}/${index}?format=${format}`;
  }
}
