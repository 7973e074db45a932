// View state and the client-side edit buffer. The buffer is a deep copy of
// the fetched table; edits never touch server state until they are posted
// as a pipeline override.

import { AnchorCellPayload, TablePayload, isCovered } from "./api.js";

export interface Selection {
  datasetId: string;
  split: string;
  index: number;
}

export type RightPane = "outputs" | "interactive";

export function cloneTable(table: TablePayload): TablePayload {
  return JSON.parse(JSON.stringify(table)) as TablePayload;
}

export function tablesEqual(a: TablePayload, b: TablePayload): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

/** Position of the anchor governing (row, col): itself, or its merge anchor. */
export function anchorPosition(
  table: TablePayload,
  row: number,
  col: number,
): [number, number] {
  const cell = table.cells[row][col];
  return isCovered(cell) ? cell.covered : [row, col];
}

export function anchorAt(table: TablePayload, row: number, col: number): AnchorCellPayload {
  const [r, c] = anchorPosition(table, row, col);
  return table.cells[r][c] as AnchorCellPayload;
}

export class EditBuffer {
  private table: TablePayload;

  constructor(private readonly original: TablePayload) {
    this.table = cloneTable(original);
  }

  get value(): TablePayload {
    return this.table;
  }

  get dirty(): boolean {
    return !tablesEqual(this.table, this.original);
  }

  toggleHighlight(row: number, col: number): void {
    const anchor = anchorAt(this.table, row, col);
    anchor.highlighted = !anchor.highlighted;
  }

  setValue(row: number, col: number, value: string): void {
    anchorAt(this.table, row, col).value = value;
  }

  reset(): void {
    this.table = cloneTable(this.original);
  }
}

export function clampIndex(index: number, size: number): number {
  if (size <= 0) return 0;
  return Math.min(Math.max(index, 0), size - 1);
}

export function parseIndexInput(raw: string, size: number): number | null {
  const trimmed = raw.trim();
  if (!/^\d+$/.test(trimmed)) return null;
  const index = Number(trimmed);
  return index < size ? index : null;
}

export function formatKey(selection: Selection): string {
  return `${selection.datasetId}/${selection.split}/${selection.index}`;
}

export function parseKey(key: string): Selection | null {
  const parts = key.split("/");
  if (parts.length < 3) return null;
  const index = Number(parts[parts.length - 1]);
  if (!Number.isInteger(index)) return null;
  return {
    datasetId: parts.slice(0, -2).join("/"),
    split: parts[parts.length - 2],
    index,
  };
}
