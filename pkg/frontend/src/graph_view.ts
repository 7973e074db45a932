// Force-directed layout and SVG rendering for triple graphs. The layout is
// a small deterministic spring embedder (circle start, repulsion +
// edge springs + centering), good enough for the handful of nodes a
// data-to-text example carries.

import { GraphPayload } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface LayoutOptions {
  width?: number;
  height?: number;
  iterations?: number;
}

export interface PlacedNode {
  id: string;
  label: string;
  x: number;
  y: number;
}

export function layoutGraph(graph: GraphPayload, options: LayoutOptions = {}): PlacedNode[] {
  const width = options.width ?? 480;
  const height = options.height ?? 320;
  const iterations = options.iterations ?? 250;
  const n = graph.nodes.length;
  if (n === 0) return [];

  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) / 3;
  const nodes: PlacedNode[] = graph.nodes.map((node, i) => ({
    id: node.id,
    label: node.label,
    x: cx + radius * Math.cos((2 * Math.PI * i) / n),
    y: cy + radius * Math.sin((2 * Math.PI * i) / n),
  }));
  if (n === 1) {
    nodes[0].x = cx;
    nodes[0].y = cy;
    return nodes;
  }

  const indexOf = new Map(nodes.map((node, i) => [node.id, i]));
  const springs = graph.edges
    .map((edge) => [indexOf.get(edge.source)!, indexOf.get(edge.target)!])
    .filter(([a, b]) => a !== b);

  const repulsion = 8000;
  const springLength = 120;
  const springK = 0.02;
  const gravity = 0.015;

  for (let step = 0; step < iterations; step++) {
    const cooling = 1 - step / iterations;
    const fx = new Array(n).fill(0);
    const fy = new Array(n).fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let dx = nodes[i].x - nodes[j].x;
        let dy = nodes[i].y - nodes[j].y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1) {
          // split coincident nodes deterministically
          dx = 0.5 * (i - j);
          dy = 0.25;
          d2 = dx * dx + dy * dy;
        }
        const force = repulsion / d2;
        const d = Math.sqrt(d2);
        fx[i] += (dx / d) * force;
        fy[i] += (dy / d) * force;
        fx[j] -= (dx / d) * force;
        fy[j] -= (dy / d) * force;
      }
    }
    for (const [a, b] of springs) {
      const dx = nodes[b].x - nodes[a].x;
      const dy = nodes[b].y - nodes[a].y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const force = springK * (d - springLength);
      fx[a] += (dx / d) * force;
      fy[a] += (dy / d) * force;
      fx[b] -= (dx / d) * force;
      fy[b] -= (dy / d) * force;
    }
    for (let i = 0; i < n; i++) {
      fx[i] += (cx - nodes[i].x) * gravity;
      fy[i] += (cy - nodes[i].y) * gravity;
      nodes[i].x += Math.max(-12, Math.min(12, fx[i] * cooling));
      nodes[i].y += Math.max(-12, Math.min(12, fy[i] * cooling));
      nodes[i].x = Math.max(20, Math.min(width - 20, nodes[i].x));
      nodes[i].y = Math.max(16, Math.min(height - 16, nodes[i].y));
    }
  }
  return nodes;
}

function svgElement(tag: string, attrs: Record<string, string>): SVGElement {
  const element = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    element.setAttribute(key, value);
  }
  return element;
}

export function renderGraph(graph: GraphPayload, options: LayoutOptions = {}): SVGSVGElement {
  const width = options.width ?? 480;
  const height = options.height ?? 320;
  const nodes = layoutGraph(graph, options);
  const byId = new Map(nodes.map((node) => [node.id, node]));

  const svg = svgElement("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "graph",
    role: "img",
  }) as SVGSVGElement;

  for (const edge of graph.edges) {
    const source = byId.get(edge.source)!;
    const target = byId.get(edge.target)!;
    const group = svgElement("g", { class: "edge" });
    group.dataset.label = edge.label;
    if (edge.source === edge.target) {
      group.appendChild(
        svgElement("circle", {
          cx: String(source.x + 18),
          cy: String(source.y - 18),
          r: "16",
          class: "edge-line",
        }),
      );
    } else {
      group.appendChild(
        svgElement("line", {
          x1: String(source.x),
          y1: String(source.y),
          x2: String(target.x),
          y2: String(target.y),
          class: "edge-line",
        }),
      );
    }
    const label = svgElement("text", {
      x: String((source.x + target.x) / 2),
      y: String((source.y + target.y) / 2 - 4),
      class: "edge-label",
    });
    label.textContent = edge.label;
    group.appendChild(label);
    svg.appendChild(group);
  }

  for (const node of nodes) {
    const group = svgElement("g", { class: "node" });
    group.dataset.id = node.id;
    group.appendChild(
      svgElement("circle", { cx: String(node.x), cy: String(node.y), r: "7" }),
    );
    const label = svgElement("text", {
      x: String(node.x),
      y: String(node.y - 11),
      class: "node-label",
    });
    label.textContent = node.label;
    group.appendChild(label);
    svg.appendChild(group);
  }
  return svg;
}
