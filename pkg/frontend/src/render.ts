import { layeredLayout } from "./layout.js";
import type { NetJson, OverlayResponse, Pattern, Quality } from "./types.js";

const PLACE_R = 14;
const T_W = 64;
const T_H = 34;

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export interface RenderOptions {
  /** per-activity "fitting/total" annotations printed inside the boxes */
  annotations?: Record<string, { fitting: number; total: number }>;
  /** per-activity value histograms drawn as mini bars under each box */
  overlay?: Record<string, Record<string, number>>;
}

/** Render an accepting Petri net as standalone SVG markup: places as circles
 * (initial gets a token dot, final a double ring), labeled transitions as
 * boxes, silent transitions as filled slivers. Pure string building so the
 * same code runs in tests without a DOM. */
export function renderNetSvg(net: NetJson, options: RenderOptions = {}): string {
  const layout = layeredLayout(net);
  const byKey = new Map(layout.nodes.map((n) => [n.key, n]));
  const parts: string[] = [];

  for (const edge of layout.edges) {
    const a = byKey.get(edge.from)!;
    const b = byKey.get(edge.to)!;
    parts.push(
      `<line class="arc" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" ` +
        `stroke="#888" marker-end="url(#arrow)"/>`,
    );
  }

  for (const node of layout.nodes) {
    if (node.kind === "place") {
      parts.push(
        `<circle class="place" cx="${node.x}" cy="${node.y}" r="${PLACE_R}" ` +
          `fill="#fff" stroke="#333"/>`,
      );
      if (node.final) {
        parts.push(
          `<circle class="final-ring" cx="${node.x}" cy="${node.y}" r="${PLACE_R - 4}" ` +
            `fill="none" stroke="#333"/>`,
        );
      }
      if (node.initial) {
        parts.push(`<circle class="token" cx="${node.x}" cy="${node.y}" r="4" fill="#333"/>`);
      }
      continue;
    }
    if (node.silent) {
      parts.push(
        `<rect class="transition silent" x="${node.x - 6}" y="${node.y - T_H / 2}" ` +
          `width="12" height="${T_H}" fill="#333"/>`,
      );
      continue;
    }
    parts.push(
      `<rect class="transition" x="${node.x - T_W / 2}" y="${node.y - T_H / 2}" ` +
        `width="${T_W}" height="${T_H}" fill="#f5f0e8" stroke="#333"/>`,
    );
    const label = node.label ?? "";
    parts.push(
      `<text class="label" x="${node.x}" y="${node.y}" text-anchor="middle" ` +
        `dominant-baseline="middle" font-size="12">${esc(label)}</text>`,
    );
    const annotation = options.annotations?.[label];
    if (annotation) {
      parts.push(
        `<text class="annotation" x="${node.x}" y="${node.y + T_H / 2 + 12}" ` +
          `text-anchor="middle" font-size="10" fill="#555">` +
          `${annotation.fitting}/${annotation.total}</text>`,
      );
    }
    const histogram = options.overlay?.[label];
    if (histogram) {
      parts.push(...overlayBars(node.x, node.y + T_H / 2 + 18, histogram));
    }
  }

  const height = layout.height + (options.overlay ? 40 : 16);
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${layout.width} ${height}" ` +
    `width="${layout.width}" height="${height}">` +
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="22" refY="5" markerWidth="6" ` +
    `markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#888"/>` +
    `</marker></defs>` +
    parts.join("") +
    `</svg>`
  );
}

const BAR_PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2"];

/** Stacked horizontal mini-bar: one segment per attribute value, widths
 * proportional to counts over a fixed total width. */
export function overlayBars(
  cx: number,
  y: number,
  histogram: Record<string, number>,
  totalWidth = T_W,
): string[] {
  const entries = Object.entries(histogram).sort((a, b) => a[0].localeCompare(b[0]));
  const total = entries.reduce((acc, [, v]) => acc + v, 0);
  if (total === 0) return [];
  const parts: string[] = [];
  let x = cx - totalWidth / 2;
  entries.forEach(([value, count], i) => {
    const w = (count / total) * totalWidth;
    parts.push(
      `<rect class="overlay-bar" data-value="${esc(value)}" data-count="${count}" ` +
        `x="${x.toFixed(2)}" y="${y}" width="${w.toFixed(2)}" height="8" ` +
        `fill="${BAR_PALETTE[i % BAR_PALETTE.length]}"><title>${esc(value)}: ${count}</title></rect>`,
    );
    x += w;
  });
  return parts;
}

export function qualityLine(q: Quality): string {
  const fmt = (v: number | null) => (v === null ? "n/a" : v.toFixed(3));
  return (
    `support ${q.support} · confidence ${fmt(q.confidence)} · ` +
    `language fit ${fmt(q.language_fit)} · determinism ${fmt(q.determinism)} · ` +
    `coverage ${fmt(q.coverage)} · score ${fmt(q.aggregate)}`
  );
}

export function annotationsOf(pattern: Pattern): Record<string, { fitting: number; total: number }> {
  const out: Record<string, { fitting: number; total: number }> = {};
  for (const [activity, total] of Object.entries(pattern.activity_totals)) {
    out[activity] = { fitting: pattern.activity_fitting[activity] ?? 0, total };
  }
  return out;
}

export function renderPattern(pattern: Pattern, overlay?: OverlayResponse): string {
  return renderNetSvg(pattern.net, {
    annotations: annotationsOf(pattern),
    overlay: overlay?.histograms,
  });
}
