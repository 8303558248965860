import type { Pattern, Weights } from "./types.js";

export interface Filters {
  minActivities: number;
  contains: string;
  minSupport: number;
}

export type GroupStrategy = "alphabet" | "ranking";

export interface ViewState {
  runId: string | null;
  weights: Weights;
  filters: Filters;
  grouping: GroupStrategy;
  selectedTree: string | null;
  overlayAttribute: string | null;
}

export const DEFAULT_WEIGHTS: Weights = {
  support: 0.2,
  confidence: 0.2,
  language_fit: 0.2,
  determinism: 0.2,
  coverage: 0.2,
  c: null,
};

export function initialState(): ViewState {
  return {
    runId: null,
    weights: { ...DEFAULT_WEIGHTS },
    filters: { minActivities: 0, contains: "", minSupport: 0 },
    grouping: "alphabet",
    selectedTree: null,
    overlayAttribute: null,
  };
}

const WEIGHT_KEYS = ["support", "confidence", "language_fit", "determinism", "coverage"] as const;

/** Slider values clamp into [0, 1]; an all-zero vector snaps back to the
 * defaults because the service rejects it. */
export function clampWeights(weights: Weights): Weights {
  const clamped = { ...weights };
  for (const key of WEIGHT_KEYS) {
    clamped[key] = Math.min(1, Math.max(0, Number.isFinite(clamped[key]) ? clamped[key] : 0));
  }
  if (WEIGHT_KEYS.every((key) => clamped[key] === 0)) {
    return { ...DEFAULT_WEIGHTS, c: clamped.c ?? null };
  }
  return clamped;
}

/** Client-side mirror of the server filters, used to keep the selection
 * anchored without a round trip. */
export function applyFilters(patterns: Pattern[], filters: Filters): Pattern[] {
  return patterns.filter((p) => {
    const activities = Object.keys(p.activity_totals);
    if (filters.minActivities > 0 && activities.length < filters.minActivities) return false;
    if (filters.contains && !activities.includes(filters.contains)) return false;
    if (filters.minSupport > 0 && p.quality.support < filters.minSupport) return false;
    return true;
  });
}

/** After a refresh, keep the previously selected pattern when it survived the
 * filters; otherwise fall back to the list head. */
export function reconcileSelection(
  visible: { tree: string }[],
  selectedTree: string | null,
): string | null {
  if (selectedTree !== null && visible.some((p) => p.tree === selectedTree)) {
    return selectedTree;
  }
  return visible.length ? visible[0].tree : null;
}

/** Monotone ticket dispenser: rapid slider drags fire overlapping requests
 * and only the latest ticket's response may be applied; stale ones are
 * discarded. */
export class RequestSequencer {
  private latest = 0;

  begin(): number {
    this.latest += 1;
    return this.latest;
  }

  accept(ticket: number): boolean {
    return ticket === this.latest;
  }
}
