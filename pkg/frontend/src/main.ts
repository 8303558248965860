/** Browser wiring: a single page listing runs, a pattern list with quality
 * scores, weight sliders that re-rank through the service, filters, grouping
 * tabs, and the selected pattern rendered as a Petri net with optional
 * attribute overlay. All numbers come from service payloads. */

import { ApiClient, ApiError } from "./api.js";
import { qualityLine, renderPattern } from "./render.js";
import {
  DEFAULT_WEIGHTS,
  RequestSequencer,
  ViewState,
  applyFilters,
  clampWeights,
  initialState,
  reconcileSelection,
} from "./state.js";
import type { OverlayResponse, Pattern, Quality } from "./types.js";

const api = new ApiClient("");
const state: ViewState = initialState();
const sequencer = new RequestSequencer();

let basePatterns: Pattern[] = [];
let rankedTrees: string[] = [];
let qualityByTree = new Map<string, Quality>();

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

function banner(message: string, retry?: () => void) {
  const box = el<HTMLDivElement>("banner");
  box.textContent = message;
  box.style.display = message ? "block" : "none";
  box.onclick = () => {
    box.style.display = "none";
    retry?.();
  };
}

async function loadRuns() {
  try {
    const runs = await api.listRuns();
    const select = el<HTMLSelectElement>("run-select");
    select.innerHTML = "";
    for (const run of runs) {
      const option = document.createElement("option");
      option.value = run.run_id;
      option.textContent = `${run.run_id} (${run.patterns} patterns)`;
      select.appendChild(option);
    }
    if (runs.length) {
      state.runId = runs[0].run_id;
      select.value = state.runId;
      await loadRun();
    }
  } catch (err) {
    banner(`cannot reach the results service: ${err}. Click to retry.`, loadRuns);
  }
}

async function loadRun() {
  if (!state.runId) return;
  const doc = await api.getRun(state.runId);
  basePatterns = doc.patterns;
  rankedTrees = basePatterns.map((p) => p.tree);
  qualityByTree = new Map(basePatterns.map((p) => [p.tree, p.quality]));
  const attrSelect = el<HTMLSelectElement>("overlay-select");
  attrSelect.innerHTML = "<option value=''>(no overlay)</option>";
  for (const attribute of doc.attributes) {
    const option = document.createElement("option");
    option.value = attribute;
    option.textContent = attribute;
    attrSelect.appendChild(option);
  }
  state.overlayAttribute = null;
  state.selectedTree = null;
  refreshList();
}

async function applyWeights() {
  if (!state.runId) return;
  const ticket = sequencer.begin();
  try {
    const response = await api.rerank(state.runId, clampWeights(state.weights));
    if (!sequencer.accept(ticket)) return; // a newer drag superseded this one
    rankedTrees = response.patterns.map((p) => p.tree);
    qualityByTree = new Map(response.patterns.map((p) => [p.tree, p.quality]));
    banner("");
    refreshList();
  } catch (err) {
    if (!sequencer.accept(ticket)) return;
    banner(`re-ranking failed, view may be stale: ${err}. Click to retry.`, applyWeights);
  }
}

function visiblePatterns(): Pattern[] {
  const byTree = new Map(basePatterns.map((p) => [p.tree, p]));
  const ordered = rankedTrees
    .map((tree) => byTree.get(tree))
    .filter((p): p is Pattern => p !== undefined);
  return applyFilters(ordered, state.filters);
}

function refreshList() {
  const visible = visiblePatterns();
  state.selectedTree = reconcileSelection(visible, state.selectedTree);
  const list = el<HTMLUListElement>("pattern-list");
  list.innerHTML = "";
  for (const pattern of visible) {
    const item = document.createElement("li");
    const quality = qualityByTree.get(pattern.tree) ?? pattern.quality;
    item.textContent = `${pattern.tree} — ${quality.aggregate.toFixed(3)}`;
    item.className = pattern.tree === state.selectedTree ? "selected" : "";
    item.onclick = () => {
      state.selectedTree = pattern.tree;
      refreshList();
    };
    list.appendChild(item);
  }
  void renderSelection(visible);
}

async function renderSelection(visible: Pattern[]) {
  const holder = el<HTMLDivElement>("pattern-view");
  const caption = el<HTMLDivElement>("pattern-caption");
  const pattern = visible.find((p) => p.tree === state.selectedTree);
  if (!pattern) {
    holder.innerHTML = "<p>no pattern matches the filters</p>";
    caption.textContent = "";
    return;
  }
  let overlay: OverlayResponse | undefined;
  if (state.overlayAttribute) {
    try {
      const rank = basePatterns.findIndex((p) => p.tree === pattern.tree);
      overlay = await api.overlay(state.runId!, rank, state.overlayAttribute);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        overlay = undefined; // attribute missing for this run
      } else {
        throw err;
      }
    }
  }
  holder.innerHTML = renderPattern(pattern, overlay);
  const quality = qualityByTree.get(pattern.tree) ?? pattern.quality;
  caption.textContent = `${pattern.tree}\n${qualityLine(quality)}`;
}

async function showGroups() {
  if (!state.runId) return;
  const response = await api.groups(state.runId, state.grouping);
  const list = el<HTMLUListElement>("group-list");
  list.innerHTML = "";
  for (const group of response.groups) {
    const item = document.createElement("li");
    item.textContent = `{${group.alphabet.join(", ")}} — ${group.members.length} pattern(s), head ${group.head}`;
    item.onclick = () => {
      state.selectedTree = group.head;
      refreshList();
    };
    list.appendChild(item);
  }
}

function bindControls() {
  el<HTMLSelectElement>("run-select").onchange = (event) => {
    state.runId = (event.target as HTMLSelectElement).value;
    void loadRun();
  };
  for (const key of ["support", "confidence", "language_fit", "determinism", "coverage"] as const) {
    const slider = el<HTMLInputElement>(`w-${key}`);
    slider.value = String(DEFAULT_WEIGHTS[key]);
    slider.oninput = () => {
      state.weights[key] = Number(slider.value);
      void applyWeights();
    };
  }
  el<HTMLButtonElement>("reset-weights").onclick = () => {
    state.weights = { ...DEFAULT_WEIGHTS };
    for (const key of ["support", "confidence", "language_fit", "determinism", "coverage"] as const) {
      el<HTMLInputElement>(`w-${key}`).value = String(DEFAULT_WEIGHTS[key]);
    }
    void applyWeights();
  };
  el<HTMLInputElement>("f-min-activities").onchange = (event) => {
    state.filters.minActivities = Number((event.target as HTMLInputElement).value) || 0;
    refreshList();
  };
  el<HTMLInputElement>("f-contains").onchange = (event) => {
    state.filters.contains = (event.target as HTMLInputElement).value.trim();
    refreshList();
  };
  el<HTMLInputElement>("f-min-support").onchange = (event) => {
    state.filters.minSupport = Number((event.target as HTMLInputElement).value) || 0;
    refreshList();
  };
  el<HTMLSelectElement>("group-select").onchange = (event) => {
    state.grouping = (event.target as HTMLSelectElement).value as "alphabet" | "ranking";
    void showGroups();
  };
  el<HTMLSelectElement>("overlay-select").onchange = (event) => {
    const value = (event.target as HTMLSelectElement).value;
    state.overlayAttribute = value || null;
    refreshList();
  };
}

bindControls();
void loadRuns();
