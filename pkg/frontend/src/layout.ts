import type { NetJson } from "./types.js";

export interface LaidOutNode {
  key: string; // "p<id>" or "t<id>"
  kind: "place" | "transition";
  id: number;
  label: string | null;
  silent: boolean;
  initial: boolean;
  final: boolean;
  x: number;
  y: number;
  rank: number;
}

export interface LaidOutEdge {
  from: string;
  to: string;
}

export interface Layout {
  nodes: LaidOutNode[];
  edges: LaidOutEdge[];
  width: number;
  height: number;
}

export const RANK_SPACING = 110;
export const ROW_SPACING = 70;
export const MARGIN = 50;

const placeKey = (id: number) => `p${id}`;
const nodeKey = (raw: number | string) => (typeof raw === "number" ? placeKey(raw) : String(raw));

/** Layered left-to-right layout: ranks are longest-path depths from the
 * initial places (back arcs such as loop redos and the backloop are ignored
 * for ranking so the graph stays acyclic); nodes within a rank are ordered by
 * key for determinism. */
export function layeredLayout(net: NetJson): Layout {
  const keys: string[] = [
    ...net.places.map(placeKey),
    ...net.transitions.map((t) => `t${t.id}`),
  ];
  const outgoing = new Map<string, string[]>();
  const incoming = new Map<string, string[]>();
  for (const key of keys) {
    outgoing.set(key, []);
    incoming.set(key, []);
  }
  for (const [from, to] of net.arcs) {
    outgoing.get(nodeKey(from))?.push(nodeKey(to));
    incoming.get(nodeKey(to))?.push(nodeKey(from));
  }

  const rank = new Map<string, number>();
  const roots = net.initial.map(placeKey);
  for (const key of keys) rank.set(key, 0);
  // longest path from the roots, skipping edges that would close a cycle
  const order: string[] = [];
  const visiting = new Set<string>();
  const done = new Set<string>();
  const visit = (key: string) => {
    if (done.has(key) || visiting.has(key)) return;
    visiting.add(key);
    for (const next of outgoing.get(key) ?? []) visit(next);
    visiting.delete(key);
    done.add(key);
    order.push(key);
  };
  for (const root of [...roots].sort()) visit(root);
  for (const key of [...keys].sort()) visit(key);
  order.reverse(); // reverse post-order = topological along non-back edges
  const position = new Map(order.map((key, i) => [key, i]));
  for (const key of order) {
    for (const next of outgoing.get(key) ?? []) {
      const candidate = (rank.get(key) ?? 0) + 1;
      if ((position.get(next) ?? 0) > (position.get(key) ?? 0) && candidate > (rank.get(next) ?? 0)) {
        rank.set(next, candidate);
      }
    }
  }

  const byRank = new Map<number, string[]>();
  for (const key of keys) {
    const r = rank.get(key) ?? 0;
    if (!byRank.has(r)) byRank.set(r, []);
    byRank.get(r)!.push(key);
  }
  const maxRank = Math.max(...[...byRank.keys()], 0);
  let maxRow = 0;

  const positioned = new Map<string, { x: number; y: number; rank: number }>();
  for (const [r, members] of [...byRank.entries()].sort((a, b) => a[0] - b[0])) {
    members.sort();
    members.forEach((key, row) => {
      positioned.set(key, {
        x: MARGIN + r * RANK_SPACING,
        y: MARGIN + row * ROW_SPACING,
        rank: r,
      });
      maxRow = Math.max(maxRow, row);
    });
  }

  const initialSet = new Set(net.initial.map(placeKey));
  const finalSet = new Set(net.finals.flat().map(placeKey));
  const transitionById = new Map(net.transitions.map((t) => [t.id, t]));

  const nodes: LaidOutNode[] = keys.map((key) => {
    const pos = positioned.get(key)!;
    if (key.startsWith("p")) {
      const id = Number(key.slice(1));
      return {
        key,
        kind: "place",
        id,
        label: null,
        silent: false,
        initial: initialSet.has(key),
        final: finalSet.has(key),
        ...pos,
      };
    }
    const id = Number(key.slice(1));
    const t = transitionById.get(id)!;
    return {
      key,
      kind: "transition",
      id,
      label: t.label,
      silent: t.label === null,
      initial: false,
      final: false,
      ...pos,
    };
  });

  const edges: LaidOutEdge[] = net.arcs.map(([from, to]) => ({
    from: nodeKey(from),
    to: nodeKey(to),
  }));

  return {
    nodes,
    edges,
    width: MARGIN * 2 + maxRank * RANK_SPACING,
    height: MARGIN * 2 + maxRow * ROW_SPACING,
  };
}
