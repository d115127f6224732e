import type { WeightedFlavor } from "./types";

export const VIEWS = ["similar", "describe", "builder", "profile", "map"] as const;
export type View = (typeof VIEWS)[number];

export interface AppState {
  view: View;
  base: string | null;
  /** Similar view direction: head of the ranking or its tail (most dissimilar). */
  dir: "top" | "tail";
  minus: string[];
  plus: string[];
  weights: Record<string, number>;
  favorites: string[];
  n: number;
}

export const DEFAULT_N = 10;
/** Largest n the stock server accepts; the dissimilar tail asks for this many. */
export const MAX_N = 50;

export function defaultState(): AppState {
  return {
    view: "similar",
    base: null,
    dir: "top",
    minus: [],
    plus: [],
    weights: {},
    favorites: [],
    n: DEFAULT_N,
  };
}

function without(list: string[], item: string): string[] {
  return list.filter((x) => x !== item);
}

/** Toggle a tag in the minus set; a tag can never sit in both sets. */
export function toggleMinus(state: AppState, tag: string): AppState {
  const on = state.minus.includes(tag);
  return {
    ...state,
    minus: on ? without(state.minus, tag) : [...state.minus, tag],
    plus: without(state.plus, tag),
  };
}

/** Toggle a tag in the plus set; a tag can never sit in both sets. */
export function togglePlus(state: AppState, tag: string): AppState {
  const on = state.plus.includes(tag);
  return {
    ...state,
    plus: on ? without(state.plus, tag) : [...state.plus, tag],
    minus: without(state.minus, tag),
  };
}

export function toggleFavorite(state: AppState, beerId: string): AppState {
  const on = state.favorites.includes(beerId);
  return {
    ...state,
    favorites: on ? without(state.favorites, beerId) : [...state.favorites, beerId],
  };
}

/** Raw slider positions -> submission weights guaranteed to sum to 1.
 *
 * Proportional rescale, then the largest weight absorbs the floating-point
 * residue so the sum is exact to the last bit.  Tags at zero are dropped;
 * an all-zero (or empty) profile returns [].
 */
export function normalizeWeights(raw: Record<string, number>): WeightedFlavor[] {
  const entries = Object.entries(raw).filter(([, w]) => w > 0);
  if (entries.length === 0) return [];
  const total = entries.reduce((acc, [, w]) => acc + w, 0);
  const flavors = entries.map(([tag, w]) => ({ tag, weight: w / total }));
  const sum = flavors.reduce((acc, f) => acc + f.weight, 0);
  let largest = 0;
  for (let i = 1; i < flavors.length; i++) {
    if (flavors[i].weight > flavors[largest].weight) largest = i;
  }
  flavors[largest].weight += 1 - sum;
  return flavors;
}

export type BuilderRequest =
  | { kind: "similar"; base: string; n: number }
  | { kind: "arithmetic"; base: string; minus: string[]; plus: string[]; n: number };

/** The builder with no flavor edits is exactly the Similar list for the base. */
export function builderRequest(state: AppState): BuilderRequest | null {
  if (!state.base) return null;
  if (state.minus.length === 0 && state.plus.length === 0) {
    return { kind: "similar", base: state.base, n: state.n };
  }
  return {
    kind: "arithmetic",
    base: state.base,
    minus: [...state.minus],
    plus: [...state.plus],
    n: state.n,
  };
}

/** Serialize the full state into a URL hash fragment (shareable/restorable). */
export function encodeHash(state: AppState): string {
  const params = new URLSearchParams();
  params.set("view", state.view);
  if (state.base) params.set("base", state.base);
  if (state.dir !== "top") params.set("dir", state.dir);
  if (state.minus.length) params.set("minus", state.minus.join("|"));
  if (state.plus.length) params.set("plus", state.plus.join("|"));
  if (state.favorites.length) params.set("favs", state.favorites.join("|"));
  const weighted = Object.entries(state.weights).filter(([, w]) => w > 0);
  if (weighted.length) {
    params.set("weights", weighted.map(([t, w]) => `${t}:${w}`).join("|"));
  }
  if (state.n !== DEFAULT_N) params.set("n", String(state.n));
  return `#${params.toString()}`;
}

export function decodeHash(hash: string): AppState {
  const state = defaultState();
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  if (!raw) return state;
  const params = new URLSearchParams(raw);

  const view = params.get("view");
  if (view && (VIEWS as readonly string[]).includes(view)) state.view = view as View;
  state.base = params.get("base");
  if (params.get("dir") === "tail") state.dir = "tail";

  const split = (key: string) => (params.get(key) ?? "").split("|").filter(Boolean);
  state.minus = split("minus");
  state.plus = split("plus");
  state.plus = state.plus.filter((t) => !state.minus.includes(t));
  state.favorites = [...new Set(split("favs"))];

  for (const piece of split("weights")) {
    const at = piece.lastIndexOf(":");
    if (at <= 0) continue;
    const weight = Number(piece.slice(at + 1));
    if (Number.isFinite(weight) && weight > 0) state.weights[piece.slice(0, at)] = weight;
  }

  const n = Number(params.get("n"));
  if (Number.isInteger(n) && n >= 1 && n <= 50) state.n = n;
  return state;
}
