import type { BeerSummary, FlavorPoint, RankedRow } from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function stars(rating: number | null): string {
  return rating === null ? "—" : rating.toFixed(2);
}

/** Ranked results as a table; every row gets re-query and favorite buttons. */
export function renderResults(rows: RankedRow[], favorites: string[] = []): string {
  if (rows.length === 0) {
    return `<p class="empty">No results.</p>`;
  }
  const body = rows
    .map((row, i) => {
      const flavors =
        row.top_flavors === null ? "—" : row.top_flavors.map(escapeHtml).join(", ");
      const starred = favorites.includes(row.id);
      const id = escapeHtml(row.id);
      return (
        `<tr>` +
        `<td class="rank">${i + 1}</td>` +
        `<td class="beer-id">${id}</td>` +
        `<td class="score">${row.score.toFixed(4)}</td>` +
        `<td>${stars(row.mean_rating)}</td>` +
        `<td>${flavors}</td>` +
        `<td><button class="rebase" data-beer="${id}">use as base</button>` +
        `<button class="fav${starred ? " on" : ""}" data-beer="${id}">${starred ? "★" : "☆"}</button></td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<table class="results">` +
    `<thead><tr><th>#</th><th>beer</th><th>score</th><th>rating</th><th>top flavors</th><th></th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

/** Describe view: flavor tags ranked by affinity to the chosen beer. */
export function renderFlavorScores(rows: RankedRow[]): string {
  if (rows.length === 0) return `<p class="empty">No flavors.</p>`;
  const body = rows
    .map(
      (row, i) =>
        `<tr><td class="rank">${i + 1}</td><td>${escapeHtml(row.id)}</td>` +
        `<td class="score">${row.score.toFixed(4)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="results flavors">` +
    `<thead><tr><th>#</th><th>flavor</th><th>score</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderBeerOptions(beers: BeerSummary[], selected: string | null): string {
  const blank = `<option value=""${selected === null ? " selected" : ""}>— pick a beer —</option>`;
  const options = beers
    .map((b) => {
      const sel = b.id === selected ? " selected" : "";
      const label = `${b.id} (${b.checkins} check-ins)`;
      return `<option value="${escapeHtml(b.id)}"${sel}>${escapeHtml(label)}</option>`;
    })
    .join("");
  return blank + options;
}

/** Flavor chips with tri-state styling for the builder (off / minus / plus). */
export function renderFlavorChips(tags: string[], minus: string[], plus: string[]): string {
  return tags
    .map((tag) => {
      const cls = minus.includes(tag) ? "chip minus" : plus.includes(tag) ? "chip plus" : "chip";
      const mark = minus.includes(tag) ? "&minus; " : plus.includes(tag) ? "+ " : "";
      return `<button class="${cls}" data-tag="${escapeHtml(tag)}">${mark}${escapeHtml(tag)}</button>`;
    })
    .join("");
}

export function renderSliders(tags: string[], weights: Record<string, number>): string {
  return tags
    .map((tag) => {
      const value = weights[tag] ?? 0;
      return (
        `<label class="slider-row">` +
        `<span class="tag">${escapeHtml(tag)}</span>` +
        `<input type="range" min="0" max="100" step="1" value="${Math.round(value)}" data-tag="${escapeHtml(tag)}">` +
        `<span class="value">${Math.round(value)}</span>` +
        `</label>`
      );
    })
    .join("");
}

export function renderFavorites(favorites: string[]): string {
  if (favorites.length === 0) return `<p class="empty">No favorites picked yet.</p>`;
  const items = favorites
    .map((id) => {
      const safe = escapeHtml(id);
      return (
        `<li><button class="fav-pick" data-beer="${safe}">${safe}</button>` +
        ` <button class="unfav" data-beer="${safe}">remove</button></li>`
      );
    })
    .join("");
  return `<ul class="favorites">${items}</ul>`;
}

const SCATTER_W = 640;
const SCATTER_H = 480;
const SCATTER_PAD = 40;

/** 2-D flavor projection as inline SVG; <title> gives native hover labels. */
export function renderScatter(points: FlavorPoint[]): string {
  if (points.length === 0) return `<p class="empty">No projection available.</p>`;
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  const px = (x: number) => SCATTER_PAD + ((x - xMin) / xSpan) * (SCATTER_W - 2 * SCATTER_PAD);
  // SVG y axis points down; flip so larger y plots higher.
  const py = (y: number) => SCATTER_H - SCATTER_PAD - ((y - yMin) / ySpan) * (SCATTER_H - 2 * SCATTER_PAD);
  const dots = points
    .map((p) => {
      const cx = px(p.x).toFixed(1);
      const cy = py(p.y).toFixed(1);
      const tag = escapeHtml(p.tag);
      return (
        `<g class="dot"><circle cx="${cx}" cy="${cy}" r="5"><title>${tag}</title></circle>` +
        `<text x="${cx}" y="${(py(p.y) - 8).toFixed(1)}">${tag}</text></g>`
      );
    })
    .join("");
  return (
    `<svg viewBox="0 0 ${SCATTER_W} ${SCATTER_H}" class="scatter" role="img">` +
    `<rect x="0" y="0" width="${SCATTER_W}" height="${SCATTER_H}" class="bg"/>` +
    dots +
    `</svg>`
  );
}

export function renderError(message: string): string {
  return `<div class="error">${escapeHtml(message)}</div>`;
}
