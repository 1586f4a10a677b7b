/** DOM rendering for the participant pages. */

import type { IntervalPayload } from "./api";
import { GuestView, SecretView, pieceBarSegments, resultRows } from "./viewmodel";
import type { ResultPayload } from "./api";
import { formatRat, parseRat, sliderValue, toNumber } from "./rational";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderPieceBar(
  pieces: IntervalPayload[],
  onClick?: (index: number) => void,
  highlight?: number,
): HTMLElement {
  const bar = el("div", "piece-bar");
  for (const segment of pieceBarSegments(pieces)) {
    const div = el("div", "piece-segment", String(segment.index));
    div.style.left = `${segment.leftPercent}%`;
    div.style.width = `${segment.widthPercent}%`;
    div.title = `piece ${segment.index}: [${segment.lo}, ${segment.hi}]`;
    if (segment.index === highlight) div.classList.add("chosen");
    if (onClick) {
      div.classList.add("clickable");
      div.addEventListener("click", () => onClick(segment.index));
    }
    bar.appendChild(div);
  }
  return bar;
}

/** Cut answer widget: a slider spanning exactly the queried subcake plus
 * a free-text exact fraction field. Resolves with the entered value. */
export function renderCutPrompt(
  root: HTMLElement,
  view: Extract<GuestView, { kind: "cut" }>,
): Promise<string> {
  return new Promise((resolve) => {
    root.replaceChildren();
    root.appendChild(el("p", "prompt", view.prompt));

    const lo = parseRat(view.lo);
    const hi = parseRat(view.hi);
    const slider = el("input", "cut-slider");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(view.grid);
    slider.value = String(Math.round(view.grid / 2));

    const text = el("input", "cut-text");
    text.type = "text";
    text.value = formatRat(sliderValue(lo, hi, view.grid / 2, view.grid));

    const scale = el("div", "scale");
    scale.append(el("span", "lo", view.lo), el("span", "hi", view.hi));

    slider.addEventListener("input", () => {
      text.value = formatRat(sliderValue(lo, hi, Number(slider.value), view.grid));
    });
    text.addEventListener("input", () => {
      try {
        const v = parseRat(text.value);
        const span = toNumber(hi) - toNumber(lo) || 1;
        slider.value = String(
          Math.round(((toNumber(v) - toNumber(lo)) / span) * view.grid),
        );
      } catch {
        /* free typing; validated on submit by the server */
      }
    });

    const submit = el("button", "submit", "Submit cut");
    submit.addEventListener("click", () => resolve(text.value));
    root.append(scale, slider, text, submit);
  });
}

export function renderEvalPrompt(
  root: HTMLElement,
  view: Extract<GuestView, { kind: "eval" }>,
): Promise<string> {
  return new Promise((resolve) => {
    root.replaceChildren();
    root.appendChild(el("p", "prompt", view.prompt));
    const highlightBar = renderPieceBar([{ lo: view.lo, hi: view.hi }]);
    highlightBar.classList.add("highlighted-segment");
    const text = el("input", "eval-text");
    text.type = "text";
    text.placeholder = "e.g. 5/12 or 0.42";
    const submit = el("button", "submit", "Submit value");
    submit.addEventListener("click", () => resolve(text.value));
    root.append(highlightBar, text, submit);
  });
}

export function renderWaiting(root: HTMLElement, phase: string, stage: string): void {
  root.replaceChildren();
  root.appendChild(
    el(
      "p",
      "waiting",
      phase === "awaiting-secret-choice"
        ? "Waiting for the first pick..."
        : `Waiting for your next question (${stage})...`,
    ),
  );
}

export function renderError(
  root: HTMLElement,
  message: string,
  bounds: { lo: string; hi: string } | null,
): void {
  const existing = root.querySelector(".error");
  existing?.remove();
  const line = el(
    "p",
    "error",
    bounds
      ? `Rejected: answer must lie in [${bounds.lo}, ${bounds.hi}].`
      : `Rejected: ${message}`,
  );
  root.appendChild(line);
}

export function renderChoose(
  root: HTMLElement,
  pieces: IntervalPayload[],
): Promise<number> {
  return new Promise((resolve) => {
    root.replaceChildren();
    root.appendChild(el("p", "prompt", "The cake is cut. Pick your piece first:"));
    let selected: number | null = null;
    const confirm = el("button", "confirm", "Confirm choice");
    confirm.disabled = true;
    const bar = renderPieceBar(pieces, (index) => {
      selected = index;
      confirm.disabled = false;
      confirm.textContent = `Confirm piece ${index}`;
      bar.querySelectorAll(".piece-segment").forEach((seg, i) =>
        seg.classList.toggle("chosen", i + 1 === index),
      );
    });
    confirm.addEventListener("click", () => {
      if (selected !== null) resolve(selected);
    });
    root.append(bar, confirm);
  });
}

export function renderResult(
  root: HTMLElement,
  result: ResultPayload,
  guests: { agent: number; name: string }[],
  secretName: string,
): void {
  root.replaceChildren();
  root.appendChild(el("p", "prompt", "Final allocation"));
  root.appendChild(renderPieceBar(result.pieces, undefined, result.choice));
  const table = el("table", "result-table");
  const head = el("tr");
  for (const h of ["who", "piece", "interval", "own value", "promised"])
    head.appendChild(el("th", undefined, h));
  table.appendChild(head);
  for (const row of resultRows(result, guests, secretName)) {
    const tr = el("tr");
    tr.append(
      el("td", undefined, row.who),
      el("td", undefined, String(row.piece)),
      el("td", undefined, `[${row.lo}, ${row.hi}]`),
      el("td", undefined, row.mass ?? "—"),
      el("td", undefined, row.threshold ? `>= ${row.threshold}` : `>= ${result.threshold}`),
    );
    if (row.ok === false) tr.classList.add("violation");
    table.appendChild(tr);
  }
  root.appendChild(table);
}
