/**
 * Pure view models: API payloads in, render-ready descriptions out.
 *
 * The secret participant's view types have no query-shaped variant at
 * all, so "no query UI for the secret at any phase" holds by
 * construction, not by a conditional somewhere in the DOM code.
 */

import type {
  IntervalPayload,
  QueryPayload,
  ResultPayload,
  SessionState,
} from "./api";
import { parseRat, sub, toNumber } from "./rational";

export const DEFAULT_SLIDER_GRID = 96;

export type GuestView =
  | { kind: "waiting"; phase: string; stage: string }
  | {
      kind: "cut";
      lo: string;
      hi: string;
      fraction: string;
      grid: number;
      prompt: string;
    }
  | { kind: "eval"; lo: string; hi: string; prompt: string }
  | { kind: "finished"; phase: string };

export function guestView(
  state: SessionState,
  query: QueryPayload | null,
  grid: number = DEFAULT_SLIDER_GRID,
): GuestView {
  if (state.phase === "complete") return { kind: "finished", phase: state.phase };
  if (query === null)
    return { kind: "waiting", phase: state.phase, stage: state.stage };
  if (query.kind === "cut") {
    return {
      kind: "cut",
      lo: query.piece.lo,
      hi: query.piece.hi,
      fraction: query.fraction,
      grid,
      prompt:
        `Mark the point where [${query.piece.lo}, ${query.piece.hi}] ` +
        `splits at ${query.fraction} of its value to you.`,
    };
  }
  return {
    kind: "eval",
    lo: query.interval.lo,
    hi: query.interval.hi,
    prompt:
      `How much is [${query.interval.lo}, ${query.interval.hi}] ` +
      `worth to you, out of 1?`,
  };
}

export type SecretView =
  | { kind: "waiting"; phase: string }
  | { kind: "choose"; pieces: IntervalPayload[] }
  | { kind: "result"; result: ResultPayload };

export function secretView(
  state: SessionState,
  result: ResultPayload | null,
): SecretView {
  if (state.phase === "complete" && result !== null) return { kind: "result", result };
  if (state.phase === "awaiting-secret-choice" && state.pieces)
    return { kind: "choose", pieces: state.pieces };
  return { kind: "waiting", phase: state.phase };
}

export interface BarSegment {
  index: number;
  lo: string;
  hi: string;
  leftPercent: number;
  widthPercent: number;
}

/** Proportional segments of [0,1] for the piece bar (floats are display
 * geometry only). */
export function pieceBarSegments(pieces: IntervalPayload[]): BarSegment[] {
  return pieces.map((piece, i) => {
    const lo = parseRat(piece.lo);
    const hi = parseRat(piece.hi);
    return {
      index: i + 1,
      lo: piece.lo,
      hi: piece.hi,
      leftPercent: toNumber(lo) * 100,
      widthPercent: toNumber(sub(hi, lo)) * 100,
    };
  });
}

export interface ResultRow {
  who: string;
  piece: number;
  lo: string;
  hi: string;
  mass: string | null;
  threshold: string | null;
  ok: boolean | null;
}

export function resultRows(
  result: ResultPayload,
  guests: { agent: number; name: string }[],
  secretName: string,
): ResultRow[] {
  const pieceAt = (index: number) => result.pieces[index - 1]!;
  const reportByAgent = new Map(
    (result.report?.rows ?? []).map((row) => [row.agent, row]),
  );
  const rows: ResultRow[] = [
    {
      who: `${secretName} (picked first)`,
      piece: result.choice,
      lo: pieceAt(result.choice).lo,
      hi: pieceAt(result.choice).hi,
      mass: null,
      threshold: null,
      ok: null,
    },
  ];
  for (const guest of guests) {
    const piece = result.assignment[String(guest.agent)];
    if (piece === undefined) continue;
    const report = reportByAgent.get(guest.agent);
    rows.push({
      who: guest.name,
      piece,
      lo: pieceAt(piece).lo,
      hi: pieceAt(piece).hi,
      mass: report?.mass ?? null,
      threshold: report?.threshold ?? null,
      ok: report?.ok ?? null,
    });
  }
  return rows;
}
