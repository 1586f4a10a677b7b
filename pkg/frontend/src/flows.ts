/**
 * Participant flows: poll, render, submit, repeat.
 *
 * The IO interfaces isolate the DOM so the flows run identically under a
 * browser and under tests. A guest keeps serving questions until the
 * session completes (the assignment phase can hand out a few more eval
 * questions after the secret participant picks). The secret flow never
 * touches the queries endpoint.
 */

import {
  ApiError,
  Client,
  QueryPayload,
  ResultPayload,
  SessionState,
  getResult,
  getState,
  nextQuery,
  submitAnswer,
  submitChoice,
} from "./api";
import { GuestView, SecretView, guestView, secretView } from "./viewmodel";

export interface FlowOptions {
  pollMs?: number;
  signal?: AbortSignal;
}

function sleep(ms: number, signal?: AbortSignal): Promise<void> {
  return new Promise((resolve) => {
    const t = setTimeout(resolve, ms);
    signal?.addEventListener("abort", () => {
      clearTimeout(t);
      resolve();
    });
  });
}

export interface GuestIO {
  /** Render the current view; for cut/eval views, resolve with the text
   * the participant entered ("p/q" or decimal). */
  render(view: GuestView): Promise<string | null>;
  /** Surface a server rejection (bounds included when given). */
  rejected(message: string, bounds: { lo: string; hi: string } | null): void;
}

export async function guestFlow(
  client: Client,
  token: string,
  io: GuestIO,
  options: FlowOptions = {},
): Promise<SessionState> {
  const pollMs = options.pollMs ?? 400;
  for (;;) {
    if (options.signal?.aborted) return await getState(client);
    const state = await getState(client);
    if (state.phase === "complete") {
      await io.render(guestView(state, null));
      return state;
    }
    const query: QueryPayload | null =
      state.phase === "collecting-answers" ? await nextQuery(client, token) : null;
    const entered = await io.render(guestView(state, query));
    if (query === null || entered === null) {
      await sleep(pollMs, options.signal);
      continue;
    }
    try {
      await submitAnswer(client, token, entered);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        io.rejected(String(JSON.stringify(error.detail)), error.bounds);
        continue; // state unchanged server-side; re-render the same query
      }
      if (error instanceof ApiError && error.status === 409) {
        continue; // someone else's turn arrived first; just re-poll
      }
      throw error;
    }
  }
}

export interface SecretIO {
  /** Render the current view; for the "choose" view, resolve with the
   * confirmed 1-based piece index. */
  render(view: SecretView): Promise<number | null>;
  rejected(message: string): void;
}

export async function secretFlow(
  client: Client,
  token: string,
  io: SecretIO,
  options: FlowOptions = {},
): Promise<ResultPayload> {
  const pollMs = options.pollMs ?? 400;
  for (;;) {
    const state = await getState(client);
    if (state.phase === "complete") {
      const result = await getResult(client);
      await io.render(secretView(state, result));
      return result;
    }
    const picked = await io.render(secretView(state, null));
    if (state.phase === "awaiting-secret-choice" && picked !== null) {
      try {
        await submitChoice(client, picked, token);
      } catch (error) {
        if (error instanceof ApiError) {
          io.rejected(JSON.stringify(error.detail));
          continue;
        }
        throw error;
      }
      continue; // completion (or live assignment phase) shows up on the next poll
    }
    await sleep(pollMs, options.signal);
  }
}
