import { describe, expect, it } from "vitest";

import type { Client, QueryPayload, SessionState } from "../src/api";
import { guestFlow, secretFlow } from "../src/flows";
import type { GuestView } from "../src/viewmodel";

/** Minimal stateful fake of the session service, enough for the flows. */
class FakeServer {
  phase: SessionState["phase"] = "collecting-answers";
  queue: { token: string; query: QueryPayload; accept: string }[] = [];
  answered: string[] = [];
  requests: string[] = [];
  rejectNextWithBounds: { lo: string; hi: string } | null = null;
  result = {
    pieces: [
      { lo: "0", hi: "1/3" },
      { lo: "1/3", hi: "2/3" },
      { lo: "2/3", hi: "1" },
    ],
    choice: 2,
    assignment: { "1": 1, "2": 3 },
    threshold: "1/3",
    report: null,
    table: null,
  };

  state(): SessionState {
    return {
      id: "s1",
      phase: this.phase,
      stage: "partition",
      scripted: false,
      guests: [{ agent: 1, name: "ana" }],
      secret_name: "host",
      piece_count: this.phase === "collecting-answers" ? null : 3,
      pieces: this.phase === "collecting-answers" ? null : this.result.pieces,
      choice: null,
      awaiting_agent: this.queue[0]?.query.agent ?? null,
      transcript: null,
    };
  }

  fetch: typeof fetch = async (input, init) => {
    const url = String(input);
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    this.requests.push(`${init?.method ?? "GET"} ${path}`);
    const reply = (status: number, body: unknown) =>
      new Response(JSON.stringify(body), { status });

    if (path === "/sessions/s1") return reply(200, this.state());
    if (path.startsWith("/sessions/s1/queries/next")) {
      const token = new URL(url, "http://x").searchParams.get("token");
      const head = this.queue[0];
      return reply(200, {
        query: head && head.token === token ? head.query : null,
        phase: this.phase,
      });
    }
    if (path === "/sessions/s1/answers") {
      if (this.rejectNextWithBounds) {
        const bounds = this.rejectNextWithBounds;
        this.rejectNextWithBounds = null;
        return reply(422, { detail: { error: "outside subcake", bounds } });
      }
      const body = JSON.parse(String(init?.body));
      const head = this.queue[0];
      if (!head || head.token !== body.token) {
        return reply(409, { detail: "no outstanding query for you" });
      }
      expect(body.value).toBe(head.accept);
      this.answered.push(body.value);
      this.queue.shift();
      if (this.queue.length === 0) this.phase = "awaiting-secret-choice";
      return reply(200, { ok: true, phase: this.phase, transcript_length: this.answered.length });
    }
    if (path === "/sessions/s1/choice") {
      const body = JSON.parse(String(init?.body));
      if (this.phase !== "awaiting-secret-choice") return reply(409, { detail: "wrong phase" });
      expect(body.piece).toBe(2);
      this.phase = "complete";
      return reply(200, { ok: true, phase: this.phase, choice: body.piece });
    }
    if (path === "/sessions/s1/result") {
      if (this.phase !== "complete") return reply(409, { detail: "no result yet" });
      return reply(200, this.result);
    }
    return reply(404, { detail: `unhandled ${path}` });
  };

  client(): Client {
    return { base: "http://fake", sessionId: "s1", fetchImpl: this.fetch };
  }
}

const cutQuery: QueryPayload = {
  agent: 1,
  kind: "cut",
  piece: { lo: "0", hi: "1" },
  fraction: "1/2",
};

describe("guestFlow", () => {
  it("polls, renders the pending query, submits, and keeps serving once the phase moves on", async () => {
    const server = new FakeServer();
    server.queue = [{ token: "tok1", query: cutQuery, accept: "1/2" }];
    const seen: GuestView["kind"][] = [];
    const controller = new AbortController();
    const state = await guestFlow(
      server.client(),
      "tok1",
      {
        async render(view) {
          seen.push(view.kind);
          if (view.kind === "cut") return "1/2";
          // phase left collecting-answers: the guest is now just waiting
          if (view.kind === "waiting" && view.phase === "awaiting-secret-choice") {
            controller.abort();
          }
          return null;
        },
        rejected() {
          throw new Error("unexpected rejection");
        },
      },
      { pollMs: 1, signal: controller.signal },
    );
    expect(server.answered).toEqual(["1/2"]);
    expect(seen).toContain("cut");
    expect(state.phase).toBe("awaiting-secret-choice");
  }, 10_000);

  it("waits (renders waiting state) while the query belongs to someone else", async () => {
    const server = new FakeServer();
    server.queue = [
      { token: "other", query: { ...cutQuery, agent: 2 }, accept: "1/3" },
    ];
    const seen: string[] = [];
    const controller = new AbortController();
    const flow = guestFlow(
      server.client(),
      "tok1",
      {
        async render(view) {
          seen.push(view.kind);
          if (seen.length >= 3) controller.abort();
          return view.kind === "cut" ? "1/2" : null;
        },
        rejected() {},
      },
      { pollMs: 1, signal: controller.signal },
    );
    await flow;
    expect(seen.every((kind) => kind === "waiting")).toBe(true);
    expect(server.answered).toEqual([]);
  }, 10_000);

  it("surfaces a 422 with the server's bounds and re-prompts without advancing", async () => {
    const server = new FakeServer();
    server.queue = [{ token: "tok1", query: cutQuery, accept: "1/2" }];
    server.rejectNextWithBounds = { lo: "0", hi: "1" };
    const rejections: { lo: string; hi: string }[] = [];
    let attempts = 0;
    const controller = new AbortController();
    await guestFlow(
      server.client(),
      "tok1",
      {
        async render(view) {
          if (view.kind !== "cut") {
            if (server.answered.length > 0) controller.abort();
            return null;
          }
          attempts += 1;
          return attempts === 1 ? "3/2" : "1/2"; // first answer is out of range
        },
        rejected(_message, bounds) {
          if (bounds) rejections.push(bounds);
        },
      },
      { pollMs: 1, signal: controller.signal },
    );
    expect(rejections).toEqual([{ lo: "0", hi: "1" }]);
    expect(server.answered).toEqual(["1/2"]);
  }, 10_000);
});

describe("secretFlow", () => {
  it("never requests queries/next, picks once choosable, and renders the result", async () => {
    const server = new FakeServer();
    server.queue = [{ token: "tok1", query: cutQuery, accept: "1/2" }];

    // a guest finishes the partition concurrently
    const guest = guestFlow(
      server.client(),
      "tok1",
      {
        async render(view) {
          return view.kind === "cut" ? "1/2" : null;
        },
        rejected() {},
      },
      { pollMs: 1 },
    );

    const result = await secretFlow(
      server.client(),
      "secret-tok",
      {
        async render(view) {
          if (view.kind === "choose") {
            expect(view.pieces).toHaveLength(3);
            return 2;
          }
          return null;
        },
        rejected(message) {
          throw new Error(message);
        },
      },
      { pollMs: 1 },
    );
    await guest;

    expect(result.assignment).toEqual({ "1": 1, "2": 3 });
    const queryCalls = server.requests.filter((r) => r.includes("/queries/next"));
    expect(queryCalls.every((r) => r.includes("token=tok1"))).toBe(true);
  }, 10_000);

  it("restores the result view from GET /result after a refresh", async () => {
    const server = new FakeServer();
    server.queue = [];
    server.phase = "complete"; // page reopened on an already-finished session
    const rendered: string[] = [];
    const result = await secretFlow(
      server.client(),
      "secret-tok",
      {
        async render(view) {
          rendered.push(view.kind);
          return null;
        },
        rejected() {},
      },
      { pollMs: 1 },
    );
    expect(rendered).toEqual(["result"]);
    expect(result.choice).toBe(2);
    expect(server.requests).toContain("GET /sessions/s1/result");
    expect(server.requests.some((r) => r.includes("/queries/next"))).toBe(false);
  }, 10_000);
});
