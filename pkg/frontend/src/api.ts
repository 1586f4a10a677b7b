/** Typed client for the session service HTTP API — the console's only
 * source of data. */

export interface IntervalPayload {
  lo: string;
  hi: string;
}

export interface CutQueryPayload {
  agent: number;
  kind: "cut";
  piece: IntervalPayload;
  fraction: string;
}

export interface EvalQueryPayload {
  agent: number;
  kind: "eval";
  interval: IntervalPayload;
}

export type QueryPayload = CutQueryPayload | EvalQueryPayload;

export interface SessionState {
  id: string;
  phase: "collecting-answers" | "awaiting-secret-choice" | "complete";
  stage: "partition" | "assignment";
  scripted: boolean;
  guests: { agent: number; name: string }[];
  secret_name: string;
  piece_count: number | null;
  pieces: IntervalPayload[] | null;
  choice: number | null;
  awaiting_agent: number | null;
  transcript: string[] | null;
}

export interface ReportRowPayload {
  agent: number;
  piece: number;
  mass: string;
  threshold: string;
  ok: boolean;
}

export interface ResultPayload {
  pieces: IntervalPayload[];
  choice: number;
  assignment: Record<string, number>;
  threshold: string;
  report: { verdict: boolean; rows: ReportRowPayload[] } | null;
  table: Record<string, Record<string, number>> | null;
}

export interface CreatedSession {
  id: string;
  guests: { agent: number; name: string; token: string }[];
  secret: { name: string; token: string };
  phase: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }

  /** Server-provided bounds for out-of-range answers, when present. */
  get bounds(): { lo: string; hi: string } | null {
    const d = this.detail as { bounds?: { lo: string; hi: string } } | null;
    return d && typeof d === "object" && d.bounds ? d.bounds : null;
  }
}

export interface Client {
  base: string;
  sessionId: string;
  fetchImpl?: typeof fetch;
}

async function request(
  client: Client,
  method: string,
  path: string,
  body?: unknown,
): Promise<unknown> {
  const doFetch = client.fetchImpl ?? fetch;
  const response = await doFetch(`${client.base}${path}`, {
    method,
    headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
    body: body !== undefined ? JSON.stringify(body) : undefined,
  });
  const text = await response.text();
  const data = text ? JSON.parse(text) : null;
  if (!response.ok) {
    throw new ApiError(response.status, (data as { detail?: unknown })?.detail ?? data);
  }
  return data;
}

export async function createSession(
  base: string,
  guests: string[],
  secret: string,
  valuations?: unknown[],
  fetchImpl?: typeof fetch,
): Promise<CreatedSession> {
  const body: Record<string, unknown> = { guests, secret };
  if (valuations) body.valuations = valuations;
  return (await request(
    { base, sessionId: "", fetchImpl },
    "POST",
    "/sessions",
    body,
  )) as CreatedSession;
}

export async function getState(client: Client): Promise<SessionState> {
  return (await request(client, "GET", `/sessions/${client.sessionId}`)) as SessionState;
}

export async function nextQuery(client: Client, token: string): Promise<QueryPayload | null> {
  const data = (await request(
    client,
    "GET",
    `/sessions/${client.sessionId}/queries/next?token=${encodeURIComponent(token)}`,
  )) as { query: QueryPayload | null };
  return data.query;
}

export async function submitAnswer(
  client: Client,
  token: string,
  value: string,
): Promise<void> {
  await request(client, "POST", `/sessions/${client.sessionId}/answers`, {
    token,
    value,
  });
}

export async function submitChoice(
  client: Client,
  piece: number,
  token?: string,
): Promise<void> {
  const body: Record<string, unknown> = { piece };
  if (token) body.token = token;
  await request(client, "POST", `/sessions/${client.sessionId}/choice`, body);
}

export async function getResult(client: Client): Promise<ResultPayload> {
  return (await request(
    client,
    "GET",
    `/sessions/${client.sessionId}/result`,
  )) as ResultPayload;
}
