/**
 * Entry point. Page roles come from the URL:
 *
 *   ?session=<id>&token=<guest token>           guest page
 *   ?session=<id>&token=<secret token>&role=secret   secret page
 *
 * With no session parameter the page shows a small create-session form
 * and prints per-participant links.
 */

import { Client, createSession, getResult, getState } from "./api";
import { guestFlow, secretFlow } from "./flows";
import {
  renderChoose,
  renderCutPrompt,
  renderError,
  renderEvalPrompt,
  renderResult,
  renderWaiting,
} from "./ui";
import type { GuestView, SecretView } from "./viewmodel";

const API_BASE = import.meta.env?.VITE_API_BASE ?? "";

function app(): HTMLElement {
  return document.getElementById("app")!;
}

async function runGuestPage(client: Client, token: string): Promise<void> {
  const root = app();
  await guestFlow(client, token, {
    async render(view: GuestView): Promise<string | null> {
      if (view.kind === "cut") return await renderCutPrompt(root, view);
      if (view.kind === "eval") return await renderEvalPrompt(root, view);
      if (view.kind === "finished") {
        const state = await getState(client);
        root.replaceChildren();
        if (state.pieces) {
          renderResult(root, await getResult(client), state.guests, state.secret_name);
        }
        return null;
      }
      renderWaiting(root, view.phase, view.stage);
      return null;
    },
    rejected(message, bounds) {
      renderError(root, message, bounds);
    },
  });
}

async function runSecretPage(client: Client, token: string): Promise<void> {
  const root = app();
  const state = await getState(client);
  await secretFlow(client, token, {
    async render(view: SecretView): Promise<number | null> {
      if (view.kind === "choose") return await renderChoose(root, view.pieces);
      if (view.kind === "result") {
        renderResult(root, view.result, state.guests, state.secret_name);
        return null;
      }
      renderWaiting(root, view.phase, "partition");
      return null;
    },
    rejected(message) {
      renderError(root, message, null);
    },
  });
}

async function runCreatePage(): Promise<void> {
  const root = app();
  root.replaceChildren();
  const form = document.createElement("form");
  form.innerHTML = `
    <p>Start a live cake-cutting session.</p>
    <label>Guest names (comma-separated): <input name="guests" value="ana, bo"></label>
    <label>Secret participant: <input name="secret" value="the birthday kid"></label>
    <button type="submit">Create session</button>
  `;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const guests = String(data.get("guests") ?? "")
      .split(",")
      .map((s) => s.trim())
      .filter(Boolean);
    const created = await createSession(API_BASE, guests, String(data.get("secret")));
    const links = document.createElement("ul");
    for (const guest of created.guests) {
      const a = `?session=${created.id}&token=${guest.token}`;
      links.innerHTML += `<li>${guest.name}: <a href="${a}">${a}</a></li>`;
    }
    const s = `?session=${created.id}&token=${created.secret.token}&role=secret`;
    links.innerHTML += `<li>${created.secret.name}: <a href="${s}">${s}</a></li>`;
    root.appendChild(links);
  });
  root.appendChild(form);
}

export async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  const token = params.get("token");
  if (!sessionId || !token) {
    await runCreatePage();
    return;
  }
  const client: Client = { base: API_BASE, sessionId };
  if (params.get("role") === "secret") {
    await runSecretPage(client, token);
  } else {
    await runGuestPage(client, token);
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot();
}
