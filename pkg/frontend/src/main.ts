// Bootstrap: read connection settings, wire the store to the DOM, poll
// the queue so claim expirations and other reviewers' progress show up.

import { ApiClient } from "./api.js";
import { bindKeyboard } from "./keyboard.js";
import { render } from "./render.js";
import { ReviewSession } from "./store.js";

function setting(name: string, prompt_text: string): string {
  const params = new URLSearchParams(window.location.search);
  const fromUrl = params.get(name);
  if (fromUrl) {
    localStorage.setItem(`mecheval.${name}`, fromUrl);
    return fromUrl;
  }
  const stored = localStorage.getItem(`mecheval.${name}`);
  if (stored) return stored;
  const typed = window.prompt(prompt_text) ?? "";
  localStorage.setItem(`mecheval.${name}`, typed);
  return typed;
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");

  const base = setting("api", "Review API base URL (e.g. http://127.0.0.1:8351)");
  const token = setting("token", "Reviewer token");
  const api = new ApiClient(base, token);

  let runId = setting("run", "");
  if (!runId) {
    const { runs } = await api.listRuns();
    runId = runs[0] ?? window.prompt("Run id") ?? "";
  }

  const session = new ReviewSession(api, runId);
  session.subscribe(() => render(root, session));
  bindKeyboard(session, window);
  await session.loadQueue();
  await session.refreshReport();

  // claims expire server-side; keep the view honest while idle
  setInterval(() => {
    const state = session.getState();
    if (!state.busy && !state.current) void session.loadQueue();
  }, 15000);
}

void start();
