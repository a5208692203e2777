/**
 * Dashboard wiring: forms in, API calls out, re-render after every
 * mutation. The current trial id lives in the URL hash and nothing else
 * is stored locally. At most one mutation is in flight at a time.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderError, renderTrial, renderWhatIf } from "./render.js";
import type { TrialStatusPayload } from "./types.js";

const api = new ApiClient("");

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

let busy = false;
let pollTimer: number | undefined;

function trialIdFromHash(): string | null {
  const match = /#trial=([A-Za-z0-9-]+)/.exec(window.location.hash);
  return match ? match[1]! : null;
}

function setTrialId(id: string): void {
  window.location.hash = `trial=${id}`;
}

function showError(message: string): void {
  el("error").innerHTML = renderError(message);
}

function clearError(): void {
  el("error").innerHTML = "";
}

function setEntryEnabled(status: TrialStatusPayload): void {
  const disabled = status.status === "concluded";
  (el("outcome-submit") as HTMLButtonElement).disabled = disabled || busy;
  (el("outcome-size") as HTMLInputElement).disabled = disabled;
  (el("outcome-dlts") as HTMLInputElement).disabled = disabled;
  (el("undo") as HTMLButtonElement).disabled = busy || status.records_live === 0;
}

async function refresh(): Promise<void> {
  const id = trialIdFromHash();
  if (!id) return;
  try {
    const status = await api.getTrial(id);
    el("trial").innerHTML = renderTrial(status);
    setEntryEnabled(status);
    if (status.status === "active") {
      const whatIf = await api.whatIf(id);
      el("whatif").innerHTML = renderWhatIf(whatIf);
    } else {
      el("whatif").innerHTML = "";
    }
  } catch (error) {
    showError(error instanceof Error ? error.message : String(error));
  }
}

async function mutate(action: () => Promise<unknown>): Promise<void> {
  if (busy) return;
  busy = true;
  clearError();
  try {
    await action();
    await refresh();
  } catch (error) {
    // surface the server's reason; the rendered trial state is untouched
    if (error instanceof ApiError) {
      showError(`${error.status}: ${error.message}`);
    } else {
      showError(error instanceof Error ? error.message : String(error));
    }
  } finally {
    busy = false;
  }
}

function intValue(id: string): number {
  return parseInt((el(id) as HTMLInputElement).value, 10);
}

export function wireUp(): void {
  el("create").addEventListener("click", () =>
    mutate(async () => {
      const doses = intValue("create-doses");
      const cohortsRaw = (el("create-cohorts") as HTMLInputElement).value.trim();
      const cohorts = cohortsRaw
        ? cohortsRaw.split(",").map((c) => parseInt(c.trim(), 10))
        : undefined;
      const created = await api.createTrial(doses, cohorts);
      setTrialId(created.id);
    }),
  );
  el("outcome-submit").addEventListener("click", () =>
    mutate(async () => {
      const id = trialIdFromHash();
      if (!id) throw new Error("create or open a trial first");
      await api.submitOutcome(id, intValue("outcome-size"), intValue("outcome-dlts"));
    }),
  );
  el("undo").addEventListener("click", () =>
    mutate(async () => {
      const id = trialIdFromHash();
      if (!id) throw new Error("create or open a trial first");
      await api.undo(id);
    }),
  );
  el("refresh").addEventListener("click", () => void refresh());
  window.addEventListener("hashchange", () => void refresh());
  pollTimer = window.setInterval(() => {
    if (!busy) void refresh();
  }, 10000);
  void refresh();
}

if (typeof document !== "undefined" && document.getElementById("create")) {
  wireUp();
}
