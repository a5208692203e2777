/**
 * Contract tests against the real service: spawn it, drive trials the
 * way the dashboard does, and check that what the renderer displays is
 * exactly what the status endpoint reports.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { decisionLabel, renderTrial, renderWhatIf } from "../src/render.js";

const PORT = 8973;
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;
const api = new ApiClient(BASE);

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/protocol/paths?doses=1`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "dosepath-ui-"));
  service = spawn(
    "python3",
    ["-m", "dosepath.cli", "serve", "--port", String(PORT), "--data", dataDir],
    { cwd: join(__dirname, "..", ".."), stdio: "ignore" },
  );
  await waitForService();
}, 30000);

afterAll(() => {
  service.kill();
});

describe("concluding a two-dose trial from the dashboard", () => {
  it("renders the concluded view with no dose recommended", async () => {
    const created = await api.createTrial(2);
    const afterOutcome = await api.submitOutcome(created.id, 3, 2);
    expect(afterOutcome.status).toBe("concluded");
    expect(afterOutcome.recommendation).toBe(0);

    const status = await api.getTrial(created.id);
    const html = renderTrial(status);
    expect(html).toContain("trial concluded");
    expect(html).toContain("no dose recommended");
    expect(html).toContain(">2/3<");
  });

  it("rejects further outcomes and surfaces the server's reason", async () => {
    const created = await api.createTrial(2);
    await api.submitOutcome(created.id, 3, 2);
    try {
      await api.submitOutcome(created.id, 3, 0);
      expect.unreachable("submitting on a concluded trial must fail");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).status).toBe(409);
      expect((error as ApiError).message).toContain("concluded");
    }
  });
});

describe("the what-if panel on a fresh cohorts-[3] trial", () => {
  it("shows exactly four outcome rows", async () => {
    const created = await api.createTrial(2);
    const whatIf = await api.whatIf(created.id);
    expect(whatIf.options).toHaveLength(4);
    const html = renderWhatIf(whatIf);
    expect(html.match(/class="whatif-row"/g)).toHaveLength(4);
  });

  it("marks the 2-DLT row as concluding with no dose", async () => {
    const created = await api.createTrial(2);
    const whatIf = await api.whatIf(created.id);
    const html = renderWhatIf(whatIf);
    const row = whatIf.options.find((o) => o.dlts === 2);
    expect(row?.status).toBe("concluded");
    expect(row?.recommendation).toBe(0);
    expect(html).toContain("trial would conclude, no dose recommended");
  });

  it("offers rows for every configured cohort size under rolling enrollment", async () => {
    const created = await api.createTrial(2, [3, 2, 1]);
    const whatIf = await api.whatIf(created.id);
    const sizes = new Set(whatIf.options.map((o) => o.size));
    expect([...sizes].sort()).toEqual([1, 2, 3]);
  });
});

describe("displayed decisions come from the service, never the client", () => {
  it("renders exactly the decision the status endpoint reports, step by step", async () => {
    const created = await api.createTrial(3);
    const steps: Array<[number, number]> = [
      [3, 0],
      [3, 1],
      [3, 1],
    ];
    // fresh trial first
    let status = await api.getTrial(created.id);
    for (const [size, dlts] of steps) {
      const html = renderTrial(status);
      const label = decisionLabel(status.next_decision, status.current_dose);
      expect(html).toContain(`next: ${label}`);
      expect(html).toContain(status.state_text);
      await api.submitOutcome(created.id, size, dlts);
      status = await api.getTrial(created.id);
    }
  });

  it("undo is rendered as an audited correction", async () => {
    const created = await api.createTrial(2);
    await api.submitOutcome(created.id, 3, 2);
    const undone = await api.undo(created.id);
    expect(undone.status).toBe("active");
    const html = renderTrial(undone);
    expect(html).toContain("correction: entry #1 undone");
    expect(html).toContain("next: stay at dose 1");
  });
});
