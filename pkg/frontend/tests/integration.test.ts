/**
 * The what-if loop against the real engine: spawns `goalgraph serve` on the
 * bundled fixture and drives the UI's own state -> evaluate -> render cycle.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, copyFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderGraph } from "../src/graphview.js";
import { buildChart } from "../src/sweepchart.js";
import { initialState, setConfidenceAdjust, toggleRequirement } from "../src/state.js";
import { validateScenario } from "../src/schema.js";
import type { EvaluationJson, ModelJson } from "../src/types.js";

const FIXTURE = resolve(__dirname, "../../src/goalgraph/fixtures/alignment.goal");

let server: ChildProcess;
let api: ApiClient;
let model: ModelJson;

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "goalgraph-ui-"));
  const modelPath = join(dir, "alignment.goal");
  copyFileSync(FIXTURE, modelPath);
  server = spawn("python3", ["-m", "goalgraph.cli", "serve", modelPath,
                             "--port", "0"],
                 { stdio: ["ignore", "pipe", "pipe"] });
  const base = await new Promise<string>((resolvePort, reject) => {
    const timer = setTimeout(() => reject(new Error("server did not start")),
                             15000);
    let buffer = "";
    server.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/http:\/\/([\d.]+):(\d+)\//);
      if (match) {
        clearTimeout(timer);
        resolvePort(`http://127.0.0.1:${match[2]}`);
      }
    });
    server.on("exit", (code) => reject(new Error(`server exited ${code}`)));
  });
  api = new ApiClient(base);
  model = await api.model();
}, 30000);

afterAll(() => {
  server?.kill();
});

describe("what-if loop against the live engine", () => {
  it("toggling requirement 1 off turns objective 4 unsatisfied in one round-trip",
     async () => {
    let view = initialState(model);
    expect(validateScenario(view.draft, model)).toEqual([]);
    const before = (await api.evaluate(view.draft)) as EvaluationJson;
    expect(before.outcomes.obj4.status).toBe("satisfied");
    expect(renderGraph(model, before))
      .toMatch(/data-node="obj4"[^>]*fill="palegreen"/);

    view = { ...view, draft: toggleRequirement(view.draft, model, "req1") };
    const after = (await api.evaluate(view.draft)) as EvaluationJson;
    expect(after.outcomes.obj4.status).toBe("unsatisfied");
    expect(renderGraph(model, after))
      .toMatch(/data-node="obj4"[^>]*fill="lightcoral"/);
  });

  it("confidence toggle flips objective 6 between unsatisfied and satisfied",
     async () => {
    let view = initialState(model);
    const adjusted = (await api.evaluate(view.draft)) as EvaluationJson;
    expect(adjusted.outcomes.obj6.status).toBe("unsatisfied");
    expect(adjusted.outcomes.obj6.achieved).toBeCloseTo(29.75, 9);
    expect(renderGraph(model, adjusted))
      .toMatch(/data-node="obj6"[^>]*fill="lightcoral"/);

    view = { ...view, draft: setConfidenceAdjust(view.draft, false) };
    const plain = (await api.evaluate(view.draft)) as EvaluationJson;
    expect(plain.outcomes.obj6.status).toBe("satisfied");
    expect(plain.outcomes.obj6.achieved).toBeCloseTo(33, 9);
    expect(renderGraph(model, plain))
      .toMatch(/data-node="obj6"[^>]*fill="palegreen"/);
  });

  it("sweep panel renders the step curve from API data (2 FTEs at 33)",
     async () => {
    const view = initialState(model);
    const draft = setConfidenceAdjust(view.draft, false);
    const sweep = await api.sweep("obj6", 0, 50, 51, draft);
    const geometry = buildChart(model, sweep, "obj8");
    expect(geometry.kind).toBe("step");
    const at33 = geometry.points.find((p) => p.level === 33)!;
    const at32 = geometry.points.find((p) => p.level === 32)!;
    const at50 = geometry.points.find((p) => p.level === 50)!;
    expect(at33.value).toBe(2);
    expect(at32.value).toBe(1);
    expect(at50.value).toBe(3);
    const values = geometry.points.map((p) => p.value);
    expect([...values].sort((a, b) => a - b)).toEqual(values); // staircase up
  });

  it("stale evaluations lose to the latest draft", async () => {
    const view = initialState(model);
    const slow = api.evaluate(view.draft);
    const fast = api.evaluate(toggleRequirement(view.draft, model, "req2"));
    const [slowResult, fastResult] = await Promise.all([slow, fast]);
    expect(slowResult).toBeNull();
    expect(fastResult).not.toBeNull();
  });
});
