import { describe, expect, it } from "vitest";

import { buildChart, renderSweepChart } from "../src/sweepchart.js";
import { renderGraph } from "../src/graphview.js";
import { renderComparison, renderTracking } from "../src/panels.js";
import { layout, rankNodes } from "../src/layout.js";
import { addKnot, editorFrom, looksNonMonotone, moveKnot,
         problemsOf, proposalOf } from "../src/funceditor.js";
import { validateProposal } from "../src/schema.js";
import type { ComparisonJson, SweepJson, VarianceJson } from "../src/types.js";
import { cannedResult, miniModel, stepSweep } from "./fixtures.js";

describe("layout", () => {
  it("ranks every contribution edge upward", () => {
    const model = miniModel();
    const ranks = rankNodes(model);
    for (const link of Object.values(model.contributions)) {
      expect(ranks.get(link.to)!).toBeGreaterThan(ranks.get(link.from)!);
    }
    expect(ranks.get("r1")).toBe(0);
  });

  it("requirements sit at the bottom of the canvas", () => {
    const model = miniModel();
    const lay = layout(model);
    const reqY = lay.positions.get("r1")!.y;
    for (const id of Object.keys(model.objectives)) {
      expect(lay.positions.get(id)!.y).toBeLessThan(reqY);
    }
  });
});

describe("graph view", () => {
  it("colors nodes by server status, palette matched to the engine", () => {
    const svg = renderGraph(miniModel(), cannedResult());
    expect(svg).toContain('data-node="o1" data-status="unsatisfied"');
    expect(svg).toMatch(/data-node="o1"[^>]*fill="lightcoral"/);
    expect(svg).toMatch(/data-node="o2"[^>]*fill="khaki"/);
    expect(svg).toMatch(/data-node="r1"[^>]*fill="palegreen"/);
  });

  it("shows raw and adjusted figures verbatim from the result", () => {
    // the canned adjusted values are intentionally not raw x confidence:
    // the view must copy them, not recompute
    const svg = renderGraph(miniModel(), cannedResult());
    expect(svg).toContain("LA: 7.7 / 6.6 @0.75");
    expect(svg).toContain("LB: 5.5 / 5.745 @1");
    expect(svg).not.toContain("5.775"); // 7.7 x 0.75, the recomputed value
  });

  it("renders without a result (white nodes)", () => {
    const svg = renderGraph(miniModel(), null);
    expect(svg).toContain('data-status=""');
    expect(svg).not.toContain("lightcoral");
  });
});

describe("sweep chart", () => {
  it("step curve crosses 2 FTEs exactly at level 33", () => {
    const model = miniModel();
    const geometry = buildChart(model, stepSweep(), "o2");
    expect(geometry.kind).toBe("step"); // o2 is a discrete scale
    const at33 = geometry.points.find((p) => p.level === 33)!;
    const at32 = geometry.points.find((p) => p.level === 32)!;
    expect(at33.value).toBe(2);
    expect(at32.value).toBe(1); // right-continuous: jump happens at 33
    const svg = renderSweepChart(model, stepSweep(), "o2");
    expect(svg).toContain('class="curve step"');
    expect(svg).toContain('class="guide target"');
  });

  it("functional requirement sweeps render two bars", () => {
    const model = miniModel();
    const sweep: SweepJson = {
      schema: 1, kind: "sweep", node: "r1",
      samples: [0, 0.5, 1].map((level) => ({
        level,
        root_achieved: { o2: level >= 1 ? 2 : 0 },
        root_status: { o2: level >= 1 ? "satisfied" : "unsatisfied" },
        total_utility: null,
      })),
    };
    const geometry = buildChart(model, sweep, "o2");
    expect(geometry.kind).toBe("bars");
    expect(geometry.bars).toHaveLength(2);
    const svg = renderSweepChart(model, sweep, "o2");
    expect(svg).toContain('class="bar"');
  });

  it("two-point sweep draws both endpoints", () => {
    const model = miniModel();
    const sweep: SweepJson = {
      schema: 1, kind: "sweep", node: "r2",
      samples: [
        { level: 0, root_achieved: { o2: 0 },
          root_status: { o2: "unsatisfied" }, total_utility: null },
        { level: 1, root_achieved: { o2: 1 },
          root_status: { o2: "threshold_met" }, total_utility: null },
      ],
    };
    const geometry = buildChart(model, sweep, "o2");
    expect(geometry.points).toHaveLength(2);
  });
});

describe("function editor", () => {
  it("keeps x strictly increasing on insertion", () => {
    let state = editorFrom("LD", {
      points: [[0, 0], [30, 2]], interpolation: "step_after",
      extrapolation: "clamp",
    });
    state = addKnot(state, 15, 1);
    expect(state.points.map(([x]) => x)).toEqual([0, 15, 30]);
    expect(problemsOf(state)).toEqual([]);
    expect(validateProposal(proposalOf(state).points)).toEqual([]);
  });

  it("dragging cannot cross neighbours", () => {
    let state = editorFrom("LD", {
      points: [[0, 0], [15, 1], [30, 2]], interpolation: "linear",
      extrapolation: "clamp",
    });
    state = moveKnot(state, 1, 99, 1.5);
    expect(state.points[1][0]).toBeLessThan(30);
    expect(state.points[1][1]).toBe(1.5);
  });

  it("mirrors the graph-expansion warning for descending knots", () => {
    let state = editorFrom("LD", {
      points: [[0, 0], [15, 5], [30, 2]], interpolation: "linear",
      extrapolation: "clamp",
    });
    expect(looksNonMonotone(state)).toBe(true);
    state = moveKnot(state, 2, 30, 9);
    expect(looksNonMonotone(state)).toBe(false);
  });
});

describe("panels", () => {
  it("comparison table highlights deltas against the baseline", () => {
    const table: ComparisonJson = {
      schema: 1, kind: "comparison", baseline: "a",
      rows: ["o2", "total_utility"], columns: ["a", "b"],
      cells: {
        o2: { a: { achieved: 2, status: "satisfied", delta: 0 },
              b: { achieved: 1, status: "threshold_met", delta: -1 } },
        total_utility: { a: { achieved: 0.9, status: null, delta: 0 },
                         b: { achieved: 0.4, status: null, delta: -0.5 } },
      },
      column_errors: {},
    };
    const html = renderComparison(table);
    expect(html).toContain("a (baseline)");
    expect(html).toContain('class="delta delta-down">-1');
    expect(html).toContain('class="status satisfied"');
  });

  it("tracking table shows verdict badges", () => {
    const report: VarianceJson = {
      schema: 1, kind: "variance_report",
      rows: [
        { objective: "o2", predicted: 2, actual: 1, gap: -1, verdict: "behind",
          as_is: 9, latest: 8, timeframe: "1 year" },
        { objective: "o1", predicted: 30, actual: null, gap: null,
          verdict: "no_data", as_is: 100, latest: null, timeframe: "" },
      ],
    };
    const html = renderTracking(report);
    expect(html).toContain('class="verdict behind"');
    expect(html).toContain('class="verdict no_data"');
    expect(html).toContain("1 year");
  });
});
