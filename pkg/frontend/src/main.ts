/**
 * DOM glue for the what-if workbench. All analysis numbers arrive from the
 * server; this file only moves state around and repaints.
 */

import { ApiClient, ApiError, debounce } from "./api.js";
import { editorFrom, addKnot, moveKnot, problemsOf, proposalOf,
         looksNonMonotone, sketchPath, type EditorState } from "./funceditor.js";
import { renderGraph } from "./graphview.js";
import { renderComparison, renderTracking } from "./panels.js";
import { validateScenario } from "./schema.js";
import { emptyDraft, initialState, orGroups, selectOr, setConfidenceAdjust,
         setLevel, toggleRequirement, type Panel, type ViewState } from "./state.js";
import { renderSweepChart } from "./sweepchart.js";
import type { EvaluationJson, ModelJson, ScenarioJson } from "./types.js";

const api = new ApiClient("");

let model: ModelJson;
let view: ViewState;
let lastResult: EvaluationJson | null = null;
let stale = false;
let editor: EditorState | null = null;

const $ = <T extends HTMLElement>(sel: string): T => {
  const el = document.querySelector(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el as T;
};

function setBanner(message: string | null): void {
  const banner = $("#banner");
  banner.textContent = message ?? "";
  banner.classList.toggle("visible", message !== null);
}

function setStale(value: boolean): void {
  stale = value;
  $("#stale-badge").classList.toggle("visible", stale);
}

async function refreshEvaluation(): Promise<void> {
  const problems = validateScenario(view.draft, model);
  if (problems.length > 0) {
    setBanner(`draft invalid: ${problems[0]}`);
    return;
  }
  setStale(true);
  try {
    const result = await api.evaluate(view.draft);
    if (result === null) return; // superseded by a newer draft
    lastResult = result;
    setStale(false);
    setBanner(null);
    paint();
  } catch (err) {
    setBanner(err instanceof ApiError
      ? `${err.code}: ${err.message}`
      : "connection lost — retrying on next change");
  }
}

const queueEvaluation = debounce(() => { void refreshEvaluation(); }, 150);

function updateDraft(draft: ScenarioJson): void {
  view = { ...view, draft };
  paintControls();
  queueEvaluation();
}

function switchPanel(panel: Panel): void {
  view = { ...view, panel };
  document.querySelectorAll<HTMLElement>(".panel").forEach((el) => {
    el.classList.toggle("visible", el.id === `panel-${panel}`);
  });
  document.querySelectorAll<HTMLElement>("nav button").forEach((el) => {
    el.classList.toggle("active", el.dataset.panel === panel);
  });
  if (panel === "compare") void refreshCompare();
  if (panel === "tracking") void refreshTracking();
  if (panel === "function-editor") paintEditor();
}

// -- graph + sidebar ---------------------------------------------------------

function paint(): void {
  $("#graph-host").innerHTML = renderGraph(model, lastResult, view.selectedNode);
  const utilities = lastResult
    ? Object.entries(lastResult.root_utilities).sort()
      .map(([id, u]) => `${id}: ${u.toFixed(4)}`).join("  ")
    : "";
  const total = lastResult?.total_utility;
  $("#utilities").textContent = lastResult
    ? `utilities ${utilities}  total ${total === null || total === undefined
      ? "–" : total.toFixed(4)}`
    : "";
  $("#flags").innerHTML = (lastResult?.audit_flags ?? [])
    .map((f) => `<li><code>${f.code}</code> ${f.location}</li>`).join("");
  $("#note").textContent = lastResult?.confidence_adjusted
    ? lastResult.note : "";
  paintControls();
}

function paintControls(): void {
  const reqHost = $("#requirements");
  reqHost.innerHTML = "";
  for (const [id, req] of Object.entries(model.requirements).sort()) {
    const row = document.createElement("div");
    row.className = "control-row";
    const level = view.draft.requirement_levels[id] ?? 0;
    if (req.kind === "functional") {
      row.innerHTML = `<label><input type="checkbox" data-req="${id}" `
        + `${level >= 1 ? "checked" : ""}/> ${id} — ${req.headline}</label>`;
    } else {
      row.innerHTML = `<label>${id} — ${req.headline} `
        + `<input type="range" min="0" max="1" step="0.05" value="${level}" `
        + `data-req="${id}"/> <span>${level}</span></label>`;
    }
    reqHost.appendChild(row);
  }
  reqHost.querySelectorAll<HTMLInputElement>("input[type=checkbox]").forEach((el) => {
    el.onchange = () => updateDraft(toggleRequirement(view.draft, model,
                                                      el.dataset.req!));
  });
  reqHost.querySelectorAll<HTMLInputElement>("input[type=range]").forEach((el) => {
    el.oninput = () => updateDraft(setLevel(view.draft, model, el.dataset.req!,
                                            Number(el.value)));
  });

  const orHost = $("#or-groups");
  orHost.innerHTML = "";
  for (const [groupId, members] of orGroups(model)) {
    const current = view.draft.or_selections[groupId] ?? "";
    const options = ['<option value="">(undecided)</option>']
      .concat(members.map((m) =>
        `<option value="${m}" ${m === current ? "selected" : ""}>${m}</option>`));
    const row = document.createElement("div");
    row.className = "control-row";
    row.innerHTML = `<label>OR ${groupId} <select data-group="${groupId}">`
      + `${options.join("")}</select></label>`;
    orHost.appendChild(row);
  }
  orHost.querySelectorAll<HTMLSelectElement>("select").forEach((el) => {
    el.onchange = () => {
      const gid = el.dataset.group!;
      if (el.value === "") {
        const selections = { ...view.draft.or_selections };
        delete selections[gid];
        updateDraft({ ...view.draft, or_selections: selections });
      } else {
        updateDraft(selectOr(view.draft, model, gid, el.value));
      }
    };
  });

  const conf = $("#confidence-toggle") as unknown as HTMLInputElement;
  conf.checked = view.draft.options.confidence_adjust;
}

// -- sweep panel --------------------------------------------------------------

async function runSweep(): Promise<void> {
  const node = ($("#sweep-node") as unknown as HTMLSelectElement).value;
  const from = Number(($("#sweep-from") as unknown as HTMLInputElement).value);
  const to = Number(($("#sweep-to") as unknown as HTMLInputElement).value);
  const steps = Number(($("#sweep-steps") as unknown as HTMLInputElement).value);
  const root = ($("#sweep-root") as unknown as HTMLSelectElement).value;
  try {
    const sweep = await api.sweep(node, from, to, steps, view.draft);
    $("#sweep-host").innerHTML = renderSweepChart(model, sweep, root);
    setBanner(null);
  } catch (err) {
    setBanner(err instanceof ApiError ? `${err.code}: ${err.message}`
      : "sweep failed");
  }
}

// -- compare panel -------------------------------------------------------------

async function refreshCompare(): Promise<void> {
  const off: ScenarioJson = {
    ...view.draft,
    id: "no-confidence",
    options: { ...view.draft.options, confidence_adjust: false },
  };
  const none = { ...emptyDraft("all-zero"), options: view.draft.options };
  try {
    const table = await api.compare(view.draft.id, [
      { ...view.draft }, off, none,
    ]);
    $("#compare-host").innerHTML = renderComparison(table);
  } catch (err) {
    setBanner(err instanceof ApiError ? `${err.code}: ${err.message}`
      : "compare failed");
  }
}

// -- tracking panel --------------------------------------------------------------

async function refreshTracking(): Promise<void> {
  try {
    const report = await api.tracking();
    $("#tracking-host").innerHTML = renderTracking(report);
  } catch (err) {
    setBanner(err instanceof ApiError ? `${err.code}: ${err.message}`
      : "tracking unavailable");
  }
}

// -- function editor --------------------------------------------------------------

const ED_W = 520;
const ED_H = 260;
const ED_PAD = 30;

function editorScales(state: EditorState) {
  const xs = state.points.map(([x]) => x);
  const ys = state.points.map(([, y]) => y);
  const xLo = Math.min(0, ...xs);
  const xHi = Math.max(1, ...xs);
  const yLo = Math.min(0, ...ys);
  const yHi = Math.max(1, ...ys);
  return {
    xOf: (x: number) => ED_PAD + ((x - xLo) / (xHi - xLo || 1)) * (ED_W - 2 * ED_PAD),
    yOf: (y: number) => ED_H - ED_PAD - ((y - yLo) / (yHi - yLo || 1)) * (ED_H - 2 * ED_PAD),
    xBack: (px: number) => xLo + ((px - ED_PAD) / (ED_W - 2 * ED_PAD)) * (xHi - xLo || 1),
    yBack: (py: number) => yLo + ((ED_H - ED_PAD - py) / (ED_H - 2 * ED_PAD)) * (yHi - yLo || 1),
  };
}

function paintEditor(): void {
  const select = $("#editor-link") as unknown as HTMLSelectElement;
  if (!editor || editor.linkId !== select.value) {
    const link = model.contributions[select.value];
    editor = editorFrom(select.value, link?.quantification.table ?? null);
  }
  const state = editor;
  const scales = editorScales(state);
  const knots = state.points.map(([x, y], i) =>
    `<circle class="knot" data-knot="${i}" cx="${scales.xOf(x)}" `
    + `cy="${scales.yOf(y)}" r="6" fill="steelblue"/>`).join("");
  const warning = looksNonMonotone(state)
    ? '<div class="warning">EXPAND_GRAPH: shape is not monotone — the causal '
      + "pathway may conflate effects</div>"
    : "";
  const problems = problemsOf(state);
  $("#editor-host").innerHTML = `
    <svg id="editor-svg" xmlns="http://www.w3.org/2000/svg" width="${ED_W}"
         height="${ED_H}" viewBox="0 0 ${ED_W} ${ED_H}">
      <rect x="0" y="0" width="${ED_W}" height="${ED_H}" fill="white" stroke="#ccc"/>
      <path d="${sketchPath(state, scales.xOf, scales.yOf)}" fill="none"
            stroke="steelblue" stroke-width="2"/>
      ${knots}
    </svg>
    ${warning}
    ${problems.length ? `<div class="warning">${problems[0]}</div>` : ""}`;

  const svg = $("#editor-svg");
  let dragging: number | null = null;
  svg.querySelectorAll<SVGCircleElement>(".knot").forEach((el) => {
    el.addEventListener("pointerdown", (ev) => {
      dragging = Number(el.dataset.knot);
      ev.preventDefault();
    });
  });
  svg.addEventListener("pointermove", (ev) => {
    if (dragging === null || !editor) return;
    const rect = (svg as unknown as SVGSVGElement).getBoundingClientRect();
    editor = moveKnot(editor, dragging,
                      scales.xBack(ev.clientX - rect.left),
                      scales.yBack(ev.clientY - rect.top));
    paintEditor();
  });
  svg.addEventListener("pointerup", () => { dragging = null; });
  svg.addEventListener("dblclick", (ev) => {
    if (!editor) return;
    const rect = (svg as unknown as SVGSVGElement).getBoundingClientRect();
    editor = addKnot(editor, scales.xBack(ev.clientX - rect.left),
                     scales.yBack(ev.clientY - rect.top));
    paintEditor();
  });
}

async function saveProposal(): Promise<void> {
  if (!editor) return;
  const problems = problemsOf(editor);
  if (problems.length > 0) {
    setBanner(`proposal invalid: ${problems[0]}`);
    return;
  }
  try {
    const existing = await api.scenarioSet();
    await api.putScenarioSet({
      schema: 1,
      baseline: existing.baseline ?? null,
      scenarios: existing.scenarios ?? [],
      function_proposals: {
        ...(existing.function_proposals ?? {}),
        [editor.linkId]: proposalOf(editor),
      },
    });
    setBanner(null);
    $("#editor-status").textContent =
      `proposal for ${editor.linkId} saved to the scenario sidecar`;
  } catch (err) {
    setBanner(err instanceof ApiError ? `${err.code}: ${err.message}`
      : "save failed");
  }
}

// -- boot ---------------------------------------------------------------------

async function boot(): Promise<void> {
  try {
    model = await api.model();
  } catch (err) {
    setBanner("cannot reach /api/model — is the server running?");
    throw err;
  }
  view = initialState(model);

  const sweepNode = $("#sweep-node") as unknown as HTMLSelectElement;
  const sweepRoot = $("#sweep-root") as unknown as HTMLSelectElement;
  const nodes = [...Object.keys(model.requirements),
                 ...Object.keys(model.objectives)].sort();
  sweepNode.innerHTML = nodes.map((n) => `<option>${n}</option>`).join("");
  sweepRoot.innerHTML = model.roots.map((n) => `<option>${n}</option>`).join("");
  const editorLink = $("#editor-link") as unknown as HTMLSelectElement;
  editorLink.innerHTML = Object.keys(model.contributions).sort()
    .map((l) => `<option>${l}</option>`).join("");
  editorLink.onchange = () => { editor = null; paintEditor(); };

  ($("#confidence-toggle") as unknown as HTMLInputElement).onchange = (ev) => {
    const on = (ev.target as HTMLInputElement).checked;
    updateDraft(setConfidenceAdjust(view.draft, on));
  };
  $("#sweep-run").onclick = () => { void runSweep(); };
  $("#editor-save").onclick = () => { void saveProposal(); };
  document.querySelectorAll<HTMLElement>("nav button").forEach((el) => {
    el.onclick = () => switchPanel(el.dataset.panel as Panel);
  });

  paint();
  await refreshEvaluation();
}

void boot();
