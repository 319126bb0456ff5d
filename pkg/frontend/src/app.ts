// Browser entry point. Wires the editing panel and the chart to the
// HTTP service. All frontier math happens server side; this file only
// collects edits, posts them, and renders what comes back.

import {
  ApiError,
  Client,
  type CitizenInfo,
  type CommonInfo,
  type DiffBody,
  type ScenarioInfo,
  type SolveBody,
} from "./api.js";
import { dominatedShrink2d, projectPoints, renderFrontierChart, witnessLabel } from "./chart.js";
import { Rat, ratFromJson, parseUserInput } from "./rationals.js";
import {
  DraftHistory,
  DraftState,
  LatestOnly,
  draftRequest,
  emptyDraft,
  findOverride,
  removeOverride,
  setOverride,
  validateDraft,
} from "./state.js";

const client = new Client("");
const history = new DraftHistory();
const latest = new LatestOnly();

let citizens: CitizenInfo[] = [];
let commons: CommonInfo[] = [];
let scenarios: ScenarioInfo[] = [];
let actionsByCitizen = new Map<string, string[]>();
let dimensions: string[] = [];

let draft: DraftState = emptyDraft();
let lastBefore: SolveBody | null = null;
let lastAfter: SolveBody | null = null;
let lastDiff: DiffBody | null = null;
let sortColumn = 0;
let sortDescending = true;

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node as T;
}

const citizenSelect = byId<HTMLSelectElement>("citizen-select");
const scenarioSelect = byId<HTMLSelectElement>("scenario-select");
const commonsList = byId<HTMLDivElement>("commons-list");
const resourcesList = byId<HTMLDivElement>("resources-list");
const actionsList = byId<HTMLDivElement>("actions-list");
const draftSummary = byId<HTMLDivElement>("draft-summary");
const solveButton = byId<HTMLButtonElement>("solve-btn");
const undoButton = byId<HTMLButtonElement>("undo-btn");
const resetButton = byId<HTMLButtonElement>("reset-btn");
const errorBox = byId<HTMLDivElement>("error-box");
const dimPicker = byId<HTMLDivElement>("dim-picker");
const xdimSelect = byId<HTMLSelectElement>("xdim-select");
const ydimSelect = byId<HTMLSelectElement>("ydim-select");
const chartBox = byId<HTMLDivElement>("chart");
const diffSummary = byId<HTMLDivElement>("diff-summary");
const tableWrap = byId<HTMLDivElement>("table-wrap");

function selectedCitizen(): CitizenInfo | null {
  return citizens.find((c) => c.id === citizenSelect.value) ?? null;
}

function baselineId(): string | null {
  return scenarioSelect.value === "base" ? null : scenarioSelect.value;
}

function showError(text: string | null): void {
  if (text === null) {
    errorBox.hidden = true;
    errorBox.textContent = "";
  } else {
    errorBox.hidden = false;
    errorBox.textContent = text;
  }
}

function mutateDraft(change: (d: DraftState) => void): void {
  history.record(draft);
  change(draft);
  undoButton.disabled = false;
  renderPanel();
}

function option(value: string, label: string): HTMLOptionElement {
  const node = document.createElement("option");
  node.value = value;
  node.textContent = label;
  return node;
}

function line(...children: (HTMLElement | string)[]): HTMLDivElement {
  const node = document.createElement("div");
  node.className = "control-line";
  for (const child of children) {
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

function renderCommons(): void {
  commonsList.replaceChildren();
  for (const common of commons) {
    if (common.kind === "utilised") {
      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      const target = { type: "common_capacity" as const, common: common.id };
      const override = findOverride(draft, target);
      checkbox.checked = override !== null && String(override.value) === "0";
      checkbox.addEventListener("change", () => {
        mutateDraft((d) => {
          if (checkbox.checked) setOverride(d, { target, value: 0 });
          else removeOverride(d, target);
        });
      });
      const label = document.createElement("label");
      label.className = "control-line";
      const name = document.createElement("code");
      name.textContent = common.id;
      label.append(checkbox, name, ` damaged (capacity ${common.capacity} to 0)`);
      commonsList.append(label);
    } else {
      const input = document.createElement("input");
      input.type = "text";
      const target = { type: "common_delta" as const, common: common.id };
      const override = findOverride(draft, target);
      input.value = override !== null ? String(override.value) : String(common.delta);
      input.addEventListener("change", () => {
        applyValueEdit(
          input,
          common.delta,
          (value) => mutateDraft((d) => setOverride(d, { target, value })),
          () => mutateDraft((d) => void removeOverride(d, target)),
        );
      });
      const name = document.createElement("code");
      name.textContent = common.id;
      const spacer = document.createElement("span");
      spacer.className = "spacer";
      commonsList.append(line(name, spacer, `delta (capacity ${common.capacity})`, input));
    }
  }
}

/** Parse an input field; on success apply, on baseline value drop, on junk flag. */
function applyValueEdit(
  input: HTMLInputElement,
  baseline: number | string,
  apply: (value: number | string) => void,
  drop: () => void,
): void {
  let parsed: Rat;
  try {
    parsed = parseUserInput(input.value);
  } catch (error) {
    showError(String(error));
    return;
  }
  showError(null);
  if (parsed.cmp(ratFromJson(baseline)) === 0) {
    drop(); // editing back to the document value removes the override
    return;
  }
  apply(parsed.toJson());
}

function renderResources(): void {
  resourcesList.replaceChildren();
  const citizen = selectedCitizen();
  if (citizen === null) return;
  for (const resource of citizen.resources) {
    const input = document.createElement("input");
    input.type = "text";
    const target = {
      type: "resource" as const,
      citizen: citizen.id,
      resource: resource.id,
    };
    const override = findOverride(draft, target);
    input.value = override !== null ? String(override.value) : String(resource.quantity);
    input.addEventListener("change", () => {
      applyValueEdit(
        input,
        resource.quantity,
        (value) => mutateDraft((d) => setOverride(d, { target, value })),
        () => mutateDraft((d) => void removeOverride(d, target)),
      );
    });
    const name = document.createElement("code");
    name.textContent = resource.id;
    const spacer = document.createElement("span");
    spacer.className = "spacer";
    resourcesList.append(line(name, spacer, `${resource.unit}`, input));
  }
}

function renderActions(): void {
  actionsList.replaceChildren();
  const citizen = selectedCitizen();
  if (citizen === null) return;
  const actions = actionsByCitizen.get(citizen.id) ?? [];
  for (const action of actions) {
    const alreadyForbidden = citizen.forbidden_actions.includes(action);
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    const target = { type: "forbid_action" as const, citizen: citizen.id, action };
    checkbox.checked = alreadyForbidden || findOverride(draft, target) !== null;
    checkbox.disabled = alreadyForbidden; // the model itself forbids it
    checkbox.addEventListener("change", () => {
      mutateDraft((d) => {
        if (checkbox.checked) setOverride(d, { target });
        else removeOverride(d, target);
      });
    });
    const label = document.createElement("label");
    label.className = "control-line";
    const name = document.createElement("code");
    name.textContent = action;
    label.append(checkbox, name);
    if (alreadyForbidden) label.append(" (forbidden by model)");
    actionsList.append(label);
  }
}

function renderPanel(): void {
  renderCommons();
  renderResources();
  renderActions();
  const n = draft.overrides.length;
  draftSummary.textContent =
    n === 0
      ? "No edits; solving shows the baseline frontier only."
      : `${n} override(s) staged on top of ${draft.extendsId ?? "base"}.`;
  undoButton.disabled = history.depth === 0;
}

async function runSolve(): Promise<void> {
  const citizen = selectedCitizen();
  if (citizen === null) return;
  const problems = validateDraft(draft, commons);
  if (problems.length > 0) {
    showError(problems.map((p) => `${p.commonId}: ${p.message}`).join("\n"));
    return; // invalid drafts never leave the browser
  }
  showError(null);
  const token = latest.begin("solve");
  solveButton.disabled = true;
  try {
    const beforeId = baselineId();
    const before = await client.solve({
      citizen_id: citizen.id,
      ...(beforeId === null ? {} : { scenario_id: beforeId }),
    });

    let after: SolveBody | null = null;
    let diff: DiffBody | null = null;
    if (draft.overrides.length > 0) {
      const created = await client.createScenario(draftRequest(draft));
      after = (await client.solve({ citizen_id: citizen.id, scenario_id: created.scenario_id }))
        .body;
      diff = await client.diff({
        citizen_id: citizen.id,
        ...(beforeId === null ? {} : { before_id: beforeId }),
        after_id: created.scenario_id,
      });
      scenarios = await client.scenarios(); // drafts accumulate server side
    }
    if (!latest.isCurrent("solve", token)) return; // a newer solve superseded us
    lastBefore = before.body;
    lastAfter = after;
    lastDiff = diff;
    renderResults();
  } catch (error) {
    if (!latest.isCurrent("solve", token)) return;
    if (error instanceof ApiError) {
      const lines = [`${error.code} (HTTP ${error.status}): ${error.message.split(": ").slice(1).join(": ") || error.message}`];
      if (error.path !== null) lines.push(`at ${error.path}`);
      if (error.code === "NodeLimitExceeded") {
        lines.push("search stopped at the node limit; retry with a higher limit");
      }
      showError(lines.join("\n"));
    } else {
      showError(String(error));
    }
  } finally {
    if (latest.isCurrent("solve", token)) solveButton.disabled = false;
  }
}

function currentDims(): { x: number; y: number } {
  if (dimensions.length <= 2) return { x: 0, y: Math.min(1, dimensions.length - 1) };
  return { x: Number(xdimSelect.value), y: Number(ydimSelect.value) };
}

function renderResults(): void {
  if (lastBefore === null) return;
  const { x, y } = currentDims();
  const chart = renderFrontierChart(lastBefore, lastAfter, {
    xDim: x,
    yDim: y,
    beforeLabel: lastBefore.scenario_id,
    afterLabel: lastAfter?.scenario_id,
  });
  chartBox.innerHTML = chart.svg;
  renderDiffSummary(chart.shadedArea);
  renderTable();
}

function renderDiffSummary(shadedArea: Rat | null): void {
  diffSummary.replaceChildren();
  if (lastDiff === null || lastBefore === null || lastAfter === null) return;
  const parts: string[] = [];
  parts.push(`lost points: ${lastDiff.lost_points.length}`);
  parts.push(`ideal point drop: (${lastDiff.ideal_point_drop.map(String).join(", ")})`);
  if (lastDiff.dominated_region_shrink_2d !== null) {
    parts.push(`dominated region shrink: ${lastDiff.dominated_region_shrink_2d}`);
  }
  for (const text of parts) {
    const span = document.createElement("span");
    span.className = "stat";
    span.textContent = text;
    diffSummary.append(span);
  }
  // cross-check the locally shaded area against the served number
  if (lastDiff.dominated_region_shrink_2d !== null && shadedArea !== null && dimensions.length === 2) {
    const served = ratFromJson(lastDiff.dominated_region_shrink_2d);
    if (served.cmp(shadedArea) !== 0) {
      const warn = document.createElement("span");
      warn.className = "stat error";
      warn.textContent = `render mismatch: shaded ${shadedArea.toString()} vs served ${served.toString()}`;
      diffSummary.append(warn);
    }
  }
}

function renderTable(): void {
  tableWrap.replaceChildren();
  const body = lastAfter ?? lastBefore;
  if (body === null) return;
  const table = document.createElement("table");
  const head = document.createElement("tr");
  body.dimensions.forEach((dim, index) => {
    const th = document.createElement("th");
    th.textContent = dim + (sortColumn === index ? (sortDescending ? " ↓" : " ↑") : "");
    th.addEventListener("click", () => {
      if (sortColumn === index) sortDescending = !sortDescending;
      else {
        sortColumn = index;
        sortDescending = true;
      }
      renderTable();
    });
    head.append(th);
  });
  const witnessHead = document.createElement("th");
  witnessHead.textContent = "doing";
  head.append(witnessHead);
  table.append(head);

  const rows = body.points.map((p) => p);
  rows.sort((a, b) => {
    const left = ratFromJson(a.values[sortColumn] ?? 0);
    const right = ratFromJson(b.values[sortColumn] ?? 0);
    const cmp = left.cmp(right);
    return sortDescending ? -cmp : cmp;
  });
  for (const point of rows) {
    const tr = document.createElement("tr");
    for (const value of point.values) {
      const td = document.createElement("td");
      td.textContent = String(value);
      tr.append(td);
    }
    const witness = document.createElement("td");
    witness.className = "witness";
    witness.textContent = witnessLabel(point);
    tr.append(witness);
    table.append(tr);
  }
  tableWrap.append(table);
}

function renderDimPicker(): void {
  if (dimensions.length <= 2) {
    dimPicker.hidden = true;
    return;
  }
  dimPicker.hidden = false;
  xdimSelect.replaceChildren(...dimensions.map((d, i) => option(String(i), d)));
  ydimSelect.replaceChildren(...dimensions.map((d, i) => option(String(i), d)));
  xdimSelect.value = "0";
  ydimSelect.value = "1";
}

async function boot(): Promise<void> {
  const modelRaw = await client.modelRaw();
  const model = JSON.parse(modelRaw) as {
    citizens: { id: string; conversion: Record<string, unknown> }[];
    welfare_dimensions: string[];
  };
  dimensions = model.welfare_dimensions;
  actionsByCitizen = new Map(
    model.citizens.map((c) => [c.id, Object.keys(c.conversion).sort()]),
  );
  [citizens, commons, scenarios] = await Promise.all([
    client.citizens(),
    client.commons(),
    client.scenarios(),
  ]);

  citizenSelect.replaceChildren(...citizens.map((c) => option(c.id, c.id)));
  scenarioSelect.replaceChildren(
    option("base", "base (document as written)"),
    ...scenarios.filter((s) => !s.draft).map((s) => option(s.id, s.label || s.id)),
  );
  byId<HTMLDivElement>("model-info").textContent =
    `${citizens.length} citizen(s), ${commons.length} common(s), dimensions: ${dimensions.join(", ")}`;

  citizenSelect.addEventListener("change", () => {
    renderPanel();
  });
  scenarioSelect.addEventListener("change", () => {
    mutateDraft((d) => {
      d.extendsId = baselineId();
    });
  });
  xdimSelect.addEventListener("change", renderResults);
  ydimSelect.addEventListener("change", renderResults);
  solveButton.addEventListener("click", () => void runSolve());
  undoButton.addEventListener("click", () => {
    const snapshot = history.undo();
    if (snapshot !== null) {
      draft = snapshot;
      renderPanel();
    }
  });
  resetButton.addEventListener("click", () => {
    history.record(draft);
    draft = emptyDraft(baselineId());
    renderPanel();
  });

  renderDimPicker();
  renderPanel();
  await runSolve();
}

void boot().catch((error) => showError(`failed to load model: ${String(error)}`));

export { dominatedShrink2d, projectPoints }; // re-export for manual console use
