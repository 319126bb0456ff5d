// End-to-end test against the real Python service.
//
// Boots `python3 -m capscope serve` on the packaged walking-tour fixture,
// then checks the fidelity contract: the point sets the chart embeds are
// byte-equal to the /solve response bodies, and the exact shaded area
// equals dominated_region_shrink_2d from /diff.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiError, Client } from "../src/api.js";
import { renderFrontierChart } from "../src/chart.js";
import { emptyDraft, setOverride, validateDraft } from "../src/state.js";

const PORT = 7450 + (process.pid % 100);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
const client = new Client(BASE);

function fixturePath(): string {
  const probe = spawnSync(
    "python3",
    ["-c", "from importlib import resources; print(resources.files('capscope') / 'fixtures' / 'street_walk.model')"],
    { encoding: "utf8" },
  );
  if (probe.status !== 0) {
    throw new Error(`cannot locate fixture; is capscope installed?\n${probe.stderr}`);
  }
  return probe.stdout.trim();
}

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 60_000;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/model`);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service did not come up on ${BASE}: ${String(lastError)}`);
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "capscope", "serve", fixturePath(), "--host", "127.0.0.1", "--port", String(PORT)],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  let stderr = "";
  server.stderr?.on("data", (chunk: Buffer) => {
    stderr += chunk.toString();
  });
  server.on("exit", (code) => {
    if (code !== null && code !== 0) {
      console.error(`service exited with ${code}\n${stderr}`);
    }
  });
  await waitForServer();
});

afterAll(() => {
  server?.kill("SIGTERM");
});

/**
 * Pull the value tokens out of the raw body text, whitespace aside (the
 * service pretty-prints canonical JSON), and require the rendered tokens
 * to be byte-identical to them.
 */
function expectValueTokenBytes(raw: string, rendered: string): void {
  const fromRaw: string[] = [];
  for (const block of raw.matchAll(/"values": \[([^\]]*)\]/g)) {
    for (const token of block[1]!.split(",")) {
      if (token.trim() !== "") fromRaw.push(token.trim());
    }
  }
  const fromChart: string[] = [];
  const parsed = JSON.parse(rendered) as (number | string)[][];
  for (const values of parsed) {
    for (const value of values) fromChart.push(JSON.stringify(value));
  }
  expect(fromChart).toEqual(fromRaw);
}

describe("explorer against the live service", () => {
  it("renders /solve bodies byte-identically and matches /diff shrink", async () => {
    const before = await client.solve({ citizen_id: "walker" });
    const after = await client.solve({
      citizen_id: "walker",
      scenario_id: "street_23_damaged",
    });

    const chart = renderFrontierChart(before.body, after.body, { xDim: 0, yDim: 1 });

    // the embedded point sets are exactly what the service sent
    expect(chart.beforeData).toBe(
      JSON.stringify(JSON.parse(before.raw).points.map((p: { values: unknown }) => p.values)),
    );
    expect(chart.afterData).toBe(
      JSON.stringify(JSON.parse(after.raw).points.map((p: { values: unknown }) => p.values)),
    );
    expectValueTokenBytes(before.raw, chart.beforeData);
    expectValueTokenBytes(after.raw, chart.afterData!);

    // pin the known frontiers for this fixture
    expect(chart.beforeData).toBe("[[6,6],[4,7]]");
    expect(chart.afterData).toBe("[[5,6],[4,7]]");

    // the shaded area equals the served dominated_region_shrink_2d
    const diff = await client.diff({ citizen_id: "walker", after_id: "street_23_damaged" });
    expect(diff.dominated_region_shrink_2d).not.toBeNull();
    expect(chart.shadedArea!.toJson()).toBe(diff.dominated_region_shrink_2d);
    expect(diff.dominated_region_shrink_2d).toBe(6);
    expect(diff.lost_points).toEqual([[6, 6]]);
    expect(diff.ideal_point_drop).toEqual([1, 0]);
  });

  it("solves identically across repeated requests (bytes included)", async () => {
    const first = await client.solve({ citizen_id: "walker" });
    const second = await client.solve({ citizen_id: "walker" });
    expect(second.raw).toBe(first.raw);
  });

  it("round-trips a draft scenario built by the panel state", async () => {
    const commons = await client.commons();
    const draft = emptyDraft();
    setOverride(draft, {
      target: { type: "common_capacity", common: "street_12" },
      value: 0,
    });
    expect(validateDraft(draft, commons)).toEqual([]);

    const created = await client.createScenario({
      label: "street_12 closed",
      overrides: draft.overrides,
    });
    expect(created.scenario_id).toMatch(/^draft-/);
    expect(created.override_count).toBe(1);

    const listed = await client.scenarios();
    const mine = listed.find((s) => s.id === created.scenario_id);
    expect(mine?.draft).toBe(true);

    const solved = await client.solve({
      citizen_id: "walker",
      scenario_id: created.scenario_id,
    });
    // closing street_12 leaves only the lake tour; (6,6) needs that street
    expect(JSON.stringify(solved.body.points.map((p) => p.values))).toBe("[[4,7]]");
  });

  it("pre-flights the invariant the service only enforces at solve time", async () => {
    const commons = await client.commons();
    const draft = emptyDraft();
    setOverride(draft, { target: { type: "common_delta", common: "street_12" }, value: 5 });
    // utilised common with capacity 1: delta 5 breaks delta <= capacity.
    // The panel refuses to send this; creation itself only checks ids,
    // so without the pre-flight the failure would surface at solve time.
    expect(validateDraft(draft, commons)[0]!.message).toMatch(/exceeds capacity/);

    const created = await client.createScenario({ overrides: draft.overrides });
    await expect(
      client.solve({ citizen_id: "walker", scenario_id: created.scenario_id }),
    ).rejects.toMatchObject({ status: 422, code: "InvariantViolated" });
  });

  it("maps service errors onto typed ApiError values", async () => {
    await expect(client.solve({ citizen_id: "nobody" })).rejects.toMatchObject({
      status: 404,
      code: "UnknownCitizen",
    });
    await expect(
      client.solve({ citizen_id: "walker", scenario_id: "no_such" }),
    ).rejects.toMatchObject({ status: 422, code: "UnresolvableScenario" });
    try {
      await client.createScenario({
        overrides: [{ target: { type: "common_capacity", common: "ghost" }, value: 0 }],
      });
      expect.unreachable("creation should have failed");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).status).toBe(422);
    }
  });

  it("serves the model document verbatim", async () => {
    const raw = await client.modelRaw();
    const tree = JSON.parse(raw) as { format_version: string };
    expect(tree.format_version).toBe("capscope/1");
  });
});
