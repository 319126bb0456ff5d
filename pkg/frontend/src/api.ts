// Thin typed client for the capability-set HTTP service.
//
// The explorer never computes frontiers itself; every number shown comes
// out of a response body. Solve responses keep the raw text alongside the
// parsed tree so the chart can prove it rendered exactly what was served.

import { isValueToken } from "./rationals.js";

export type ValueToken = number | string;

export interface ResourceInfo {
  id: string;
  quantity: ValueToken;
  unit: string;
}

export interface CitizenInfo {
  id: string;
  home_vertex: string;
  resources: ResourceInfo[];
  forbidden_actions: string[];
}

export interface CommonInfo {
  id: string;
  kind: string;
  capacity: ValueToken;
  delta: ValueToken;
  effective_capacity: ValueToken;
}

export interface ScenarioInfo {
  id: string;
  label: string;
  extends: string | null;
  override_count: number;
  draft: boolean;
}

export interface FrontierPointBody {
  values: ValueToken[];
  witness: Record<string, number>;
  alternates_count: number | null;
}

export interface SolveBody {
  citizen_id: string;
  scenario_id: string;
  method: string;
  dimensions: string[];
  points: FrontierPointBody[];
}

export interface SolveResult {
  /** Exact bytes of the response body, for fidelity checks. */
  raw: string;
  body: SolveBody;
}

export interface DiffBody {
  citizen_id: string;
  before_id: string;
  after_id: string;
  dimensions: string[];
  before: ValueToken[][];
  after: ValueToken[][];
  lost_points: ValueToken[][];
  ideal_point_drop: ValueToken[];
  dominated_region_shrink_2d: ValueToken | null;
}

export interface CompareBody {
  left: string;
  right: string;
  scenario_id: string;
  relation: string;
  certificates: { dominated: ValueToken[]; dominating: ValueToken[] }[];
}

export interface ScenarioCreatedBody {
  scenario_id: string;
  label: string;
  extends: string | null;
  override_count: number;
  resolved_override_count: number;
}

export type OverrideTarget =
  | { type: "common_capacity"; common: string }
  | { type: "common_delta"; common: string }
  | { type: "resource"; citizen: string; resource: string }
  | { type: "conversion_entry"; citizen: string; action: string; column: string }
  | { type: "transformation_entry"; citizen: string; action: string; dimension: string }
  | { type: "forbid_action"; citizen: string; action: string };

export interface OverrideBody {
  target: OverrideTarget;
  value?: ValueToken;
}

export interface ScenarioDraftRequest {
  id?: string;
  label?: string;
  extends?: string;
  overrides: OverrideBody[];
}

export interface SolveRequest {
  citizen_id: string;
  scenario_id?: string;
  method?: "eps" | "exhaustive";
  node_limit?: number;
}

export interface DiffRequest {
  citizen_id: string;
  before_id?: string;
  after_id: string;
  method?: "eps" | "exhaustive";
  node_limit?: number;
}

export interface CompareRequest {
  left_citizen: string;
  right_citizen: string;
  scenario_id?: string;
  method?: "eps" | "exhaustive";
  node_limit?: number;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly path: string | null;
  readonly body: Record<string, unknown>;

  constructor(status: number, body: Record<string, unknown>) {
    const code = typeof body.code === "string" ? body.code : "UnknownError";
    const message = typeof body.message === "string" ? body.message : `HTTP ${status}`;
    super(`${code}: ${message}`);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.path = typeof body.path === "string" ? body.path : null;
    this.body = body;
  }
}

async function readError(response: Response): Promise<never> {
  let tree: Record<string, unknown>;
  try {
    tree = (await response.json()) as Record<string, unknown>;
  } catch {
    tree = { code: "UnknownError", message: response.statusText };
  }
  throw new ApiError(response.status, tree);
}

/**
 * Assert that every frontier value is a token JSON round-trips losslessly:
 * a safe integer or a "p/q" string. Anything else would let the UI display
 * digits the service never sent.
 */
function checkValueTokens(points: FrontierPointBody[], context: string): void {
  for (const point of points) {
    for (const value of point.values) {
      if (!isValueToken(value)) {
        throw new Error(`${context}: unrepresentable value token ${String(value)}`);
      }
    }
  }
}

export class Client {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return this.baseUrl + path;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.url(path));
    if (!response.ok) await readError(response);
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, payload: unknown): Promise<T> {
    const response = await fetch(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!response.ok) await readError(response);
    return (await response.json()) as T;
  }

  async modelRaw(): Promise<string> {
    const response = await fetch(this.url("/model"));
    if (!response.ok) await readError(response);
    return response.text();
  }

  citizens(): Promise<CitizenInfo[]> {
    return this.getJson("/citizens");
  }

  commons(): Promise<CommonInfo[]> {
    return this.getJson("/commons");
  }

  scenarios(): Promise<ScenarioInfo[]> {
    return this.getJson("/scenarios");
  }

  createScenario(draft: ScenarioDraftRequest): Promise<ScenarioCreatedBody> {
    return this.postJson("/scenarios", draft);
  }

  async solve(request: SolveRequest): Promise<SolveResult> {
    const response = await fetch(this.url("/solve"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) await readError(response);
    const raw = await response.text();
    const body = JSON.parse(raw) as SolveBody;
    checkValueTokens(body.points, `/solve ${request.citizen_id}`);
    return { raw, body };
  }

  diff(request: DiffRequest): Promise<DiffBody> {
    return this.postJson("/diff", request);
  }

  compare(request: CompareRequest): Promise<CompareBody> {
    return this.postJson("/compare", request);
  }
}
