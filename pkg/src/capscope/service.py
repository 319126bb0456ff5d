"""HTTP what-if service over one loaded model document.

Every response body is canonical JSON, including errors, which always
carry {code, message, path}. Draft scenarios posted at runtime live in
process memory next to the document's own scenarios.
"""

from __future__ import annotations

import json
import os
import pathlib
import threading
from typing import Any

from fastapi import FastAPI, Request, Response

from .compare import classify
from .documents import (
    ModelDocument,
    SchemaError,
    canonical_json,
    parse_override,
    serialize_model,
    validate_scenario_targets,
)
from .rationals import parse_rational, rat_to_json
from .reports import (
    deprivation_to_tree,
    outcome_to_tree,
    point_to_tree,
    representation_to_tree,
)
from .scenarios import (
    BASE_SCENARIO_ID,
    DimensionMismatch,
    InvariantViolated,
    Scenario,
    ScenarioEvaluator,
    UnknownCitizen,
    UnresolvableScenario,
    base_scenario,
    deprivation,
)
from .solver import (
    FrontierOptions,
    NodeLimitExceeded,
    SearchSpaceTooLarge,
    SolverError,
)

DEFAULT_PORT = 7343


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, path: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.path = path
        self.extras: dict[str, Any] = {}

    def with_extras(self, **extras: Any) -> "ApiError":
        self.extras.update(extras)
        return self

    def tree(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "path": self.path,
            **self.extras,
        }


def _json_response(tree: Any, status: int = 200) -> Response:
    return Response(
        content=canonical_json(tree), status_code=status, media_type="application/json"
    )


def _reject_constant(text: str) -> Any:
    raise ValueError(f"non-finite number {text}")


async def _body_tree(request: Request) -> dict[str, Any]:
    raw = await request.body()
    try:
        tree = json.loads(
            raw.decode("utf-8") if raw else "{}",
            parse_float=parse_rational,
            parse_constant=_reject_constant,
        )
    except (ValueError, UnicodeDecodeError) as exc:
        raise ApiError(422, "BadRequest", f"malformed JSON body: {exc}", "$")
    if not isinstance(tree, dict):
        raise ApiError(422, "BadRequest", "body must be a JSON object", "$")
    return tree


def _field(tree: dict, key: str, required: bool = True) -> str | None:
    value = tree.get(key)
    if value is None:
        if required:
            raise ApiError(422, "BadRequest", f"missing field {key!r}", f"$.{key}")
        return None
    if not isinstance(value, str):
        raise ApiError(422, "BadRequest", f"field {key!r} must be a string", f"$.{key}")
    return value


def create_app(
    document: ModelDocument,
    *,
    ui_dir: str | None = None,
    default_node_limit: int | None = None,
) -> FastAPI:
    app = FastAPI(title="capscope", docs_url=None, redoc_url=None)
    evaluator = ScenarioEvaluator(
        document.city,
        document.commons,
        document.citizens,
        document.dimensions,
        document.scenario_registry(),
        FrontierOptions(node_limit=default_node_limit),
    )
    # Drafts share the evaluator's registry so they can extend each other
    # and document scenarios alike. The evaluator caches by scenario
    # content, so replacing a draft can never serve stale results.
    document_ids = frozenset(document.scenario_registry())
    drafts_lock = threading.Lock()
    draft_counter = [0]
    model_bytes = serialize_model(document)

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError) -> Response:
        return _json_response(exc.tree(), exc.status)

    @app.exception_handler(Exception)
    async def on_unexpected(request: Request, exc: Exception) -> Response:
        return _json_response(
            {"code": "InternalError", "message": str(exc), "path": None}, 500
        )

    def lookup_scenario(scenario_id: str | None, path: str) -> Scenario:
        if scenario_id is None or scenario_id == BASE_SCENARIO_ID:
            return base_scenario()
        with drafts_lock:
            found = evaluator.registry.get(scenario_id)
        if found is None:
            raise ApiError(
                422, "UnresolvableScenario", f"unknown scenario {scenario_id!r}", path
            )
        return found

    def parse_options(tree: dict, request: Request) -> FrontierOptions:
        method = tree.get("method", "eps")
        if method not in ("eps", "exhaustive"):
            raise ApiError(
                422, "BadRequest", f"unknown method {method!r}", "$.method"
            )
        node_limit: Any = tree.get("node_limit")
        if node_limit is None:
            query = request.query_params.get("node_limit")
            if query is not None:
                try:
                    node_limit = int(query)
                except ValueError:
                    raise ApiError(
                        422, "BadRequest", "node_limit must be an integer", "$.node_limit"
                    )
            else:
                node_limit = default_node_limit
        if node_limit is not None and (not isinstance(node_limit, int) or node_limit <= 0):
            raise ApiError(
                422, "BadRequest", "node_limit must be a positive integer", "$.node_limit"
            )
        return FrontierOptions(method=method, node_limit=node_limit)

    def run_evaluation(citizen_id: str, scenario: Scenario, options: FrontierOptions):
        try:
            return evaluator.evaluate(citizen_id, scenario, options)
        except UnknownCitizen:
            raise ApiError(
                404, "UnknownCitizen", f"unknown citizen {citizen_id!r}", "$.citizen_id"
            )
        except UnresolvableScenario as exc:
            raise ApiError(422, "UnresolvableScenario", str(exc), "$.scenario_id")
        except InvariantViolated as exc:
            raise ApiError(422, "InvariantViolated", str(exc), "$.scenario_id")
        except NodeLimitExceeded as exc:
            incumbent = None
            if exc.incumbent is not None and exc.incumbent.assignment is not None:
                incumbent = {
                    a: n for a, n in sorted(exc.incumbent.assignment.counts.items())
                }
            raise ApiError(409, "NodeLimitExceeded", str(exc), "$.node_limit").with_extras(
                partial_points=[point_to_tree(p) for p in exc.partial_points],
                incumbent=incumbent,
            )
        except SearchSpaceTooLarge as exc:
            raise ApiError(409, "SearchSpaceTooLarge", str(exc), "$.method")
        except SolverError as exc:
            raise ApiError(409, "SolverError", str(exc), None)

    @app.get("/model")
    async def get_model() -> Response:
        return Response(content=model_bytes, media_type="application/json")

    @app.get("/citizens")
    async def get_citizens() -> Response:
        tree = [
            {
                "id": cz.citizen_id,
                "home_vertex": cz.home_vertex,
                "resources": [
                    {
                        "id": r.resource_id,
                        "quantity": rat_to_json(r.quantity),
                        "unit": r.unit,
                    }
                    for r in cz.resources.entries
                ],
                "forbidden_actions": list(cz.forbidden_actions),
            }
            for cz in document.citizens
        ]
        return _json_response(tree)

    @app.get("/commons")
    async def get_commons() -> Response:
        tree = [
            {
                "id": c.common_id,
                "kind": c.kind.value,
                "capacity": rat_to_json(c.capacity),
                "delta": rat_to_json(c.delta),
                "effective_capacity": rat_to_json(c.effective_capacity()),
            }
            for c in document.commons.commons
        ]
        return _json_response(tree)

    @app.get("/scenarios")
    async def get_scenarios() -> Response:
        with drafts_lock:
            scenarios = sorted(evaluator.registry.values(), key=lambda s: s.scenario_id)
        tree = [
            {
                "id": s.scenario_id,
                "label": s.label,
                "extends": s.extends,
                "override_count": len(s.overrides),
                "draft": s.scenario_id not in document_ids,
            }
            for s in scenarios
        ]
        return _json_response(tree)

    @app.post("/scenarios")
    async def post_scenario(request: Request) -> Response:
        tree = await _body_tree(request)
        for key in tree:
            if key not in ("id", "label", "extends", "overrides"):
                raise ApiError(422, "BadRequest", "unknown key", f"$.{key}")
        scenario_id = _field(tree, "id", required=False)
        if scenario_id == BASE_SCENARIO_ID:
            raise ApiError(
                422, "BadRequest", f"{BASE_SCENARIO_ID!r} is reserved", "$.id"
            )
        label = _field(tree, "label", required=False) or ""
        extends = _field(tree, "extends", required=False)
        raw_overrides = tree.get("overrides")
        if not isinstance(raw_overrides, list):
            raise ApiError(422, "BadRequest", "overrides must be an array", "$.overrides")
        try:
            overrides = tuple(
                parse_override(o, f"$.overrides[{i}]")
                for i, o in enumerate(raw_overrides)
            )
        except SchemaError as exc:
            raise ApiError(422, "BadRequest", str(exc), exc.path)

        with drafts_lock:
            if scenario_id is None:
                draft_counter[0] += 1
                scenario_id = f"draft-{draft_counter[0]}"
            elif scenario_id in document_ids:
                raise ApiError(
                    422,
                    "BadRequest",
                    f"{scenario_id!r} is defined by the document and cannot be replaced",
                    "$.id",
                )
            scenario = Scenario(scenario_id, label, extends, overrides)
            registry = dict(evaluator.registry)
            registry[scenario_id] = scenario
            problems = validate_scenario_targets(scenario, document, registry, "$")
            if problems:
                first = problems[0]
                raise ApiError(422, "UnresolvableScenario", first.message, first.path)
            evaluator.registry[scenario_id] = scenario
            resolved = len(_resolve_count(scenario, registry))
        return _json_response(
            {
                "scenario_id": scenario_id,
                "label": label,
                "extends": extends,
                "override_count": len(overrides),
                "resolved_override_count": resolved,
            },
            201,
        )

    @app.post("/solve")
    async def post_solve(request: Request) -> Response:
        tree = await _body_tree(request)
        citizen_id = _field(tree, "citizen_id")
        scenario_id = _field(tree, "scenario_id", required=False)
        options = parse_options(tree, request)
        scenario = lookup_scenario(scenario_id, "$.scenario_id")
        rep = run_evaluation(citizen_id, scenario, options)
        body = {
            "citizen_id": citizen_id,
            "scenario_id": scenario_id or BASE_SCENARIO_ID,
            "method": options.method,
            **representation_to_tree(rep),
        }
        return _json_response(body)

    @app.post("/diff")
    async def post_diff(request: Request) -> Response:
        tree = await _body_tree(request)
        citizen_id = _field(tree, "citizen_id")
        before_id = _field(tree, "before_id", required=False)
        after_id = _field(tree, "after_id")
        options = parse_options(tree, request)
        before = run_evaluation(
            citizen_id, lookup_scenario(before_id, "$.before_id"), options
        )
        after = run_evaluation(
            citizen_id, lookup_scenario(after_id, "$.after_id"), options
        )
        report = deprivation(before, after)
        body = {
            "citizen_id": citizen_id,
            "before_id": before_id or BASE_SCENARIO_ID,
            "after_id": after_id,
            **deprivation_to_tree(report),
        }
        return _json_response(body)

    @app.post("/compare")
    async def post_compare(request: Request) -> Response:
        tree = await _body_tree(request)
        left_id = _field(tree, "left_citizen")
        right_id = _field(tree, "right_citizen")
        scenario_id = _field(tree, "scenario_id", required=False)
        options = parse_options(tree, request)
        scenario = lookup_scenario(scenario_id, "$.scenario_id")
        left = run_evaluation(left_id, scenario, options)
        right = run_evaluation(right_id, scenario, options)
        try:
            outcome = classify(left, right)
        except DimensionMismatch as exc:
            raise ApiError(422, "DimensionMismatch", str(exc), None)
        body = {
            "left": left_id,
            "right": right_id,
            "scenario_id": scenario_id or BASE_SCENARIO_ID,
            **outcome_to_tree(outcome),
        }
        return _json_response(body)

    _mount_ui(app, ui_dir)
    return app


def _resolve_count(scenario: Scenario, registry: dict[str, Scenario]) -> tuple:
    from .scenarios import resolve_overrides

    return resolve_overrides(scenario, registry)


def _mount_ui(app: FastAPI, ui_dir: str | None) -> None:
    candidate = ui_dir or os.environ.get("CAPSCOPE_UI_DIR")
    if candidate is None:
        repo_dist = pathlib.Path(__file__).resolve().parents[2] / "frontend" / "dist"
        candidate = str(repo_dist)
    if pathlib.Path(candidate).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=candidate, html=True), name="ui")


__all__ = ["ApiError", "DEFAULT_PORT", "create_app"]
