"""Model documents: a strict JSON format for a whole modeling setup.

A document bundles welfare dimensions, the city, commons, citizens,
and named scenarios. Numbers are exact: integer literals, decimal
literals, and "p/q" strings all become rationals; nothing ever goes
through binary floating point. Serialization is canonical, so equal
documents produce byte-identical text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .model import (
    ActionKind,
    Activity,
    CitizenState,
    CityModel,
    CommonKind,
    CommonSpec,
    CommonsState,
    ConversionMatrix,
    Diagnostic,
    Edge,
    ResourceQuantity,
    ResourceVector,
    TransformationMatrix,
    TransportMode,
    Vertex,
    validate_model,
)
from .rationals import Rat, as_rat, parse_rational, rat_to_json
from .scenarios import (
    BASE_SCENARIO_ID,
    CommonCapacity,
    CommonDelta,
    ConversionEntry,
    ForbidAction,
    Override,
    OverrideTarget,
    Resource,
    Scenario,
    TransformationEntry,
)

FORMAT_VERSION = "capscope/1"


class DocumentError(Exception):
    pass


class ModelSyntaxError(DocumentError):
    """Malformed JSON. Named to avoid shadowing the builtin SyntaxError."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemaError(DocumentError):
    """Well-formed JSON that does not fit the document schema."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(DocumentError):
    """Schema-valid document with inconsistent content."""

    def __init__(self, diagnostics: tuple[Diagnostic, ...]):
        summary = "; ".join(str(d) for d in diagnostics if d.severity == "error")
        super().__init__(summary or "validation failed")
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class ModelDocument:
    dimensions: tuple[str, ...]
    city: CityModel
    commons: CommonsState
    citizens: tuple[CitizenState, ...]
    scenarios: tuple[Scenario, ...] = ()
    warnings: tuple[Diagnostic, ...] = field(default=(), compare=False)

    def citizen(self, citizen_id: str) -> CitizenState | None:
        for cz in self.citizens:
            if cz.citizen_id == citizen_id:
                return cz
        return None

    def scenario_registry(self) -> dict[str, Scenario]:
        return {s.scenario_id: s for s in self.scenarios}


# --------------------------------------------------------------------------
# Parsing.

_MODE_NAMES = {m.value: m for m in TransportMode}
_ACTION_KIND_NAMES = {k.value: k for k in ActionKind}
_COMMON_KIND_NAMES = {k.value: k for k in CommonKind}


def _reject_constant(text: str) -> Any:
    raise ValueError(f"non-finite number {text} is not allowed")


def parse_model(text: str) -> ModelDocument:
    """Parse and validate a document; raises on the first schema error."""
    try:
        raw = json.loads(
            text,
            parse_float=parse_rational,
            parse_int=int,
            parse_constant=_reject_constant,
        )
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.lineno, exc.colno, exc.msg) from exc
    except ValueError as exc:
        raise ModelSyntaxError(1, 1, str(exc)) from exc
    return _document_from_tree(raw)


def load_model(path: str) -> ModelDocument:
    with open(path, encoding="utf-8") as handle:
        return parse_model(handle.read())


def load_fixture(name: str) -> ModelDocument:
    """Bundled example document by bare name, e.g. 'street_walk'."""
    from importlib import resources

    text = (
        resources.files("capscope").joinpath(f"fixtures/{name}.model").read_text("utf-8")
    )
    return parse_model(text)


def _document_from_tree(raw: Any) -> ModelDocument:
    top = _obj(raw, "$")
    _allow_keys(
        top,
        "$",
        {"format_version", "welfare_dimensions", "city", "commons", "citizens", "scenarios"},
        {"format_version", "welfare_dimensions", "city", "commons", "citizens"},
    )
    version = _str(top["format_version"], "$.format_version")
    if version != FORMAT_VERSION:
        raise SchemaError(
            "$.format_version", f"expected {FORMAT_VERSION!r}, got {version!r}"
        )
    dimensions = tuple(
        _str(d, f"$.welfare_dimensions[{i}]")
        for i, d in enumerate(_list(top["welfare_dimensions"], "$.welfare_dimensions"))
    )
    city = _parse_city(top["city"], "$.city")
    commons = CommonsState(
        tuple(
            _parse_common(c, f"$.commons[{i}]")
            for i, c in enumerate(_list(top["commons"], "$.commons"))
        )
    )
    citizens = tuple(
        _parse_citizen(c, f"$.citizens[{i}]")
        for i, c in enumerate(_list(top["citizens"], "$.citizens"))
    )
    scenarios = tuple(
        _parse_scenario(s, f"$.scenarios[{i}]")
        for i, s in enumerate(_list(top.get("scenarios", []), "$.scenarios"))
    )
    document = ModelDocument(dimensions, city, commons, citizens, scenarios)
    diagnostics = list(validate_model(city, commons, citizens, dimensions))
    diagnostics += _validate_scenarios(document)
    errors = tuple(d for d in diagnostics if d.severity == "error")
    if errors:
        raise ValidationError(tuple(diagnostics))
    return ModelDocument(
        dimensions,
        city,
        commons,
        citizens,
        scenarios,
        warnings=tuple(diagnostics),
    )


def _parse_city(raw: Any, path: str) -> CityModel:
    obj = _obj(raw, path)
    _allow_keys(obj, path, {"vertices", "edges", "activities"}, {"vertices"})
    vertices = []
    for i, v in enumerate(_list(obj["vertices"], f"{path}.vertices")):
        vpath = f"{path}.vertices[{i}]"
        vo = _obj(v, vpath)
        _allow_keys(vo, vpath, {"id", "label"}, {"id"})
        vertices.append(
            Vertex(_str(vo["id"], f"{vpath}.id"), _str(vo.get("label", ""), f"{vpath}.label"))
        )
    edges = []
    for i, e in enumerate(_list(obj.get("edges", []), f"{path}.edges")):
        epath = f"{path}.edges[{i}]"
        eo = _obj(e, epath)
        _allow_keys(eo, epath, {"id", "from", "to", "mode"}, {"id", "from", "to", "mode"})
        edges.append(
            Edge(
                _str(eo["id"], f"{epath}.id"),
                _str(eo["from"], f"{epath}.from"),
                _str(eo["to"], f"{epath}.to"),
                _enum(eo["mode"], f"{epath}.mode", _MODE_NAMES),
            )
        )
    activities = []
    for i, a in enumerate(_list(obj.get("activities", []), f"{path}.activities")):
        apath = f"{path}.activities[{i}]"
        ao = _obj(a, apath)
        _allow_keys(ao, apath, {"id", "vertex", "kind"}, {"id", "vertex", "kind"})
        activities.append(
            Activity(
                _str(ao["id"], f"{apath}.id"),
                _str(ao["vertex"], f"{apath}.vertex"),
                _enum(ao["kind"], f"{apath}.kind", _ACTION_KIND_NAMES),
            )
        )
    return CityModel(tuple(vertices), tuple(edges), tuple(activities))


def _parse_common(raw: Any, path: str) -> CommonSpec:
    obj = _obj(raw, path)
    _allow_keys(obj, path, {"id", "kind", "capacity", "delta"}, {"id", "kind", "capacity"})
    return CommonSpec(
        _str(obj["id"], f"{path}.id"),
        _enum(obj["kind"], f"{path}.kind", _COMMON_KIND_NAMES),
        _rational(obj["capacity"], f"{path}.capacity"),
        _rational(obj.get("delta", 0), f"{path}.delta"),
    )


def _parse_citizen(raw: Any, path: str) -> CitizenState:
    obj = _obj(raw, path)
    _allow_keys(
        obj,
        path,
        {
            "id",
            "home_vertex",
            "resources",
            "conversion",
            "transformation",
            "forbidden_actions",
        },
        {"id", "home_vertex", "resources", "conversion", "transformation"},
    )
    resources = []
    for i, r in enumerate(_list(obj["resources"], f"{path}.resources")):
        rpath = f"{path}.resources[{i}]"
        ro = _obj(r, rpath)
        _allow_keys(ro, rpath, {"id", "quantity", "unit"}, {"id", "quantity"})
        resources.append(
            ResourceQuantity(
                _str(ro["id"], f"{rpath}.id"),
                _rational(ro["quantity"], f"{rpath}.quantity"),
                _str(ro.get("unit", ""), f"{rpath}.unit"),
            )
        )
    forbidden = tuple(
        _str(a, f"{path}.forbidden_actions[{i}]")
        for i, a in enumerate(
            _list(obj.get("forbidden_actions", []), f"{path}.forbidden_actions")
        )
    )
    return CitizenState(
        _str(obj["id"], f"{path}.id"),
        _str(obj["home_vertex"], f"{path}.home_vertex"),
        ResourceVector(tuple(resources)),
        ConversionMatrix(_parse_matrix(obj["conversion"], f"{path}.conversion")),
        TransformationMatrix(_parse_matrix(obj["transformation"], f"{path}.transformation")),
        forbidden,
    )


def _parse_matrix(raw: Any, path: str) -> dict[str, dict[str, Rat]]:
    obj = _obj(raw, path)
    out: dict[str, dict[str, Rat]] = {}
    for action_id, row in obj.items():
        rpath = f"{path}.{action_id}"
        row_obj = _obj(row, rpath)
        if not row_obj:
            continue  # empty rows mean the same as absent rows
        out[action_id] = {
            column: _rational(value, f"{rpath}.{column}")
            for column, value in row_obj.items()
        }
    return out


_TARGET_FIELDS: dict[str, tuple[Callable[..., OverrideTarget], tuple[str, ...], bool]] = {
    # type tag -> (constructor, field keys in order, takes a value)
    "common_capacity": (CommonCapacity, ("common",), True),
    "common_delta": (CommonDelta, ("common",), True),
    "resource": (Resource, ("citizen", "resource"), True),
    "conversion_entry": (ConversionEntry, ("citizen", "action", "column"), True),
    "transformation_entry": (TransformationEntry, ("citizen", "action", "dimension"), True),
    "forbid_action": (ForbidAction, ("citizen", "action"), False),
}


def parse_override(raw: Any, path: str) -> Override:
    obj = _obj(raw, path)
    _allow_keys(obj, path, {"target", "value"}, {"target"})
    tpath = f"{path}.target"
    target_obj = _obj(obj["target"], tpath)
    type_tag = _str(target_obj.get("type"), f"{tpath}.type")
    spec = _TARGET_FIELDS.get(type_tag)
    if spec is None:
        raise SchemaError(f"{tpath}.type", f"unknown target type {type_tag!r}")
    constructor, keys, takes_value = spec
    _allow_keys(target_obj, tpath, {"type", *keys}, {"type", *keys})
    target = constructor(*(_str(target_obj[k], f"{tpath}.{k}") for k in keys))
    if takes_value:
        if "value" not in obj:
            raise SchemaError(path, f"target {type_tag!r} needs a value")
        return Override(target, _rational(obj["value"], f"{path}.value"))
    if "value" in obj:
        raise SchemaError(f"{path}.value", f"target {type_tag!r} takes no value")
    return Override(target)


def _parse_scenario(raw: Any, path: str) -> Scenario:
    obj = _obj(raw, path)
    _allow_keys(obj, path, {"id", "label", "extends", "overrides"}, {"id", "overrides"})
    extends = obj.get("extends")
    return Scenario(
        _str(obj["id"], f"{path}.id"),
        _str(obj.get("label", ""), f"{path}.label"),
        None if extends is None else _str(extends, f"{path}.extends"),
        tuple(
            parse_override(o, f"{path}.overrides[{i}]")
            for i, o in enumerate(_list(obj["overrides"], f"{path}.overrides"))
        ),
    )


def validate_scenario_targets(
    scenario: Scenario,
    document: ModelDocument,
    registry: Mapping[str, Scenario],
    path: str = "scenario",
) -> list[Diagnostic]:
    """Static id checks for one scenario; numeric invariants stay apply-time."""
    out: list[Diagnostic] = []

    def err(where: str, message: str) -> None:
        out.append(Diagnostic("error", where, message))

    if scenario.extends is not None and scenario.extends != BASE_SCENARIO_ID:
        if scenario.extends not in registry:
            err(f"{path}.extends", f"unknown scenario {scenario.extends!r}")
        else:
            seen = {scenario.scenario_id}
            walk: Scenario | None = registry.get(scenario.extends)
            while walk is not None:
                if walk.scenario_id in seen:
                    err(f"{path}.extends", "extends cycle")
                    break
                seen.add(walk.scenario_id)
                nxt = walk.extends
                walk = (
                    registry.get(nxt)
                    if nxt is not None and nxt != BASE_SCENARIO_ID
                    else None
                )

    action_ids = set(document.city.action_ids())
    common_ids = {c.common_id for c in document.commons.commons}
    citizens = {cz.citizen_id: cz for cz in document.citizens}
    dimension_ids = set(document.dimensions)

    for j, override in enumerate(scenario.overrides):
        opath = f"{path}.overrides[{j}]"
        target = override.target
        if isinstance(target, (CommonCapacity, CommonDelta)):
            if target.common_id not in common_ids:
                err(opath, f"unknown common {target.common_id!r}")
            continue
        citizen = citizens.get(target.citizen_id)
        if citizen is None:
            err(opath, f"unknown citizen {target.citizen_id!r}")
            continue
        if isinstance(target, Resource):
            if target.resource_id not in citizen.resources.ids():
                err(opath, f"unknown resource {target.resource_id!r}")
        elif isinstance(target, ConversionEntry):
            if target.action_id not in action_ids:
                err(opath, f"unknown action {target.action_id!r}")
            elif target.column not in set(citizen.resources.ids()) | common_ids:
                err(opath, f"unknown column {target.column!r}")
        elif isinstance(target, TransformationEntry):
            if target.action_id not in action_ids:
                err(opath, f"unknown action {target.action_id!r}")
            elif target.dimension not in dimension_ids:
                err(opath, f"unknown dimension {target.dimension!r}")
        elif isinstance(target, ForbidAction):
            if target.action_id not in action_ids:
                err(opath, f"unknown action {target.action_id!r}")
    return out


def _validate_scenarios(document: ModelDocument) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    registry: dict[str, Scenario] = {}
    for i, s in enumerate(document.scenarios):
        path = f"scenarios[{i}]"
        if s.scenario_id == BASE_SCENARIO_ID:
            out.append(
                Diagnostic(
                    "error",
                    f"{path}.id",
                    f"{BASE_SCENARIO_ID!r} is reserved for the empty scenario",
                )
            )
        if s.scenario_id in registry:
            out.append(
                Diagnostic(
                    "error", f"{path}.id", f"duplicate scenario id {s.scenario_id!r}"
                )
            )
        registry[s.scenario_id] = s
    for i, s in enumerate(document.scenarios):
        out += validate_scenario_targets(s, document, registry, f"scenarios[{i}]")
    return out


# --------------------------------------------------------------------------
# Typed accessors shared by the tree walkers.


def _obj(raw: Any, path: str) -> dict:
    if not isinstance(raw, dict):
        raise SchemaError(path, f"expected an object, got {type(raw).__name__}")
    return raw


def _list(raw: Any, path: str) -> list:
    if not isinstance(raw, list):
        raise SchemaError(path, f"expected an array, got {type(raw).__name__}")
    return raw


def _str(raw: Any, path: str) -> str:
    if not isinstance(raw, str):
        raise SchemaError(path, f"expected a string, got {type(raw).__name__}")
    return raw


def _enum(raw: Any, path: str, names: Mapping[str, Any]) -> Any:
    value = _str(raw, path)
    if value not in names:
        raise SchemaError(path, f"expected one of {sorted(names)}, got {value!r}")
    return names[value]


def _rational(raw: Any, path: str) -> Rat:
    if isinstance(raw, bool):
        raise SchemaError(path, "expected a number, got a boolean")
    if isinstance(raw, int):
        return as_rat(raw)
    if isinstance(raw, str):
        try:
            return parse_rational(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(path, f"bad rational literal {raw!r}: {exc}") from exc
    try:
        return as_rat(raw)  # parse_float already produced an exact rational
    except (TypeError, ValueError) as exc:
        raise SchemaError(
            path, f"expected a number or \"p/q\" string, got {type(raw).__name__}"
        ) from exc


def _allow_keys(obj: dict, path: str, allowed: set[str], required: set[str]) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown key")
    for key in required:
        if key not in obj:
            raise SchemaError(path, f"missing key {key!r}")


# --------------------------------------------------------------------------
# Serialization. Default-valued fields are omitted, keys are emitted
# sorted, and rationals become ints or "p/q" strings, so any two equal
# documents serialize to the same bytes.

_TARGET_TAGS: dict[type, tuple[str, tuple[tuple[str, str], ...]]] = {
    CommonCapacity: ("common_capacity", (("common", "common_id"),)),
    CommonDelta: ("common_delta", (("common", "common_id"),)),
    Resource: ("resource", (("citizen", "citizen_id"), ("resource", "resource_id"))),
    ConversionEntry: (
        "conversion_entry",
        (("citizen", "citizen_id"), ("action", "action_id"), ("column", "column")),
    ),
    TransformationEntry: (
        "transformation_entry",
        (("citizen", "citizen_id"), ("action", "action_id"), ("dimension", "dimension")),
    ),
    ForbidAction: ("forbid_action", (("citizen", "citizen_id"), ("action", "action_id"))),
}


def override_to_tree(override: Override) -> dict:
    tag, fields = _TARGET_TAGS[type(override.target)]
    target = {"type": tag}
    for key, attr in fields:
        target[key] = getattr(override.target, attr)
    tree: dict[str, Any] = {"target": target}
    if override.value is not None:
        tree["value"] = rat_to_json(override.value)
    return tree


def document_to_tree(document: ModelDocument) -> dict:
    def common_tree(c: CommonSpec) -> dict:
        tree: dict[str, Any] = {
            "id": c.common_id,
            "kind": c.kind.value,
            "capacity": rat_to_json(c.capacity),
        }
        if as_rat(c.delta) != 0:
            tree["delta"] = rat_to_json(c.delta)
        return tree

    def matrix_tree(rows: Mapping[str, Mapping[str, Rat]]) -> dict:
        return {
            action: {column: rat_to_json(v) for column, v in row.items()}
            for action, row in rows.items()
            if row
        }

    def citizen_tree(cz: CitizenState) -> dict:
        tree: dict[str, Any] = {
            "id": cz.citizen_id,
            "home_vertex": cz.home_vertex,
            "resources": [
                {
                    "id": r.resource_id,
                    "quantity": rat_to_json(r.quantity),
                    **({"unit": r.unit} if r.unit else {}),
                }
                for r in cz.resources.entries
            ],
            "conversion": matrix_tree(cz.conversion.rows),
            "transformation": matrix_tree(cz.transformation.rows),
        }
        if cz.forbidden_actions:
            tree["forbidden_actions"] = sorted(cz.forbidden_actions)
        return tree

    def scenario_tree(s: Scenario) -> dict:
        tree: dict[str, Any] = {"id": s.scenario_id}
        if s.label:
            tree["label"] = s.label
        if s.extends is not None:
            tree["extends"] = s.extends
        tree["overrides"] = [override_to_tree(o) for o in s.overrides]
        return tree

    city: dict[str, Any] = {
        "vertices": [
            {"id": v.vertex_id, **({"label": v.label} if v.label else {})}
            for v in document.city.vertices
        ]
    }
    if document.city.edges:
        city["edges"] = [
            {"id": e.edge_id, "from": e.source, "to": e.target, "mode": e.mode.value}
            for e in document.city.edges
        ]
    if document.city.activities:
        city["activities"] = [
            {"id": a.activity_id, "vertex": a.vertex, "kind": a.kind.value}
            for a in document.city.activities
        ]

    tree: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "welfare_dimensions": list(document.dimensions),
        "city": city,
        "commons": [common_tree(c) for c in document.commons.commons],
        "citizens": [citizen_tree(cz) for cz in document.citizens],
    }
    if document.scenarios:
        tree["scenarios"] = [scenario_tree(s) for s in document.scenarios]
    return tree


def serialize_model(document: ModelDocument) -> str:
    return canonical_json(document_to_tree(document))


def canonical_json(tree: Any) -> str:
    return json.dumps(tree, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


__all__ = [
    "FORMAT_VERSION",
    "DocumentError",
    "ModelDocument",
    "ModelSyntaxError",
    "SchemaError",
    "ValidationError",
    "canonical_json",
    "document_to_tree",
    "load_fixture",
    "load_model",
    "override_to_tree",
    "parse_model",
    "parse_override",
    "serialize_model",
    "validate_scenario_targets",
]
