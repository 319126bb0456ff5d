import json

import pytest
from importlib import resources

from capscope.documents import (
    FORMAT_VERSION,
    ModelSyntaxError,
    SchemaError,
    ValidationError,
    canonical_json,
    load_fixture,
    load_model,
    parse_model,
    parse_override,
    serialize_model,
)
from capscope.rationals import make_rat
from capscope.scenarios import ForbidAction, Resource


def _tree():
    """Smallest clean document; tests mutate copies of it."""
    return {
        "format_version": FORMAT_VERSION,
        "welfare_dimensions": ["health"],
        "city": {
            "vertices": [{"id": "v1"}, {"id": "v2"}],
            "edges": [{"id": "go", "from": "v1", "to": "v2", "mode": "road"}],
            "activities": [{"id": "rest", "vertex": "v1", "kind": "binary"}],
        },
        "commons": [{"id": "lane", "kind": "utilised", "capacity": 1}],
        "citizens": [
            {
                "id": "cz",
                "home_vertex": "v1",
                "resources": [{"id": "time", "quantity": 4}],
                "conversion": {"rest": {"time": 2}, "go": {"time": 1, "lane": 1}},
                "transformation": {"rest": {"health": 1}},
            }
        ],
    }


def _parse(tree):
    return parse_model(json.dumps(tree))


@pytest.mark.parametrize("name", ["street_walk", "two_citizens"])
def test_fixture_round_trip_bytes(name):
    text = (
        resources.files("capscope").joinpath(f"fixtures/{name}.model").read_text("utf-8")
    )
    doc = parse_model(text)
    assert serialize_model(doc) == text
    assert parse_model(serialize_model(doc)) == doc


def test_serialization_is_stable_for_minimal_doc():
    doc = _parse(_tree())
    text = serialize_model(doc)
    again = parse_model(text)
    assert again == doc
    assert serialize_model(again) == text
    assert text.endswith("\n")


def test_load_model_and_fixture(tmp_path):
    path = tmp_path / "m.model"
    path.write_text(json.dumps(_tree()), encoding="utf-8")
    assert load_model(str(path)) == _parse(_tree())
    assert load_fixture("street_walk").citizens[0].citizen_id == "walker"


def test_syntax_error_carries_position():
    with pytest.raises(ModelSyntaxError) as info:
        parse_model('{\n  "format_version": }')
    assert info.value.line == 2
    assert info.value.column > 0


@pytest.mark.parametrize("literal", ["NaN", "Infinity", "-Infinity"])
def test_non_finite_numbers_rejected(literal):
    with pytest.raises(ModelSyntaxError):
        parse_model('{"format_version": %s}' % literal)


def test_float_literals_parse_exactly():
    tree = _tree()
    tree["citizens"][0]["resources"][0]["quantity"] = 0.1
    doc = _parse(tree)
    assert doc.citizens[0].resources.quantity("time") == make_rat(1, 10)


def test_fraction_strings_parse():
    tree = _tree()
    tree["citizens"][0]["resources"][0]["quantity"] = "3/4"
    doc = _parse(tree)
    assert doc.citizens[0].resources.quantity("time") == make_rat(3, 4)


@pytest.mark.parametrize(
    "mutate, path_part",
    [
        (lambda t: t.update(extra=1), "$.extra"),
        (lambda t: t.pop("citizens"), "$"),
        (lambda t: t.update(format_version="capscope/2"), "$.format_version"),
        (lambda t: t["city"]["edges"][0].update(mode="flying"), "$.city.edges[0].mode"),
        (lambda t: t["city"]["edges"][0].pop("mode"), "$.city.edges[0]"),
        (
            lambda t: t["citizens"][0]["resources"][0].update(quantity="3/0"),
            "$.citizens[0].resources[0].quantity",
        ),
        (
            lambda t: t["citizens"][0]["resources"][0].update(quantity=True),
            "$.citizens[0].resources[0].quantity",
        ),
        (lambda t: t.update(welfare_dimensions="health"), "$.welfare_dimensions"),
        (lambda t: t["citizens"][0].update(conversion=[1]), "$.citizens[0].conversion"),
    ],
)
def test_schema_errors_carry_paths(mutate, path_part):
    tree = _tree()
    mutate(tree)
    with pytest.raises(SchemaError) as info:
        _parse(tree)
    assert info.value.path == path_part


def test_override_parsing():
    ban = parse_override(
        {"target": {"type": "forbid_action", "citizen": "cz", "action": "go"}},
        "$.x",
    )
    assert ban == type(ban)(ForbidAction("cz", "go"))
    res = parse_override(
        {
            "target": {"type": "resource", "citizen": "cz", "resource": "time"},
            "value": "1/2",
        },
        "$.x",
    )
    assert res.target == Resource("cz", "time")
    assert res.value == make_rat(1, 2)


@pytest.mark.parametrize(
    "raw",
    [
        {"target": {"type": "forbid_action", "citizen": "cz", "action": "go"}, "value": 1},
        {"target": {"type": "resource", "citizen": "cz", "resource": "time"}},
        {"target": {"type": "mystery"}},
        {"target": {"type": "resource", "citizen": "cz"}},
        {"value": 3},
    ],
)
def test_bad_overrides_rejected(raw):
    with pytest.raises(SchemaError):
        parse_override(raw, "$.x")


def _with_scenario(tree, scenario):
    tree.setdefault("scenarios", []).append(scenario)
    return tree


def test_validation_error_collects_diagnostics():
    tree = _tree()
    tree["citizens"][0]["home_vertex"] = "nowhere"
    tree["citizens"][0]["conversion"]["rest"]["fuel"] = 1
    with pytest.raises(ValidationError) as info:
        _parse(tree)
    paths = [d.path for d in info.value.diagnostics if d.severity == "error"]
    assert "citizens[0]" in paths
    assert "citizens[0].conversion.rest.fuel" in paths


@pytest.mark.parametrize(
    "scenario",
    [
        {"id": "base", "overrides": []},
        {"id": "s", "extends": "ghost", "overrides": []},
        {
            "id": "s",
            "overrides": [
                {"target": {"type": "common_capacity", "common": "nope"}, "value": 0}
            ],
        },
        {
            "id": "s",
            "overrides": [
                {
                    "target": {
                        "type": "transformation_entry",
                        "citizen": "cz",
                        "action": "rest",
                        "dimension": "fame",
                    },
                    "value": 1,
                }
            ],
        },
    ],
)
def test_scenario_validation_failures(scenario):
    with pytest.raises(ValidationError):
        _parse(_with_scenario(_tree(), scenario))


def test_duplicate_scenario_ids_rejected():
    tree = _tree()
    _with_scenario(tree, {"id": "s", "overrides": []})
    _with_scenario(tree, {"id": "s", "overrides": []})
    with pytest.raises(ValidationError):
        _parse(tree)


def test_self_extends_cycle_rejected():
    with pytest.raises(ValidationError):
        _parse(_with_scenario(_tree(), {"id": "s", "extends": "s", "overrides": []}))


def test_warnings_survive_on_valid_documents():
    tree = _tree()
    tree["commons"][0]["capacity"] = 3  # legal but odd for an on/off common
    doc = _parse(tree)
    assert any(d.severity == "warning" for d in doc.warnings)
    # the warnings field stays out of document equality
    stripped = type(doc)(
        doc.dimensions, doc.city, doc.commons, doc.citizens, doc.scenarios
    )
    assert doc == stripped and stripped.warnings == ()


def test_canonical_json_shape():
    text = canonical_json({"b": 1, "a": [1, 2]})
    assert text == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
