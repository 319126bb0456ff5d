import pytest

from capscope.ilp import (
    UnboundedVariableError,
    VarKind,
    build_ilp,
    build_ilp_for_dimensions,
    dump_instance,
    upper_bounds,
    violations,
)
from capscope.model import (
    ActionKind,
    Activity,
    CitizenState,
    CityModel,
    CommonKind,
    CommonSpec,
    CommonsState,
    ConversionMatrix,
    Edge,
    ResourceQuantity,
    ResourceVector,
    TransformationMatrix,
    Vertex,
)
from capscope.rationals import make_rat

STREET_WALK_DUMP = """\
var street_1_2 integer [0, 3]
var street_1_3 integer [0, 3]
var street_1_4 integer [0, 10]
var street_1_5 integer [0, 10]
var street_2_3 integer [0, 2]
var street_2_4 integer [0, 5]
var street_3_5 integer [0, 5]
var street_4_5 integer [0, 2]
max beauty: 3*street_1_2 + 2*street_1_5 + 3*street_2_3 + 2*street_2_4 + 2*street_3_5 + street_4_5
max health: street_1_2 + 3*street_1_3 + 2*street_1_4 + street_1_5 + 2*street_2_3 + 3*street_2_4 + 3*street_3_5 + street_4_5
row budget:energy: 2*street_1_2 + 3*street_1_3 + street_1_4 + street_1_5 + 5*street_2_3 + 2*street_2_4 + 2*street_3_5 + 5*street_4_5 <= 10
row budget:time: 3*street_1_2 + 2*street_1_3 + street_1_4 + street_1_5 + 5*street_2_3 + 2*street_2_4 + 2*street_3_5 + 5*street_4_5 <= 10
row common:street_12:street_1_2: street_1_2 <= 3
row common:street_13:street_1_3: street_1_3 <= 3
row common:street_14:street_1_4: street_1_4 <= 10
row common:street_15:street_1_5: street_1_5 <= 10
row common:street_23:street_2_3: street_2_3 <= 2
row common:street_24:street_2_4: street_2_4 <= 5
row common:street_35:street_3_5: street_3_5 <= 5
row common:street_45:street_4_5: street_4_5 <= 2
row flow:v1: -street_1_2 + street_1_3 + street_1_4 - street_1_5 = 0
row flow:v2: street_1_2 - street_2_3 - street_2_4 = 0
row flow:v3: -street_1_3 + street_2_3 + street_3_5 = 0
row flow:v4: -street_1_4 + street_2_4 + street_4_5 = 0
row flow:v5: street_1_5 - street_3_5 - street_4_5 = 0"""


def test_street_walk_compilation_golden(street_walk_doc):
    doc = street_walk_doc
    instance = build_ilp_for_dimensions(
        doc.citizens[0], doc.city, doc.commons, doc.dimensions
    )
    assert dump_instance(instance) == STREET_WALK_DUMP + "\n"


def _model(*, earn_money=False, car=False):
    city = CityModel(
        (Vertex("v1"), Vertex("v2")),
        (Edge("go", "v1", "v2"), Edge("back", "v2", "v1")),
        (
            Activity("nap", "v1", ActionKind.BINARY),
            Activity("shop", "v2", ActionKind.BOUNDED_INTEGER),
            Activity("busk", "v2", ActionKind.BOUNDED_INTEGER),
        ),
    )
    commons = CommonsState(
        (
            CommonSpec("bridge", CommonKind.UTILISED, make_rat(1)),
            CommonSpec("stock", CommonKind.CONSUMABLE, make_rat(6), make_rat(2)),
        )
    )
    conversion = {
        "go": {"time": make_rat(1), "bridge": make_rat(1)},
        "back": {"time": make_rat(1), "bridge": make_rat(1)},
        "nap": {"time": make_rat(2)},
        "shop": {"time": make_rat(1), "money": make_rat(3), "stock": make_rat(2)},
        "busk": {"time": make_rat(2), "money": make_rat(-5 if earn_money else 1)},
    }
    resources = [ResourceQuantity("money", make_rat(9)), ResourceQuantity("time", make_rat(8))]
    if car:
        resources.append(ResourceQuantity("car", make_rat(4)))
    citizen = CitizenState(
        "cz",
        "v1",
        ResourceVector(tuple(resources)),
        ConversionMatrix(conversion),
        TransformationMatrix(
            {"nap": {"health": make_rat(2)}, "shop": {"pleasure": make_rat(1)}}
        ),
    )
    return citizen, city, commons


def test_upper_bounds_budgets_and_kinds():
    citizen, city, commons = _model()
    bounds = upper_bounds(citizen, city, commons)
    # time 8 at cost 1; consumable stock has effective capacity 4 at cost 2
    assert bounds["go"] == 8
    assert bounds["nap"] == 1  # binary
    assert bounds["shop"] == 2  # stock: floor(4/2) beats money floor(9/3)
    assert bounds["busk"] == 4  # time floor(8/2)


def test_upper_bounds_earnable_resource_excluded():
    citizen, city, commons = _model(earn_money=True)
    bounds = upper_bounds(citizen, city, commons)
    # money can be earned by busk, so it no longer caps shop
    assert bounds["shop"] == 2  # stock cap still applies
    assert bounds["busk"] == 4


def test_unbounded_variable_rejected():
    citizen, city, commons = _model(earn_money=True)
    conversion = dict(citizen.conversion.rows)
    conversion["busk"] = {"money": make_rat(-5)}  # no time cost, money earnable
    free = CitizenState(
        citizen.citizen_id,
        citizen.home_vertex,
        citizen.resources,
        ConversionMatrix(conversion),
        citizen.transformation,
    )
    with pytest.raises(UnboundedVariableError):
        upper_bounds(free, city, commons)


def test_forbidden_action_pinned_to_zero():
    citizen, city, commons = _model()
    banned = CitizenState(
        citizen.citizen_id,
        citizen.home_vertex,
        citizen.resources,
        citizen.conversion,
        citizen.transformation,
        forbidden_actions=("shop",),
    )
    instance = build_ilp(banned, city, commons)
    shop = next(v for v in instance.variables if v.name == "shop")
    assert (shop.lower, shop.upper) == (0, 0)


def test_row_order_and_gating():
    citizen, city, commons = _model()
    instance = build_ilp(citizen, city, commons)
    names = [c.name for c in instance.constraints]
    assert names == [
        "budget:money",
        "budget:time",
        "budget:stock",
        "common:bridge:go",
        "common:bridge:back",
        "flow:v1",
        "flow:v2",
        "gate:v2",
        "gate:v2:shop",
        "gate:v2:busk",
    ]
    kinds = {v.name: v.kind for v in instance.variables}
    assert kinds["nap"] is VarKind.BINARY
    assert kinds["go"] is VarKind.INTEGER
    # home vertex activities are never gated
    assert "gate:v1" not in names


def test_violations_reports_bounds_and_rows():
    citizen, city, commons = _model()
    instance = build_ilp(citizen, city, commons)
    ok = violations(instance, {"go": 1, "back": 1, "nap": 1, "shop": 1})
    assert ok == ()
    # shop at v2 without traveling there breaks flow and gating
    bad = violations(instance, {"shop": 1})
    assert any(v.startswith("row:gate:v2") for v in bad)
    # bound violation
    assert violations(instance, {"nap": 2}) != ()


def test_objectives_follow_document_dimensions():
    citizen, city, commons = _model()
    instance = build_ilp_for_dimensions(
        citizen, city, commons, ("pleasure", "health", "fame")
    )
    assert [o.dimension_id for o in instance.objectives] == ["pleasure", "health", "fame"]
    assert instance.objectives[2].coeffs == ()
