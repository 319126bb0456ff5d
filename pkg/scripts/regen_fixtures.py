"""Regenerate the bundled example documents.

Both fixtures are built from in-code data and written in canonical form,
so rerunning this script must leave the files byte-identical unless the
models themselves changed.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from capscope.documents import ModelDocument, parse_model, serialize_model
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
    TransportMode,
    Vertex,
)
from capscope.rationals import make_rat as R
from capscope.scenarios import (
    CommonCapacity,
    ConversionEntry,
    Override,
    Scenario,
)

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src" / "capscope" / "fixtures"


def street_walk() -> ModelDocument:
    """Small walking-tour city: five squares, eight one-way streets.

    Each street is a utilised common, so a tour can take it at most once.
    Two non-earnable budgets cap the tour length.
    """
    # street -> (orientation, energy cost, time cost, beauty, health)
    streets = {
        "12": (("v1", "v2"), 2, 3, 3, 1),
        "13": (("v3", "v1"), 3, 2, 0, 3),
        "14": (("v4", "v1"), 1, 1, 0, 2),
        "15": (("v1", "v5"), 1, 1, 2, 1),
        "23": (("v2", "v3"), 5, 5, 3, 2),
        "24": (("v2", "v4"), 2, 2, 2, 3),
        "35": (("v5", "v3"), 2, 2, 2, 3),
        "45": (("v5", "v4"), 5, 5, 1, 1),
    }
    vertices = tuple(Vertex(f"v{i}", f"Square {i}") for i in range(1, 6))
    edges = []
    conversion: dict[str, dict[str, object]] = {}
    transformation: dict[str, dict[str, object]] = {}
    commons = []
    for key, ((src, dst), energy, time, beauty, health) in streets.items():
        edge_id = f"street_{key[0]}_{key[1]}"
        common_id = f"street_{key}"
        edges.append(Edge(edge_id, src, dst, TransportMode.ROAD))
        commons.append(CommonSpec(common_id, CommonKind.UTILISED, R(1)))
        conversion[edge_id] = {"energy": R(energy), "time": R(time), common_id: R(1)}
        transformation[edge_id] = {"beauty": R(beauty), "health": R(health)}

    walker = CitizenState(
        "walker",
        "v1",
        ResourceVector(
            (
                ResourceQuantity("energy", R(10), "kcal"),
                ResourceQuantity("time", R(10), "h"),
            )
        ),
        ConversionMatrix(conversion),
        TransformationMatrix(transformation),
    )
    scenarios = (
        Scenario(
            "street_23_damaged",
            "Street between squares 2 and 3 closed",
            overrides=(Override(CommonCapacity("street_23"), R(0)),),
        ),
    )
    return ModelDocument(
        ("beauty", "health"),
        CityModel(vertices, tuple(edges), ()),
        CommonsState(tuple(commons)),
        (walker,),
        scenarios,
    )


def two_citizens() -> ModelDocument:
    """Four-place city with activities, two citizens sharing the commons."""
    half = R(1, 2)
    vertices = (
        Vertex("v1", "Home"),
        Vertex("v2", "Park"),
        Vertex("v3", "Center"),
        Vertex("v4", "Office"),
    )
    pairs = [(i, j) for i in range(1, 5) for j in range(1, 5) if i != j]
    edges = []
    commons = [
        CommonSpec(f"{tag}_{i}{j}", CommonKind.UTILISED, R(1))
        for tag in ("road", "pt")
        for i, j in pairs
        if i < j
    ]
    commons.append(CommonSpec("park", CommonKind.UTILISED, R(1)))

    conv_c1: dict[str, dict[str, object]] = {}
    conv_c2: dict[str, dict[str, object]] = {}
    trans_c1: dict[str, dict[str, object]] = {}
    trans_c2: dict[str, dict[str, object]] = {}
    for i, j in pairs:
        for tag, mode in (("road", TransportMode.ROAD), ("pt", TransportMode.PUBLIC_TRANSPORT)):
            edge_id = f"{tag}_{i}_{j}"
            common_id = f"{tag}_{min(i, j)}{max(i, j)}"
            edges.append(Edge(edge_id, f"v{i}", f"v{j}", mode))
            cost = {"money": R(2), "time": half, "car": half, common_id: R(1)}
            conv_c1[edge_id] = dict(cost)
            conv_c2[edge_id] = dict(cost)
            trans_c1[edge_id] = {"pleasure": R(-1 if tag == "road" else -2)}
            if tag == "pt":
                trans_c2[edge_id] = {"pleasure": R(-1)}

    activities = (
        Activity("sleep", "v1", ActionKind.BINARY),
        Activity("family_time", "v1", ActionKind.BOUNDED_INTEGER),
        Activity("walk", "v2", ActionKind.BINARY),
        Activity("run", "v2", ActionKind.BINARY),
        Activity("museum", "v3", ActionKind.BINARY),
        Activity("after_work", "v3", ActionKind.BOUNDED_INTEGER),
        Activity("doctor", "v3", ActionKind.BINARY),
        Activity("work", "v4", ActionKind.BINARY),
    )
    activity_cost = {
        "sleep": {"time": R(9)},
        "family_time": {"time": R(1)},
        "walk": {"time": R(2), "park": R(1)},
        "run": {"time": R(1), "park": R(1)},
        "museum": {"money": R(10), "time": R(3)},
        "after_work": {"money": R(5), "time": R(1)},
        "doctor": {"money": R(30), "time": R(1)},
        "work": {"money": R(-100), "time": R(8)},
    }
    conv_c1.update({a: dict(row) for a, row in activity_cost.items()})
    conv_c2.update({a: dict(row) for a, row in activity_cost.items()})
    trans_c1.update(
        {
            "sleep": {"health": R(10), "pleasure": R(10)},
            "family_time": {"pleasure": R(2)},
            "walk": {"health": R(3), "pleasure": R(2)},
            "run": {"health": R(6), "pleasure": R(-2)},
            "museum": {"health": R(1), "pleasure": R(6)},
            "after_work": {"health": R(-1), "pleasure": R(1)},
            "doctor": {"health": R(5), "pleasure": R(-1)},
            "work": {"health": R(1), "pleasure": R(1)},
        }
    )
    trans_c2.update(
        {
            "sleep": {"health": R(10), "pleasure": R(10)},
            "family_time": {"pleasure": R(1)},
            "walk": {"health": R(1), "pleasure": R(2)},
            "run": {"health": R(3), "pleasure": R(4)},
            "museum": {"pleasure": R(2)},
            "after_work": {"pleasure": R(2)},
            "doctor": {"health": R(2), "pleasure": R(-3)},
            "work": {"health": R(1), "pleasure": R(1)},
        }
    )

    def citizen(cid: str, car_hours: int, conv, trans) -> CitizenState:
        return CitizenState(
            cid,
            "v1",
            ResourceVector(
                (
                    ResourceQuantity("money", R(0), "eur"),
                    ResourceQuantity("time", R(24), "h"),
                    ResourceQuantity("car", R(car_hours), "h"),
                )
            ),
            ConversionMatrix(conv),
            TransformationMatrix(trans),
        )

    scenarios = (
        Scenario(
            "road_14_damaged",
            "Road between home and office closed",
            overrides=(Override(CommonCapacity("road_14"), R(0)),),
        ),
        Scenario(
            "park_damaged",
            "Park unusable",
            overrides=(Override(CommonCapacity("park"), R(0)),),
        ),
        Scenario(
            "museum_subsidy",
            "Museum entry subsidised to 5",
            overrides=(
                Override(ConversionEntry("c1", "museum", "money"), R(5)),
                Override(ConversionEntry("c2", "museum", "money"), R(5)),
            ),
        ),
        Scenario(
            "road_14_and_park",
            "Road closure plus park damage",
            extends="road_14_damaged",
            overrides=(Override(CommonCapacity("park"), R(0)),),
        ),
    )
    return ModelDocument(
        ("health", "pleasure"),
        CityModel(vertices, tuple(edges), activities),
        CommonsState(tuple(commons)),
        (
            citizen("c1", 24, conv_c1, trans_c1),
            citizen("c2", 0, conv_c2, trans_c2),
        ),
        scenarios,
    )


def main() -> None:
    for name, build in (("street_walk", street_walk), ("two_citizens", two_citizens)):
        document = build()
        text = serialize_model(document)
        assert parse_model(text) == document, name
        path = FIXTURES / f"{name}.model"
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path} ({len(text)} bytes)")


if __name__ == "__main__":
    main()
