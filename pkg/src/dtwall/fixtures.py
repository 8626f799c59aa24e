"""Shipped fixtures: embedding pairs, almost-closed forms and the chart fixture."""

from __future__ import annotations

from .blowup import EmbeddingMap, GradedAffineData
from .cosection import OneForm
from .exact import symbols

x1, x2, u = symbols("x1", "x2", "u")


def embedding_fixtures() -> dict[str, EmbeddingMap]:
    """Minimal presentations with a redundant re-embedding each."""
    square = GradedAffineData((), (("x1", 1),), (x1**2,))
    cusp = GradedAffineData(("u",), (("x1", 2), ("x2", 3)), (x1**3 - x2**2, u * x1))
    fat = GradedAffineData((), (("x1", 1), ("x2", 1)), (x1**2, x2**2))
    return {
        "double-point": EmbeddingMap.from_relations(square, [("y2", 1, x1)]),
        "cusp-with-parameter": EmbeddingMap.from_relations(
            cusp, [("y3", 5, x1 * x2), ("y4", 2, u * x1 + x1)]
        ),
        # two redundant coordinates y3 = y4 = x1
        "fat-point-twice": EmbeddingMap.from_relations(fat, [("y3", 1, x1), ("y4", 1, x1)]),
    }


def redundant_presentations() -> dict[str, tuple[GradedAffineData, GradedAffineData]]:
    """(data, same ideal with an extra generator from the ideal)."""
    cusp = GradedAffineData(("u",), (("x1", 2), ("x2", 3)), (x1**3 - x2**2, u * x1))
    node = GradedAffineData((), (("x1", 1), ("x2", -1)), (x1 * x2 - x1**2 * x2**2, x1**3 * x2))
    square = GradedAffineData((), (("x1", 1), ("x2", 1)), (x1**2, x1 * x2))
    return {
        "cusp-with-parameter": (cusp, cusp.with_generators([*cusp.generators, x1 * (x1**3 - x2**2) + u * x1 * x2])),
        "node": (node, node.with_generators([*node.generators, (x1 + 2) * node.generators[0]])),
        "square": (square, square.with_generators([*square.generators, x1**2 * x2 - 3 * x1 * x2**2])),
    }


PLANE = GradedAffineData((), (("x1", 1), ("x2", -1)))
PLANE_WITH_PARAMETER = GradedAffineData(("u",), (("x1", 1), ("x2", -1)))


def almost_closed_fixtures() -> dict[str, OneForm]:
    return {
        "exact": OneForm.exact(PLANE, x1 * x2),
        "perturbed-exact": OneForm(PLANE, (), (x2 + x1**2 * x2**3, x1)),
        "cusp-cosection": OneForm(PLANE, (), (2 * x1 * x2**2 + x1**2 * x2**3, 2 * x1**2 * x2)),
        "with-parameter": OneForm(PLANE_WITH_PARAMETER, (x1 * x2,), (u * x2 + x1**2 * x2**3, u * x1)),
    }


CHART_FIXTURE = "cusp-cosection"
CHART_INDEX = 1


def chart_fixture() -> OneForm:
    return almost_closed_fixtures()[CHART_FIXTURE]
