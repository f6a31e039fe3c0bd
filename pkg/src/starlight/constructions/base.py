"""Equitably 2-chromatic base systems: 3-stars of every admissible order and
e-stars of order 2e. Both use the parity colouring (odd ids are class 1)."""

from __future__ import annotations

from ..core import Colouring, is_admissible
from ..errors import InadmissibleOrder, PreconditionError
from ._common import BlockWriter, ConstructionResult, finish, provenance

Row = tuple[int, tuple[int, ...]]

SIX_VERTEX_BASE: tuple[Row, ...] = (
    (1, (3, 5, 6)),
    (2, (1, 3, 6)),
    (4, (1, 2, 3)),
    (5, (2, 3, 4)),
    (6, (3, 4, 5)),
)


def _plus_one(m: int) -> list[Row]:
    """Order m = 3t to 3t+1: the new vertex takes consecutive triples."""
    return [(m + 1, (i, i + 1, i + 2)) for i in range(1, m, 3)]


def _plus_three(m: int) -> list[Row]:
    """Order m = 3t to 3t+3."""
    x1, x2, x3 = m + 1, m + 2, m + 3
    rows: list[Row] = []
    for x in (x1, x2, x3):
        rows += [(x, (i, i + 1, i + 2)) for i in range(1, m - 3, 3)]
    a, b = m - 2, m - 1
    rows += [(x1, (a, b, x2)), (x2, (a, b, x3)), (x3, (a, b, x1)), (m, (x1, x2, x3))]
    return rows


def three_star_rows(n: int) -> list[Row]:
    """Blocks of the 2-chromatic 3-star system of order n, in emission order."""
    if not is_admissible(3, n):
        raise InadmissibleOrder(f"no 3-star system of order {n}")
    rows = list(SIX_VERTEX_BASE)
    m = 6
    while m + 3 <= n:
        rows += _plus_three(m)
        m += 3
    if m < n:
        rows += _plus_one(m)
    return rows


def parity(n: int) -> Colouring:
    return Colouring(2, [1 if v % 2 else 2 for v in range(1, n + 1)])


def build_equitable_2chromatic_3star(n: int) -> ConstructionResult:
    """Equitably 2-chromatic 3-star system of any admissible order n."""
    rows = three_star_rows(n)
    w = BlockWriter(3, n)
    for c, leaves in rows:
        w.star(c, leaves)
    return finish(
        w,
        parity(n),
        unique=False,
        prov=provenance("build_equitable_2chromatic_3star", n=n),
    )


def estar_rows(e: int) -> list[Row]:
    """Blocks of the strongly equitable 2-chromatic e-star system of order 2e,
    grown one leaf at a time from the six-vertex base. Sorted by centre."""
    if e < 3:
        raise PreconditionError("e must be at least 3")
    rows = list(SIX_VERTEX_BASE)
    for f in range(3, e):
        # Grow from f-stars on 2f vertices to (f+1)-stars on 2f+2 vertices.
        grown: list[Row] = []
        for pos, (c, leaves) in enumerate(rows):
            grown.append((c, leaves + (2 * f + 2 if pos < f else 2 * f + 1,)))
        grown.append((2 * f + 1, tuple(range(1, f + 2))))
        grown.append((2 * f + 2, (3, *range(f + 2, 2 * f + 2))))
        rows = sorted(grown)
    return rows


def build_2chromatic_estar(e: int) -> ConstructionResult:
    """Strongly equitable 2-chromatic e-star system of order 2e."""
    rows = estar_rows(e)
    w = BlockWriter(e, 2 * e)
    for c, leaves in rows:
        w.star(c, leaves)
    return finish(
        w,
        parity(2 * e),
        unique=False,
        prov=provenance("build_2chromatic_estar", e=e),
    )
