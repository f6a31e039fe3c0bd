"""Order extensions that keep the chromatic number of a coloured star system.

The current colour classes are merged into two sides: R holds classes
1..split and Y the rest, swapped if needed so that |R| >= |Y|. New vertices
take colours from the Y side (or, for glued 2e-blocks, one colour per side),
and every new star avoids leaf sets drawn from Y alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Colouring, is_admissible
from ..errors import InadmissibleOrder, PreconditionError, UnsupportedCase
from ._common import BlockWriter, ConstructionResult, finish, mixed, provenance
from .base import estar_rows

Row = tuple[int, tuple[int, ...]]


@dataclass
class _State:
    e: int
    k: int
    rows: list[Row]
    col: list[int]  # col[v - 1] is the colour of v

    @property
    def n(self) -> int:
        return len(self.col)


@dataclass(frozen=True)
class _Sides:
    r: list[int]
    y: list[int]
    z_r: int  # colour given to new R-side vertices
    z_y: int  # colour given to new Y-side vertices


def _state(base: ConstructionResult) -> _State:
    rows = [(int(b[0]), tuple(int(x) for x in b[1:])) for b in base.system.blocks]
    col = [int(c) for c in base.colouring.as_array()[1:]]
    return _State(base.e, base.k, rows, col)


def _sides(st: _State, split: int, exclude: frozenset[int] = frozenset()) -> _Sides:
    r_cols = list(range(1, split + 1))
    y_cols = list(range(split + 1, st.k + 1))
    verts = [v for v in range(1, st.n + 1) if v not in exclude]
    r = [v for v in verts if st.col[v - 1] <= split]
    y = [v for v in verts if st.col[v - 1] > split]
    if len(r) < len(y):
        r, y, r_cols, y_cols = y, r, y_cols, r_cols
    return _Sides(r, y, min(r_cols), max(y_cols))


def _check_split(base: ConstructionResult, split: int | None) -> int:
    k = base.k
    if k < 2:
        raise PreconditionError("extension needs at least two colour classes")
    split = k - 1 if split is None else int(split)
    if not 1 <= split < k:
        raise PreconditionError(f"split must lie in [1, {k - 1}]")
    return split


def _seal(st: _State, name: str, base: ConstructionResult, **params) -> ConstructionResult:
    w = BlockWriter(st.e, st.n)
    for c, leaves in st.rows:
        w.star(c, leaves)
    return finish(
        w,
        Colouring(st.k, st.col),
        unique=False,
        prov=provenance(name, base=base.claims.provenance, **params),
        k=st.k,
    )


# ------------------------------------------------------------------ 3-stars


def _three_plus_one(st: _State, split: int) -> None:
    s = _sides(st, split)
    x = st.n + 1
    st.rows += [(x, tuple(g)) for g in mixed(s.r, s.y, 3)]
    st.col.append(s.z_y)


def _three_plus_three(st: _State, split: int) -> None:
    s = _sides(st, split)
    n = st.n
    x1, x2, x3 = n + 1, n + 2, n + 3
    if len(s.r) < 3:
        raise UnsupportedCase("need three vertices on the R side")
    ra, rb, rc = s.r[-3:]
    rest = s.r[:-3]
    gadget: list[Row] = [
        (x1, (ra, rb, x2)),
        (x2, (ra, rb, x3)),
        (x3, (ra, rb, x1)),
        (rc, (x1, x2, x3)),
    ]
    if rest:
        groups = mixed(rest, s.y, 3)
        new = [(x, tuple(g)) for x in (x1, x2, x3) for g in groups]
    else:
        # Six vertices: R and Y have three each, so the leaves of the new
        # vertices pair two of Y with one of R, plus one extra cycle.
        if len(s.y) != 3:
            raise UnsupportedCase("unexpected side sizes at order six")
        (y1, y2, y3), (r1, r2, r3) = s.y, s.r
        new = [(x, (y1, y2, r1)) for x in (x1, x2, x3)]
        gadget = [
            (x1, (x2, y3, r2)),
            (x2, (x3, y3, r2)),
            (x3, (x1, y3, r2)),
            (r3, (x1, x2, x3)),
        ]
    st.rows += new + gadget
    st.col += [s.z_y] * 3


def _dismantle_candidates(st: _State):
    """Yield (row index, c, a, b1, b2), preferring the star at the newest
    vertex that contains the newest edge."""
    n = st.n
    order = sorted(
        range(len(st.rows)),
        key=lambda i: (not (st.rows[i][0] == n and n - 1 in st.rows[i][1]), i),
    )
    for i in order:
        c, leaves = st.rows[i]
        for a in sorted(leaves, key=lambda v: (v != n - 1, -v)):
            lo, hi = sorted(x for x in leaves if x != a)
            yield i, c, a, hi, lo
            yield i, c, a, lo, hi


def _three_plus_two(st: _State, split: int) -> None:
    """Order 3t+1 to 3t+3 by dismantling one star {c; a, b1, b2}."""
    n = st.n
    x2, x3 = n + 1, n + 2
    for i, c, a, b1, b2 in _dismantle_candidates(st):
        s = _sides(st, split, frozenset((c, a, b1, b2)))
        z = s.z_y
        col = st.col
        if col[a - 1] == z and col[b1 - 1] == z:
            continue
        if col[b2 - 1] == z and col[c - 1] == z:
            continue
        try:
            groups = mixed(s.r, s.y, 3)
        except UnsupportedCase:
            continue
        del st.rows[i]
        st.rows += [
            (x2, (c, a, b1)),
            (x3, (x2, a, b1)),
            (b2, (x2, c, x3)),
            (c, (x3, a, b1)),
        ]
        st.rows += [(x, tuple(g)) for x in (x2, x3) for g in groups]
        st.col += [z, z]
        return
    raise UnsupportedCase(f"no star can be dismantled safely at order {n}")


def extend_kchromatic_3star(
    base: ConstructionResult, split: int | None = None, target_n: int | None = None
) -> ConstructionResult:
    """Grow a k-chromatic 3-star system to any larger admissible order."""
    if base.e != 3:
        raise PreconditionError("base must be a 3-star system")
    split = _check_split(base, split)
    if target_n is None or not is_admissible(3, target_n) or target_n <= base.n:
        raise InadmissibleOrder(f"target order {target_n} is not an admissible order above {base.n}")
    st = _state(base)
    while st.n < target_n:
        if st.n % 3 == 0:
            if target_n == st.n + 1:
                _three_plus_one(st, split)
            else:
                _three_plus_three(st, split)
        else:
            _three_plus_two(st, split)
    return _seal(st, "extend_kchromatic_3star", base, split=split, target_n=target_n)


# ------------------------------------------------------------------ e-stars


def _glue_order_2e(st: _State, odd: list[int], even: list[int]) -> None:
    """Copy of the order-2e base with odd ids mapped onto ``odd`` and even ids
    onto ``even`` (both lists in order)."""
    table = {}
    for i, v in enumerate(odd):
        table[2 * i + 1] = v
    for i, v in enumerate(even):
        table[2 * i + 2] = v
    for c, leaves in estar_rows(st.e):
        st.rows.append((table[c], tuple(table[x] for x in leaves)))


def _e_plus_one(st: _State, split: int) -> None:
    s = _sides(st, split)
    x = st.n + 1
    st.rows += [(x, tuple(g)) for g in mixed(s.r, s.y, st.e)]
    st.col.append(s.z_y)


def _e_plus_2e(st: _State, split: int) -> None:
    s = _sides(st, split)
    e, n = st.e, st.n
    new = list(range(n + 1, n + 2 * e + 1))
    first, second = new[:e], new[e:]
    _glue_order_2e(st, new[0::2], new[1::2])
    for v in range(1, n + 1):
        st.rows += [(v, tuple(first)), (v, tuple(second))]
    st.col += [s.z_r if i % 2 == 0 else s.z_y for i in range(2 * e)]


def _e_plus_2e_minus_1(st: _State, split: int) -> None:
    """Order 2et+1 to 2et+2e: the new vertices plus the pivot v0 (last of R)
    carry a fresh order-2e block."""
    s = _sides(st, split)
    e, n = st.e, st.n
    v0 = s.r[-1]
    first = list(range(n + 1, n + e + 1))  # first[0] joins Y, the rest join R
    second = list(range(n + e + 1, n + 2 * e))  # join Y
    r_rest = s.r[:-1]
    groups = mixed(r_rest, s.y, e)
    for x in second:
        st.rows += [(x, tuple(g)) for g in groups]
    for v in range(1, n + 1):
        if v != v0:
            st.rows.append((v, tuple(first)))
    _glue_order_2e(st, first[1:] + [v0], [first[0]] + second)
    st.col.append(s.z_y)
    st.col += [s.z_r] * (e - 1)
    st.col += [s.z_y] * (e - 1)


def extend_kchromatic_estar(
    base: ConstructionResult, split: int | None = None, target_n: int | None = None
) -> ConstructionResult:
    """Grow a k-chromatic e-star system of order 0 or 1 (mod 2e) to a larger
    order of the same form."""
    e = base.e
    split = _check_split(base, split)
    if base.n % (2 * e) not in (0, 1):
        raise PreconditionError(f"base order must be 0 or 1 mod {2 * e}")
    if target_n is None or target_n <= base.n or target_n % (2 * e) not in (0, 1):
        raise InadmissibleOrder(f"target order must be 0 or 1 mod {2 * e} and above {base.n}")
    st = _state(base)
    while st.n < target_n:
        if st.n % (2 * e) == 0:
            if target_n == st.n + 1:
                _e_plus_one(st, split)
            else:
                _e_plus_2e(st, split)
        else:
            _e_plus_2e_minus_1(st, split)
    return _seal(st, "extend_kchromatic_estar", base, split=split, target_n=target_n)
