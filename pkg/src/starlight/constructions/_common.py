"""Shared plumbing for the builders: result types, a block accumulator, the
grouping routines that split vertex lists into leaf sets, and exit checks."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import asdict, dataclass, field

import numpy as np

from ..core import (
    Colouring,
    StarSystem,
    _check_rows,
    check_colouring,
    id_dtype,
    validate_decomposition,
)
from ..errors import ConstructionError, UnsupportedCase


@dataclass(frozen=True)
class Claims:
    """What a builder asserts about its output."""

    k: int
    equitable: bool
    strongly_equitable: bool
    unique: bool
    provenance: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ConstructionResult:
    """A system, a proper colouring of it, and the builder's claims.

    ``anchors`` lists vertex sets whose colours (class i gets colour i+1)
    drive the forcing argument of the uniquely colourable builders; it is
    empty for the others.
    """

    system: StarSystem
    colouring: Colouring
    claims: Claims
    anchors: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def e(self) -> int:
        return self.system.e

    @property
    def k(self) -> int:
        return self.claims.k


def provenance(name: str, **params) -> str:
    inner = ", ".join(f"{k}={v}" for k, v in params.items())
    return f"{name}({inner})"


class BlockWriter:
    """Accumulates blocks in emission order, in the final id dtype."""

    def __init__(self, e: int, n: int) -> None:
        self.e = e
        self.n = n
        self.dtype = id_dtype(n)
        self._rows: list[tuple[int, ...]] = []
        self._parts: list[np.ndarray] = []

    def _flush(self) -> None:
        if self._rows:
            arr = np.array(self._rows, dtype=np.int64)
            arr[:, 1:] = np.sort(arr[:, 1:], axis=1)
            self._parts.append(arr.astype(self.dtype))
            self._rows = []

    def star(self, centre: int, leaves: Sequence[int]) -> None:
        if len(leaves) != self.e:
            raise ConstructionError(f"star at {centre} has {len(leaves)} leaves, expected {self.e}")
        self._rows.append((int(centre), *(int(x) for x in leaves)))

    def stars(self, centre: int, groups: Sequence[Sequence[int]]) -> None:
        for g in groups:
            self.star(centre, g)

    def array(self, arr: np.ndarray) -> None:
        """Append canonical rows (sorted leaves) in bulk."""
        self._flush()
        if arr.shape[0]:
            self._parts.append(np.asarray(arr).astype(self.dtype, copy=False))

    def fan(self, centres, groups, shift: int = 0) -> None:
        """Every centre joined to every leaf group (group ids offset by ``shift``)."""
        centres = np.asarray(centres, dtype=np.int64)
        g = np.sort(np.asarray(groups, dtype=np.int64).reshape(-1, self.e), axis=1) + shift
        if centres.size == 0 or g.shape[0] == 0:
            return
        out = np.empty((centres.size, g.shape[0], self.e + 1), dtype=self.dtype)
        out[:, :, 0] = centres[:, None]
        out[:, :, 1:] = g[None, :, :]
        self.array(out.reshape(-1, self.e + 1))

    def result(self) -> np.ndarray:
        self._flush()
        if not self._parts:
            return np.empty((0, self.e + 1), dtype=self.dtype)
        return np.concatenate(self._parts)


def finish(
    writer: BlockWriter,
    colouring: Colouring,
    *,
    unique: bool,
    prov: str,
    anchors: Sequence[Sequence[int]] = (),
    k: int | None = None,
) -> ConstructionResult:
    """Seal the blocks and verify decomposition and colouring before returning."""
    arr = writer.result()
    e, n = writer.e, writer.n
    if arr.size and (int(arr[:, 0].min()) < 1 or int(arr.max()) > n):
        raise ConstructionError(f"{prov}: vertex id outside 1..{n}")
    try:
        _check_rows(arr)
        system = StarSystem._trusted(e, n, arr)
    except Exception as exc:  # malformed block: a builder bug
        raise ConstructionError(f"{prov}: {exc}") from exc
    report = validate_decomposition(system)
    if not report.ok:
        raise ConstructionError(
            f"{prov}: not a decomposition ({len(report.uncovered_edges)} uncovered, "
            f"{len(report.multiply_covered_edges)} repeated, "
            f"{report.block_count_actual}/{report.block_count_expected} blocks)"
        )
    if colouring.n != n:
        raise ConstructionError(f"{prov}: colouring covers {colouring.n} of {n} vertices")
    creport = check_colouring(system, colouring)
    if not creport.proper:
        raise ConstructionError(
            f"{prov}: attached colouring has {len(creport.monochromatic_blocks)} "
            f"monochromatic blocks, first {creport.monochromatic_blocks[:5]}"
        )
    used = colouring.nonempty_classes()
    k = colouring.k if k is None else k
    if used != k or colouring.k != k:
        raise ConstructionError(f"{prov}: colouring uses {used} classes, expected {k}")
    claims = Claims(
        k=k,
        equitable=creport.equitable,
        strongly_equitable=creport.strongly_equitable,
        unique=unique,
        provenance=prov,
    )
    return ConstructionResult(
        system, colouring, claims, tuple(tuple(int(v) for v in a) for a in anchors)
    )


# ------------------------------------------------------------------ grouping
#
# Every routine below splits vertex lists into leaf sets of size e. They are
# the explicit forms behind the "chunk one colour, top up with another"
# patterns used across the builders.


def chunk(vertices: Sequence[int], e: int) -> list[list[int]]:
    """Consecutive runs of e; the length must divide evenly."""
    vs = list(vertices)
    if len(vs) % e:
        raise UnsupportedCase(f"{len(vs)} vertices do not split into {e}-sets")
    return [vs[i : i + e] for i in range(0, len(vs), e)]


def anchored(same: Sequence[int], other: Sequence[int], e: int) -> list[list[int]]:
    """Runs of e-1 from ``same``, each topped up from ``other``; leftovers of
    ``other`` are chunked. No group is drawn from ``same`` alone."""
    same, other = list(same), list(other)
    groups: list[list[int]] = []
    o = 0
    for i in range(0, len(same), e - 1):
        part = same[i : i + e - 1]
        need = e - len(part)
        if o + need > len(other):
            raise UnsupportedCase(
                f"cannot anchor {len(same)} vertices with {len(other)} others in {e}-sets"
            )
        groups.append(part + other[o : o + need])
        o += need
    return groups + chunk(other[o:], e)


def alternating(r: Sequence[int], y: Sequence[int], e: int) -> list[list[int]]:
    """Equal-size lists: (e-1 of r, 1 of y), (e-1 of y, 1 of r), repeating."""
    r, y = list(r), list(y)
    if len(r) != len(y) or len(r) % e:
        raise UnsupportedCase(f"alternating groups need equal sizes divisible by {e}")
    groups = []
    ri = yi = 0
    flip = False
    while ri < len(r):
        if not flip:
            groups.append(r[ri : ri + e - 1] + [y[yi]])
            ri, yi = ri + e - 1, yi + 1
        else:
            groups.append(y[yi : yi + e - 1] + [r[ri]])
            yi, ri = yi + e - 1, ri + 1
        flip = not flip
    return groups


def mixed(r: Sequence[int], y: Sequence[int], e: int) -> list[list[int]]:
    """Split r + y into e-sets, none drawn from y alone."""
    r, y = list(r), list(y)
    if len(r) == len(y) and len(r) % e == 0:
        return alternating(r, y, e)
    if len(r) >= len(y):
        return anchored(y, r, e)
    # Fewer r than y: a few (1 r, e-1 y) groups bring the sizes level, then
    # alternate. Falls back to plain anchoring when the sizes do not fit.
    deficit = len(y) - len(r)
    if e > 2 and deficit % (e - 2) == 0:
        j = deficit // (e - 2)
        rest_r, rest_y = r[j:], y[j * (e - 1) :]
        if j <= len(r) and len(rest_r) == len(rest_y) and len(rest_r) % e == 0:
            head = [[r[i], *y[i * (e - 1) : (i + 1) * (e - 1)]] for i in range(j)]
            return head + alternating(rest_r, rest_y, e)
    return anchored(y, r, e)


def non_mono_groups(classes: Sequence[Sequence[int]], e: int) -> list[list[int]]:
    """Partition the union of ``classes`` into e-sets that each meet at least
    two classes. Greedy: e-1 from the fullest class, topped up from the next
    fullest ones (ties broken by class index)."""
    pools = [list(c) for c in classes]
    pos = [0] * len(pools)
    total = sum(len(c) for c in pools)
    if total % e:
        raise UnsupportedCase(f"{total} vertices do not split into {e}-sets")
    groups = []
    for _ in range(total // e):
        order = sorted(
            (i for i in range(len(pools)) if pos[i] < len(pools[i])),
            key=lambda i: (pos[i] - len(pools[i]), i),
        )
        if len(order) < 2:
            raise UnsupportedCase("only one colour class left; cannot avoid a monochromatic set")
        first = order[0]
        take = min(e - 1, len(pools[first]) - pos[first])
        g = pools[first][pos[first] : pos[first] + take]
        pos[first] += take
        for i in order[1:]:
            if len(g) == e:
                break
            take = min(e - len(g), len(pools[i]) - pos[i])
            g += pools[i][pos[i] : pos[i] + take]
            pos[i] += take
        groups.append(g)
    return groups
