"""Star systems, colourings and exact verification.

Blocks are stored as an integer array of shape ``(b, e + 1)``: column 0 is the
centre and columns 1..e are the leaves in ascending order. Vertex ids are
1-based everywhere. The compact storage matters for the large gadget
constructions, which reach tens of millions of blocks.
"""

from __future__ import annotations

import hashlib
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidStar, NotABijection

# Above this order the coverage check streams over a bitmap instead of
# keeping a full per-edge counter.
STREAMING_THRESHOLD = 5000
_CHUNK_ROWS = 1 << 20


def id_dtype(n: int) -> type[np.unsignedinteger]:
    """Smallest unsigned dtype that holds vertex ids up to ``n``."""
    return np.uint16 if n <= np.iinfo(np.uint16).max else np.uint32


def is_admissible(e: int, n: int) -> bool:
    """True iff an e-star system of order n can exist: e | C(n,2) and n >= 2e."""
    if e < 1 or n < 0:
        return False
    return n >= 2 * e and (n * (n - 1) // 2) % e == 0


@dataclass(frozen=True)
class Star:
    """One block ``{center; leaves}``. Leaves are kept sorted."""

    center: int
    leaves: tuple[int, ...]

    def __post_init__(self) -> None:
        leaves = tuple(sorted(int(x) for x in self.leaves))
        object.__setattr__(self, "center", int(self.center))
        object.__setattr__(self, "leaves", leaves)
        if not leaves:
            raise InvalidStar("a star needs at least one leaf")
        if len(set(leaves)) != len(leaves):
            raise InvalidStar(f"repeated leaf in {self}")
        if self.center in leaves:
            raise InvalidStar(f"centre {self.center} is also a leaf")

    @property
    def e(self) -> int:
        return len(self.leaves)

    def vertices(self) -> tuple[int, ...]:
        return (self.center, *self.leaves)

    def edges(self) -> list[tuple[int, int]]:
        return [(min(self.center, x), max(self.center, x)) for x in self.leaves]

    def __str__(self) -> str:
        return "{%d; %s}" % (self.center, ",".join(map(str, self.leaves)))


def _as_block_array(blocks, e: int | None) -> np.ndarray:
    if isinstance(blocks, np.ndarray):
        arr = np.asarray(blocks)
        if arr.ndim != 2:
            raise InvalidStar("block array must be two-dimensional")
        return arr
    rows = []
    for b in blocks:
        if isinstance(b, Star):
            rows.append(b.vertices())
        else:
            center, *rest = b
            if len(rest) == 1 and isinstance(rest[0], Iterable):
                rest = list(rest[0])
            rows.append((center, *rest))
    if not rows:
        width = 1 + (e or 0)
        return np.zeros((0, width), dtype=np.int64)
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidStar("blocks have different sizes")
    return np.array(rows, dtype=np.int64)


class StarSystem:
    """An order-n collection of e-stars, meant to partition the edges of K_n.

    Immutable: the block array is read-only. Validity as a decomposition is a
    separate question answered by :func:`validate_decomposition`.
    """

    __slots__ = ("_e", "_n", "_blocks")

    def __init__(self, e: int, n: int, blocks, *, check: bool = True) -> None:
        e, n = int(e), int(n)
        if e < 1:
            raise InvalidStar("e must be at least 1")
        arr = _as_block_array(blocks, e)
        if arr.shape[1] != e + 1:
            raise InvalidStar(f"blocks have {arr.shape[1] - 1} leaves, expected {e}")
        dtype = id_dtype(n)
        if check and arr.size:
            lo, hi = int(arr.min()), int(arr.max())
            if lo < 1 or hi > n:
                raise InvalidStar(f"vertex ids must lie in [1, {n}]")
        out = np.empty(arr.shape, dtype=dtype)
        out[:, 0] = arr[:, 0]
        out[:, 1:] = np.sort(arr[:, 1:], axis=1)
        if check and out.size:
            _check_rows(out)
        out.flags.writeable = False
        self._e, self._n, self._blocks = e, n, out

    @classmethod
    def _trusted(cls, e: int, n: int, arr: np.ndarray) -> StarSystem:
        """Wrap an array already in canonical form (sorted leaves, right dtype)."""
        obj = cls.__new__(cls)
        arr.flags.writeable = False
        obj._e, obj._n, obj._blocks = int(e), int(n), arr
        return obj

    @property
    def e(self) -> int:
        return self._e

    @property
    def n(self) -> int:
        return self._n

    @property
    def blocks(self) -> np.ndarray:
        """Read-only ``(b, e+1)`` array; column 0 holds the centres."""
        return self._blocks

    @property
    def expected_blocks(self) -> int:
        return comb(self._n, 2) // self._e

    def __len__(self) -> int:
        return int(self._blocks.shape[0])

    def __getitem__(self, i: int) -> Star:
        row = self._blocks[i]
        return Star(int(row[0]), tuple(int(x) for x in row[1:]))

    def __iter__(self) -> Iterator[Star]:
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StarSystem):
            return NotImplemented
        return (
            self._e == other._e
            and self._n == other._n
            and self._blocks.shape == other._blocks.shape
            and bool(np.array_equal(self._blocks, other._blocks))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"StarSystem(e={self._e}, n={self._n}, blocks={len(self)})"

    def digest(self) -> str:
        """SHA-256 over (e, n, blocks); stable across runs and platforms."""
        h = hashlib.sha256(f"{self._e} {self._n} {len(self)}\n".encode())
        h.update(np.ascontiguousarray(self._blocks, dtype="<u4").tobytes())
        return h.hexdigest()


def _check_rows(arr: np.ndarray) -> None:
    for start in range(0, arr.shape[0], _CHUNK_ROWS):
        part = arr[start : start + _CHUNK_ROWS]
        if part.shape[1] > 2 and np.any(part[:, 2:] == part[:, 1:-1]):
            raise InvalidStar("repeated leaf inside a block")
        if np.any(part[:, 1:] == part[:, :1]):
            raise InvalidStar("a block's centre is also one of its leaves")


# ---------------------------------------------------------------- colourings


class Colouring:
    """Total map from vertices 1..n to colour classes 1..k (classes may be empty)."""

    __slots__ = ("_k", "_a")

    def __init__(self, k: int, assign) -> None:
        k = int(k)
        if isinstance(assign, Mapping):
            n = max(assign) if assign else 0
            if set(assign) != set(range(1, n + 1)):
                raise ValueError("colouring must be total over 1..n")
            vals = [assign[v] for v in range(1, n + 1)]
        else:
            vals = assign
        vals = np.asarray(vals, dtype=np.int64).ravel()
        if vals.size and (int(vals.min()) < 1 or int(vals.max()) > k):
            raise ValueError(f"colour classes must lie in [1, {k}]")
        a = np.zeros(vals.size + 1, dtype=np.uint8 if k < 256 else np.uint16)
        a[1:] = vals
        a.flags.writeable = False
        self._k, self._a = k, a

    @classmethod
    def from_classes(cls, classes: Sequence[Iterable[int]], n: int | None = None) -> Colouring:
        """Build from a list of vertex sets; class i (0-based) becomes colour i+1."""
        mapping: dict[int, int] = {}
        for i, cls_ in enumerate(classes, start=1):
            for v in cls_:
                if v in mapping:
                    raise ValueError(f"vertex {v} appears in two classes")
                mapping[int(v)] = i
        if n is not None and set(mapping) != set(range(1, n + 1)):
            raise ValueError("classes do not cover 1..n exactly")
        return cls(len(classes), mapping)

    @property
    def k(self) -> int:
        return self._k

    @property
    def n(self) -> int:
        return len(self._a) - 1

    def as_array(self) -> np.ndarray:
        """Read-only array of length n+1; index 0 is unused (holds 0)."""
        return self._a

    def of(self, v: int) -> int:
        return int(self._a[v])

    def class_sizes(self) -> list[int]:
        counts = np.bincount(self._a[1:], minlength=self._k + 1)
        return [int(c) for c in counts[1:]]

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self._k)]
        for v in range(1, self.n + 1):
            out[self._a[v] - 1].append(v)
        return out

    def nonempty_classes(self) -> int:
        return sum(1 for s in self.class_sizes() if s)

    def permuted(self, perm: Mapping[int, int] | Sequence[int]) -> Colouring:
        """Rename colours: ``perm[c]`` (or ``perm[c-1]`` for sequences) replaces c."""
        table = np.zeros(self._k + 1, dtype=np.int64)
        for c in range(1, self._k + 1):
            table[c] = perm[c] if isinstance(perm, Mapping) else perm[c - 1]
        return Colouring(self._k, table[self._a[1:]])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Colouring):
            return NotImplemented
        return self._k == other._k and bool(np.array_equal(self._a, other._a))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Colouring(k={self._k}, sizes={self.class_sizes()})"


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class DecompositionReport:
    ok: bool
    uncovered_edges: tuple[tuple[int, int], ...]
    multiply_covered_edges: tuple[tuple[tuple[int, int], int], ...]
    block_count_expected: int
    block_count_actual: int


@dataclass(frozen=True)
class ColouringReport:
    proper: bool
    monochromatic_blocks: tuple[int, ...]
    class_sizes: tuple[int, ...]
    equitable: bool
    strongly_equitable: bool


def _pair_index(arr: np.ndarray) -> np.ndarray:
    """Colex index of every centre-leaf edge in a block chunk."""
    c = arr[:, :1].astype(np.int64)
    leaves = arr[:, 1:].astype(np.int64)
    u = np.minimum(c, leaves)
    v = np.maximum(c, leaves)
    return ((v - 1) * (v - 2) // 2 + (u - 1)).ravel()


def _decode(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    idx = np.asarray(idx, dtype=np.int64)
    w = np.floor((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) / 2).astype(np.int64)
    # correct any floating point drift
    w = np.where(w * (w - 1) // 2 > idx, w - 1, w)
    w = np.where((w + 1) * w // 2 <= idx, w + 1, w)
    return idx - w * (w - 1) // 2 + 1, w + 1


def _edge_list(idx: np.ndarray, counts: np.ndarray | None = None) -> list:
    """Pairs (u, v) with u < v in lexicographic order, optionally with counts."""
    u, v = _decode(idx)
    order = np.lexsort((v, u))
    pairs = list(zip(u[order].tolist(), v[order].tolist()))
    if counts is None:
        return pairs
    return list(zip(pairs, np.asarray(counts)[order].tolist()))


def validate_decomposition(
    sys: StarSystem, *, streaming_threshold: int = STREAMING_THRESHOLD
) -> DecompositionReport:
    """Check that every pair of distinct vertices lies in exactly one block."""
    n, e = sys.n, sys.e
    total = comb(n, 2)
    arr = sys.blocks
    if n <= streaming_threshold:
        uncovered, multi = _coverage_counting(arr, total)
    else:
        uncovered, multi = _coverage_streaming(arr, total)
    ok = not uncovered and not multi and len(sys) * e == total
    return DecompositionReport(
        ok=ok,
        uncovered_edges=tuple(uncovered),
        multiply_covered_edges=tuple(multi),
        block_count_expected=total // e,
        block_count_actual=len(sys),
    )


def _coverage_counting(arr: np.ndarray, total: int):
    counts = np.zeros(total, dtype=np.int64)
    for start in range(0, arr.shape[0], _CHUNK_ROWS):
        counts += np.bincount(_pair_index(arr[start : start + _CHUNK_ROWS]), minlength=total)
    dup_idx = np.flatnonzero(counts > 1)
    return _edge_list(np.flatnonzero(counts == 0)), _edge_list(dup_idx, counts[dup_idx])


def _coverage_streaming(arr: np.ndarray, total: int):
    # Pass 1: a seen-bitmap plus the set of edges met more than once.
    seen = np.zeros(total, dtype=bool)
    dup_parts = []
    for start in range(0, arr.shape[0], _CHUNK_ROWS):
        idx = _pair_index(arr[start : start + _CHUNK_ROWS])
        uniq, cnt = np.unique(idx, return_counts=True)
        repeat = uniq[(cnt > 1) | seen[uniq]]
        if repeat.size:
            dup_parts.append(repeat)
        seen[uniq] = True
    uncovered = _edge_list(np.flatnonzero(~seen))
    del seen
    if not dup_parts:
        return uncovered, []
    # Pass 2: exact multiplicities for the repeated edges only.
    dups = np.unique(np.concatenate(dup_parts))
    counts = np.zeros(dups.size, dtype=np.int64)
    for start in range(0, arr.shape[0], _CHUNK_ROWS):
        idx = _pair_index(arr[start : start + _CHUNK_ROWS])
        pos = np.searchsorted(dups, idx)
        pos = np.minimum(pos, dups.size - 1)
        hit = dups[pos] == idx
        counts += np.bincount(pos[hit], minlength=dups.size)
    return uncovered, _edge_list(dups, counts)


def check_colouring(sys: StarSystem, col: Colouring) -> ColouringReport:
    """Scan every block for monochromaticity and summarise class sizes."""
    if col.n != sys.n:
        raise ValueError(f"colouring covers {col.n} vertices, system has {sys.n}")
    a = col.as_array()
    mono: list[int] = []
    arr = sys.blocks
    for start in range(0, arr.shape[0], _CHUNK_ROWS):
        c = a[arr[start : start + _CHUNK_ROWS]]
        bad = np.flatnonzero(np.all(c == c[:, :1], axis=1))
        mono.extend((bad + start).tolist())
    sizes = tuple(col.class_sizes())
    spread = max(sizes) - min(sizes) if sizes else 0
    return ColouringReport(
        proper=not mono,
        monochromatic_blocks=tuple(mono),
        class_sizes=sizes,
        equitable=spread <= 1,
        strongly_equitable=spread == 0,
    )


# -------------------------------------------------------------- relabelling


def relabel(
    sys: StarSystem, f: Mapping[int, int] | Sequence[int] | Callable[[int], int]
) -> StarSystem:
    """Rename vertices by a bijection of 1..n (mapping, callable, or sequence
    whose entry i-1 is the image of i)."""
    n = sys.n
    table = np.zeros(n + 1, dtype=np.int64)
    for v in range(1, n + 1):
        if isinstance(f, Mapping):
            table[v] = f[v] if v in f else -1
        elif callable(f):
            table[v] = f(v)
        else:
            table[v] = f[v - 1]
    image = table[1:]
    if image.min() < 1 or image.max() > n or np.unique(image).size != n:
        raise NotABijection("relabelling must be a bijection of 1..n")
    return StarSystem(sys.e, n, table[sys.blocks], check=False)


def disjoint_copy(sys: StarSystem, i: int, *, offset: int = 0) -> StarSystem:
    """Copy number i (1-based): vertex x becomes ``offset + (i-1)*n + x``.

    The result lives on order ``offset + i*n`` so that copies 1..i all fit.
    """
    if i < 1:
        raise ValueError("copy tags start at 1")
    shift = offset + (i - 1) * sys.n
    n_new = offset + i * sys.n
    arr = sys.blocks.astype(id_dtype(n_new)) + id_dtype(n_new)(shift)
    return StarSystem._trusted(sys.e, n_new, arr)
