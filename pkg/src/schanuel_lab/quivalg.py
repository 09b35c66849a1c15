"""Bound quiver algebras and their canonical modules.

A quiver plus an admissible set of relations determines a
finite-dimensional algebra whose basis is the set of paths modulo the
relation ideal.  This module computes that basis by bounded saturation
and exposes the canonical simple, projective and injective
representations together with socles.

Conventions (fixed once, used everywhere):
  * representations are left modules; paths are written left to right,
    so a path (a1, a2) means "traverse a1, then a2" and acts on a
    representation as the matrix product M_{a2} @ M_{a1};
  * path order is by length, then lexicographically in arrow indices;
    every basis and coordinate system downstream inherits this order;
  * the indecomposable projective at i uses paths starting at i (arrows
    acting by postcomposition), the indecomposable injective at i uses
    paths ending at i (arrows acting by transposed precomposition).
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BadVertex, NotAdmissible, NotComposable
from .exactlin import FpMatrix, validate_prime

MAX_ENUMERATED_PATHS = 50_000


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    label: str


class Quiver:
    """A finite quiver with canonically ordered vertices and arrows."""

    def __init__(self, vertex_count: int, arrows: Sequence):
        if vertex_count < 0:
            raise ValueError("vertex_count must be >= 0")
        self.vertex_count = int(vertex_count)
        normalized = []
        labels = set()
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(int(a[0]), int(a[1]), str(a[2]))
            if not (0 <= a.source < vertex_count and 0 <= a.target < vertex_count):
                raise BadVertex(f"arrow {a.label}: endpoints outside 0..{vertex_count - 1}")
            if a.label in labels:
                raise ValueError(f"duplicate arrow label {a.label!r}")
            labels.add(a.label)
            normalized.append(a)
        self.arrows: tuple[Arrow, ...] = tuple(normalized)
        self.arrows_from = [[] for _ in range(vertex_count)]
        self.arrows_into = [[] for _ in range(vertex_count)]
        for idx, a in enumerate(self.arrows):
            self.arrows_from[a.source].append(idx)
            self.arrows_into[a.target].append(idx)

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertex_count, self.arrows))

    def __repr__(self):
        return f"Quiver({self.vertex_count} vertices, {len(self.arrows)} arrows)"


@dataclass(frozen=True)
class Path:
    """A composable sequence of arrow indices; empty = trivial path."""

    source: int
    target: int
    arrows: tuple[int, ...]

    def __len__(self):
        return len(self.arrows)

    @property
    def sort_key(self):
        return (len(self.arrows), self.arrows, self.source)


def make_path(quiver: Quiver, source: int, arrows: Sequence[int]) -> Path:
    arrows = tuple(int(a) for a in arrows)
    at = source
    for idx in arrows:
        if not 0 <= idx < len(quiver.arrows):
            raise NotComposable(f"arrow index {idx} out of range")
        arrow = quiver.arrows[idx]
        if arrow.source != at:
            raise NotComposable(
                f"arrow {arrow.label} starts at {arrow.source}, path is at {at}"
            )
        at = arrow.target
    return Path(source, at, arrows)


class RelationSet:
    """Linear combinations of parallel paths of length >= 2.

    Each generator is a list of (coefficient, arrow-index sequence)
    terms; all paths in one generator must share source and target.
    """

    def __init__(self, generators: Sequence[Sequence[tuple[int, Sequence[int]]]]):
        self.generators = tuple(
            tuple((int(c), tuple(int(a) for a in path)) for c, path in gen)
            for gen in generators
        )

    def __eq__(self, other):
        if not isinstance(other, RelationSet):
            return NotImplemented
        return self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __len__(self):
        return len(self.generators)


def monomial_relations(paths: Sequence[Sequence[int]]) -> RelationSet:
    return RelationSet([[(1, path)] for path in paths])


class _Block:
    """Row space in RREF over the paths of one (source, target) pair."""

    __slots__ = ("p", "width", "rows", "pivots")

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v % self.p
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def insert(self, v: np.ndarray) -> Optional[np.ndarray]:
        """Add v to the span; return the new RREF row, or None if dependent."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return None
        c = int(nz[0])
        v = (v * pow(int(v[c]), self.p - 2, self.p)) % self.p
        for k in range(len(self.rows)):
            if self.rows[k][c]:
                self.rows[k] = (self.rows[k] - self.rows[k][c] * v) % self.p
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < c:
            pos += 1
        self.rows.insert(pos, v)
        self.pivots.insert(pos, c)
        return v


class BoundQuiverAlgebra:
    """Path basis of a quiver modulo a visibly admissible ideal.

    Built through :func:`build_algebra`; immutable afterwards.  Carries
    per-vertex-pair path lists, the saturated relation spans, the chosen
    basis (the non-pivot paths) and memoized canonical modules.
    """

    def __init__(self, quiver, p, relations, max_path_length, paths, blocks, nilpotency_degree):
        self.quiver = quiver
        self.p = p
        self.relations = relations
        self.max_path_length = max_path_length
        self.nilpotency_degree = nilpotency_degree
        self._paths = paths                      # (i, j) -> ordered list of Path
        self._path_index = {
            key: {path: k for k, path in enumerate(plist)} for key, plist in paths.items()
        }
        self._blocks = blocks                    # (i, j) -> _Block
        self.basis = {}                          # (i, j) -> ordered list of Path
        self.basis_index = {}
        for key, plist in paths.items():
            pivot_set = set(blocks[key].pivots)
            chosen = [path for k, path in enumerate(plist) if k not in pivot_set]
            self.basis[key] = chosen
            self.basis_index[key] = {path: k for k, path in enumerate(chosen)}
        self.total_dim = sum(len(b) for b in self.basis.values())
        self._simples = {}
        self._injectives = {}
        self._projectives = {}

    # --- bookkeeping ---

    @property
    def vertex_count(self) -> int:
        return self.quiver.vertex_count

    def check_vertex(self, i: int) -> int:
        if not 0 <= i < self.vertex_count:
            raise BadVertex(f"vertex {i} outside 0..{self.vertex_count - 1}")
        return int(i)

    def relation_terms(self):
        return self.relations.generators

    def __eq__(self, other):
        if not isinstance(other, BoundQuiverAlgebra):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.p == other.p
            and self.relations == other.relations
            and self.max_path_length == other.max_path_length
        )

    def __hash__(self):
        return hash((self.quiver, self.p, self.relations, self.max_path_length))

    def __repr__(self):
        return (
            f"BoundQuiverAlgebra(p={self.p}, vertices={self.vertex_count}, "
            f"dim={self.total_dim})"
        )

    # --- normal forms ---

    def reduce_coords(self, i: int, j: int, vec: np.ndarray) -> np.ndarray:
        """Reduce a vector over the (i, j) path list to basis coordinates."""
        key = (i, j)
        block = self._blocks[key]
        reduced = block.reduce(np.asarray(vec, dtype=np.int64))
        pivot_set = set(block.pivots)
        keep = [k for k in range(block.width) if k not in pivot_set]
        return reduced[keep]

    def path_coords(self, path: Path) -> np.ndarray:
        """Basis coordinates of a single path's class."""
        key = (path.source, path.target)
        plist = self._paths.get(key, [])
        vec = np.zeros(len(plist), dtype=np.int64)
        if len(path) > self.max_path_length:
            return self.reduce_coords(path.source, path.target, vec)
        vec[self._path_index[key][path]] = 1
        return self.reduce_coords(path.source, path.target, vec)

    def compose_paths(self, first: Path, second: Path) -> Optional[Path]:
        """Concatenate first-then-second; None when the product is zero."""
        if first.target != second.source:
            return None
        if len(first) + len(second) > self.max_path_length:
            return None
        return Path(first.source, second.target, first.arrows + second.arrows)

    def multiply_basis(self, x: Path, y: Path) -> np.ndarray:
        """Coordinates of the product [x][y] in the basis of its block."""
        if x.target != y.source:
            raise NotComposable("basis elements are not composable")
        prod = self.compose_paths(x, y)
        key = (x.source, y.target)
        if prod is None:
            return np.zeros(len(self.basis.get(key, [])), dtype=np.int64)
        return self.path_coords(prod)

    # --- canonical modules (memoized; constructed in repcat terms) ---

    def simple(self, i: int):
        i = self.check_vertex(i)
        if i not in self._simples:
            from . import repcat

            dims = [0] * self.vertex_count
            dims[i] = 1
            maps = [
                FpMatrix.zeros(self.p, dims[a.target], dims[a.source])
                for a in self.quiver.arrows
            ]
            self._simples[i] = repcat.Representation(self, dims, maps)
        return self._simples[i]

    def injective(self, i: int):
        i = self.check_vertex(i)
        if i not in self._injectives:
            from . import repcat

            dims = [len(self.basis.get((j, i), [])) for j in range(self.vertex_count)]
            maps = []
            for idx, a in enumerate(self.quiver.arrows):
                src_basis = self.basis.get((a.source, i), [])
                tgt_basis = self.basis.get((a.target, i), [])
                # precomposition by the arrow, then transpose (dual action)
                pre = np.zeros((len(src_basis), len(tgt_basis)), dtype=np.int64)
                for col, q in enumerate(tgt_basis):
                    extended = Path(a.source, i, (idx,) + q.arrows)
                    if len(extended) <= self.max_path_length:
                        pre[:, col] = self.path_coords(extended)
                maps.append(FpMatrix(self.p, pre.T))
            self._injectives[i] = repcat.Representation(self, dims, maps)
        return self._injectives[i]

    def projective(self, i: int):
        i = self.check_vertex(i)
        if i not in self._projectives:
            from . import repcat

            dims = [len(self.basis.get((i, j), [])) for j in range(self.vertex_count)]
            maps = []
            for idx, a in enumerate(self.quiver.arrows):
                src_basis = self.basis.get((i, a.source), [])
                tgt_basis = self.basis.get((i, a.target), [])
                mat = np.zeros((len(tgt_basis), len(src_basis)), dtype=np.int64)
                for col, q in enumerate(src_basis):
                    extended = Path(i, a.target, q.arrows + (idx,))
                    if len(extended) <= self.max_path_length:
                        mat[:, col] = self.path_coords(extended)
                maps.append(FpMatrix(self.p, mat))
            self._projectives[i] = repcat.Representation(self, dims, maps)
        return self._projectives[i]

    def socle_coordinate(self, i: int) -> int:
        """Index of the trivial path's dual vector inside injective(i) at vertex i."""
        return self.basis_index[(i, i)][Path(i, i, ())]


def _enumerate_paths(quiver: Quiver, max_len: int):
    paths = {}

    def push(path: Path):
        paths.setdefault((path.source, path.target), []).append(path)

    frontier = [Path(v, v, ()) for v in range(quiver.vertex_count)]
    for path in frontier:
        push(path)
    total = quiver.vertex_count
    for _ in range(max_len):
        nxt = []
        for path in frontier:
            for idx in quiver.arrows_from[path.target]:
                new = Path(path.source, quiver.arrows[idx].target, path.arrows + (idx,))
                nxt.append(new)
                push(new)
                total += 1
                if total > MAX_ENUMERATED_PATHS:
                    raise NotAdmissible(
                        "path count exceeds budget; ideal not visibly admissible "
                        f"within max_path_length={max_len}"
                    )
        frontier = nxt
    for key in paths:
        paths[key].sort(key=lambda q: q.sort_key)
    return paths


def build_algebra(
    quiver: Quiver,
    relations: RelationSet,
    p: int,
    max_path_length: int,
) -> BoundQuiverAlgebra:
    """Construct the bound quiver algebra kQ / (relations).

    Enumerates all paths up to max_path_length, saturates the relation
    span under left and right multiplication by arrows (products longer
    than the bound vanish), and takes the per-pair quotient by RREF.
    Fails with NotAdmissible when some path of length max_path_length
    survives in the quotient, i.e. nilpotency is not visible within the
    bound.
    """
    validate_prime(p)
    if max_path_length < 2:
        raise ValueError("max_path_length must be >= 2")
    paths = _enumerate_paths(quiver, max_path_length)
    path_index = {key: {q: k for k, q in enumerate(plist)} for key, plist in paths.items()}
    blocks = {key: _Block(p, len(plist)) for key, plist in paths.items()}

    # validate generators and seed the spans
    worklist = []
    for g_idx, gen in enumerate(relations.generators):
        endpoints = None
        vec_by_key = None
        for c, arrow_seq in gen:
            if c % p == 0:
                continue
            if len(arrow_seq) < 2:
                raise NotAdmissible(
                    f"relation {g_idx}: path of length {len(arrow_seq)} < 2"
                )
            if len(arrow_seq) > max_path_length:
                raise NotAdmissible(
                    f"relation {g_idx}: path longer than max_path_length={max_path_length}"
                )
            path = make_path(quiver, quiver.arrows[arrow_seq[0]].source, arrow_seq)
            key = (path.source, path.target)
            if endpoints is None:
                endpoints = key
                vec_by_key = np.zeros(len(paths[key]), dtype=np.int64)
            elif key != endpoints:
                raise NotAdmissible(
                    f"relation {g_idx}: terms with different endpoints {endpoints} vs {key}"
                )
            vec_by_key[path_index[key][path]] = (vec_by_key[path_index[key][path]] + c) % p
        if endpoints is None:
            continue
        stored = blocks[endpoints].insert(vec_by_key)
        if stored is not None:
            worklist.append((endpoints, stored))

    # saturate under arrow multiplication on both sides
    while worklist:
        (i, j), vec = worklist.pop()
        support = np.nonzero(vec)[0]
        # left multiplication: arrow ending at i prepends
        for idx in quiver.arrows_into[i]:
            a = quiver.arrows[idx]
            key = (a.source, j)
            new = np.zeros(len(paths.get(key, [])), dtype=np.int64)
            touched = False
            for k in support:
                q = paths[(i, j)][k]
                if len(q) + 1 <= max_path_length:
                    longer = Path(a.source, j, (idx,) + q.arrows)
                    new[path_index[key][longer]] = (
                        new[path_index[key][longer]] + vec[k]
                    ) % p
                    touched = True
            if touched:
                stored = blocks[key].insert(new)
                if stored is not None:
                    worklist.append((key, stored))
        # right multiplication: arrow starting at j appends
        for idx in quiver.arrows_from[j]:
            a = quiver.arrows[idx]
            key = (i, a.target)
            new = np.zeros(len(paths.get(key, [])), dtype=np.int64)
            touched = False
            for k in support:
                q = paths[(i, j)][k]
                if len(q) + 1 <= max_path_length:
                    longer = Path(i, a.target, q.arrows + (idx,))
                    new[path_index[key][longer]] = (
                        new[path_index[key][longer]] + vec[k]
                    ) % p
                    touched = True
            if touched:
                stored = blocks[key].insert(new)
                if stored is not None:
                    worklist.append((key, stored))

    alg = BoundQuiverAlgebra(
        quiver, p, relations, max_path_length, paths, blocks, nilpotency_degree=0
    )

    # admissibility: all paths of the maximal length must vanish in the quotient
    def length_vanishes(n: int) -> bool:
        for key, plist in paths.items():
            for q in plist:
                if len(q) == n and alg.path_coords(q).any():
                    return False
        return True

    if not length_vanishes(max_path_length):
        raise NotAdmissible(
            f"some path of length {max_path_length} is nonzero in the quotient; "
            "raise max_path_length or add relations"
        )
    nilpotency = max_path_length
    for n in range(1, max_path_length + 1):
        if length_vanishes(n):
            nilpotency = n
            break
    alg.nilpotency_degree = nilpotency

    _spot_check_associativity(alg)
    return alg


def _spot_check_associativity(alg: BoundQuiverAlgebra, budget: int = 300) -> None:
    """Sanity check (x y) z == x (y z) on basis triples up to a budget."""
    checked = 0
    vc = alg.vertex_count
    for i in range(vc):
        for j in range(vc):
            for k in range(vc):
                for l in range(vc):
                    for x in alg.basis.get((i, j), []):
                        for y in alg.basis.get((j, k), []):
                            for z in alg.basis.get((k, l), []):
                                if checked >= budget:
                                    return
                                left = _mul_coords_path(alg, alg.multiply_basis(x, y), (i, k), z)
                                right = _mul_path_coords(alg, x, alg.multiply_basis(y, z), (j, l))
                                if not np.array_equal(left, right):
                                    raise AssertionError(
                                        "associativity spot check failed "
                                        f"on ({x}, {y}, {z})"
                                    )
                                checked += 1


def _mul_coords_path(alg, coords, key, z: Path):
    i, k = key
    out = np.zeros(len(alg.basis.get((i, z.target), [])), dtype=np.int64)
    for idx, c in enumerate(coords):
        if c:
            out = (out + c * alg.multiply_basis(alg.basis[(i, k)][idx], z)) % alg.p
    return out


def _mul_path_coords(alg, x: Path, coords, key):
    j, l = key
    out = np.zeros(len(alg.basis.get((x.source, l), [])), dtype=np.int64)
    for idx, c in enumerate(coords):
        if c:
            out = (out + c * alg.multiply_basis(x, alg.basis[(j, l)][idx])) % alg.p
    return out


# --- canonical module constructors (operation-style surface) ---

def simple_module(alg: BoundQuiverAlgebra, i: int):
    """Simple module at vertex i: dimension vector e_i, zero arrow maps."""
    return alg.simple(i)


def indecomposable_injective(alg: BoundQuiverAlgebra, i: int):
    """Injective envelope of the simple at i; basis: paths into i."""
    return alg.injective(i)


def indecomposable_projective(alg: BoundQuiverAlgebra, i: int):
    """Projective cover of the simple at i; basis: paths out of i."""
    return alg.projective(i)


def socle_inclusion(m):
    """Inclusion of the socle: joint kernel of all outgoing arrow maps.

    The socle is semisimple (all arrows act as zero on it) and essential
    in m, which makes it the seed for injective envelopes.
    """
    from . import repcat
    from .exactlin import kernel_basis, vstack

    alg = m.algebra
    vertex_maps = []
    soc_dims = []
    for i in range(alg.vertex_count):
        outgoing = [m.arrow_maps[idx] for idx in alg.quiver.arrows_from[i]]
        if outgoing:
            stacked = vstack(outgoing)
        else:
            stacked = FpMatrix.zeros(alg.p, 0, m.dims[i])
        k = kernel_basis(stacked)
        vertex_maps.append(k)
        soc_dims.append(k.cols)
    soc = repcat.Representation(
        alg,
        soc_dims,
        [
            FpMatrix.zeros(alg.p, soc_dims[a.target], soc_dims[a.source])
            for a in alg.quiver.arrows
        ],
    )
    return repcat.RepMorphism(soc, m, vertex_maps)
