"""Finite graded posets, order complexes, incidence signs and f/h-vectors.

Elements are arbitrary hashable ids. Internally every poset indexes its
elements ``0..n-1`` in input order and keeps the order relation as Python
integer bitmasks, so that ``x <= y`` and interval queries are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Hashable, Iterable, Sequence

from .errors import CycleDetected, DiamondViolation, Infeasible, InputError, NotGraded

__all__ = [
    "FinitePoset",
    "OrderComplex",
    "IncidenceAssignment",
    "FHVector",
    "ManifoldReport",
    "from_cover_relations",
    "order_complex",
    "opposite",
    "skeleton",
    "coskeleton",
    "incidence_assignment",
    "f_h_vectors",
    "local_cohomology_stalk",
    "is_homology_manifold",
    "is_simplicial_poset",
    "reduced_euler_characteristic",
    "count_chains",
    "chains_by_dimension",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """A finite graded poset given by its cover relation.

    Use :func:`from_cover_relations` to build one; the constructor validates
    acyclicity and gradedness and recomputes ranks from scratch.
    """

    __slots__ = (
        "elements", "covers", "rank", "index", "_up", "_down", "_below", "_above",
        "_rank_idx", "_hash",
    )

    def __init__(self, elements: Sequence[Hashable], covers: Iterable[tuple[Hashable, Hashable]]):
        elements = tuple(elements)
        index = {}
        for pos, e in enumerate(elements):
            if e in index:
                raise InputError(f"duplicate element {e!r}")
            index[e] = pos
        n = len(elements)
        up: list[list[int]] = [[] for _ in range(n)]
        down: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        cover_list = []
        for a, b in covers:
            if a not in index or b not in index:
                raise InputError(f"cover ({a!r}, {b!r}) references an undeclared element")
            ia, ib = index[a], index[b]
            if ia == ib:
                raise CycleDetected(f"self-cover on {a!r}")
            if (ia, ib) in seen:
                raise InputError(f"duplicate cover ({a!r}, {b!r})")
            seen.add((ia, ib))
            up[ia].append(ib)
            down[ib].append(ia)
            cover_list.append((a, b))

        # Kahn's algorithm; ranks are longest chains from minimal elements.
        indeg = [len(d) for d in down]
        order = [i for i in range(n) if indeg[i] == 0]
        rank_idx = [0] * n
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for y in up[x]:
                rank_idx[y] = max(rank_idx[y], rank_idx[x] + 1)
                indeg[y] -= 1
                if indeg[y] == 0:
                    order.append(y)
        if len(order) != n:
            raise CycleDetected("cover relation contains a cycle")
        for ia, ib in seen:
            if rank_idx[ib] != rank_idx[ia] + 1:
                raise NotGraded(
                    f"cover ({elements[ia]!r}, {elements[ib]!r}) skips from rank "
                    f"{rank_idx[ia]} to {rank_idx[ib]}"
                )

        below = [0] * n
        for x in order:
            m = 1 << x
            for y in down[x]:
                m |= below[y]
            below[x] = m
        above = [0] * n
        for x in reversed(order):
            m = 1 << x
            for y in up[x]:
                m |= above[y]
            above[x] = m

        for lst in up:
            lst.sort()
        for lst in down:
            lst.sort()
        self.elements = elements
        self.covers = tuple(cover_list)
        self.index = index
        self.rank = {elements[i]: rank_idx[i] for i in range(n)}
        self._rank_idx = tuple(rank_idx)
        self._up = tuple(tuple(u) for u in up)
        self._down = tuple(tuple(d) for d in down)
        self._below = tuple(below)
        self._above = tuple(above)
        self._hash = None

    # -- basic queries -------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"FinitePoset({len(self)} elements, dim {self.dim})"

    def _key(self):
        return (self.elements, frozenset(self.covers))

    def __eq__(self, other) -> bool:
        return isinstance(other, FinitePoset) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    @property
    def dim(self) -> int:
        return max(self._rank_idx, default=-1)

    def rank_of_index(self, i: int) -> int:
        return self._rank_idx[i]

    @property
    def ranks(self) -> tuple[int, ...]:
        return self._rank_idx

    def leq(self, a, b) -> bool:
        return bool(self._below[self.index[b]] >> self.index[a] & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self._below[j] >> i & 1)

    def upper_covers_idx(self, i: int) -> tuple[int, ...]:
        return self._up[i]

    def lower_covers_idx(self, i: int) -> tuple[int, ...]:
        return self._down[i]

    def below_mask(self, i: int) -> int:
        """Bitmask of indices ``j`` with ``j <= i``."""
        return self._below[i]

    def above_mask(self, i: int) -> int:
        """Bitmask of indices ``j`` with ``j >= i``."""
        return self._above[i]

    def cover_index_pairs(self) -> list[tuple[int, int]]:
        return [(self.index[a], self.index[b]) for a, b in self.covers]

    def indices_of_rank(self, r: int) -> list[int]:
        return [i for i, ri in enumerate(self._rank_idx) if ri == r]

    def minimal_indices(self) -> list[int]:
        return [i for i in range(len(self)) if not self._down[i]]

    def maximal_indices(self) -> list[int]:
        return [i for i in range(len(self)) if not self._up[i]]

    def least_index(self) -> int | None:
        mins = self.minimal_indices()
        if len(mins) == 1 and self._above[mins[0]] == (1 << len(self)) - 1:
            return mins[0]
        return None

    def atoms_below_idx(self, i: int) -> list[int]:
        """Rank-one elements below ``i``."""
        return [j for j in _bits(self._below[i]) if self._rank_idx[j] == 1]

    def induced(self, keep: Iterable[Hashable]) -> "FinitePoset":
        """Induced subposet on ``keep`` (covers recomputed from the order)."""
        keep_set = set(keep)
        kept = [i for i, e in enumerate(self.elements) if e in keep_set]
        mask = 0
        for i in kept:
            mask |= 1 << i
        covers = []
        for j in kept:
            strict = self._below[j] & mask & ~(1 << j)
            for i in _bits(strict):
                # i < j is a cover in the subposet iff nothing kept lies strictly between
                between = strict & self._above[i] & ~(1 << i)
                if not between:
                    covers.append((self.elements[i], self.elements[j]))
        return FinitePoset([self.elements[i] for i in kept], covers)


def from_cover_relations(elements: Sequence[Hashable], covers: Iterable[Sequence[Hashable]]) -> FinitePoset:
    """Build and validate a graded poset from its elements and cover pairs."""
    return FinitePoset(elements, [(a, b) for a, b in covers])


def opposite(P: FinitePoset) -> FinitePoset:
    return FinitePoset(P.elements, [(b, a) for a, b in P.covers])


def skeleton(P: FinitePoset, q: int) -> FinitePoset:
    if q < 0:
        raise ValueError("q must be non-negative")
    return P.induced(e for e in P.elements if P.rank[e] <= q)


def coskeleton(P: FinitePoset, q: int) -> FinitePoset:
    return P.induced(e for e in P.elements if P.rank[e] >= q)


# -- chains ---------------------------------------------------------------

def chains_by_dimension(P: FinitePoset, within: int | None = None) -> list[list[tuple[int, ...]]]:
    """All strictly decreasing chains ``c_0 > ... > c_s`` as index tuples.

    The result is a list indexed by ``s``; each list is sorted. ``within``
    restricts to elements of a bitmask.
    """
    n = len(P)
    allowed = (1 << n) - 1 if within is None else within
    out: list[list[tuple[int, ...]]] = []

    def extend(chain: tuple[int, ...]):
        s = len(chain) - 1
        while len(out) <= s:
            out.append([])
        out[s].append(chain)
        rest = P.below_mask(chain[-1]) & allowed & ~(1 << chain[-1])
        for y in _bits(rest):
            extend(chain + (y,))

    for x in _bits(allowed):
        extend((x,))
    for lst in out:
        lst.sort()
    return out


def count_chains(P: FinitePoset, within: int | None = None) -> int:
    """Number of non-empty chains, by dynamic programming."""
    n = len(P)
    allowed = (1 << n) - 1 if within is None else within
    # process in increasing rank so every strictly lower element is done first
    order = sorted(_bits(allowed), key=P.rank_of_index)
    ending = {}
    total = 0
    for x in order:
        lower = P.below_mask(x) & allowed & ~(1 << x)
        v = 1 + sum(ending[y] for y in _bits(lower))
        ending[x] = v
        total += v
    return total


def reduced_euler_characteristic(P: FinitePoset, within: int | None = None) -> int:
    """Reduced Euler characteristic of the order complex; -1 when empty."""
    n = len(P)
    allowed = (1 << n) - 1 if within is None else within
    order = sorted(_bits(allowed), key=P.rank_of_index)
    signed = {}
    total = -1
    for x in order:
        lower = P.below_mask(x) & allowed & ~(1 << x)
        v = 1 - sum(signed[y] for y in _bits(lower))
        signed[x] = v
        total += v
    return total


@dataclass(frozen=True)
class OrderComplex:
    """Chains of a poset, grouped by simplex dimension.

    A simplex is a tuple of element ids ``(c_0, ..., c_s)`` with
    ``c_0 > ... > c_s``. Removing the ``i``-th vertex has sign ``(-1)**(s-i)``.
    """

    poset: FinitePoset
    simplices: tuple[tuple[tuple, ...], ...]

    @property
    def vertices(self) -> tuple:
        return tuple(s[0] for s in self.simplices[0]) if self.simplices else ()

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def f_vector(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def boundary_sign(self, s: int, i: int) -> int:
        return -1 if (s - i) % 2 else 1

    def count(self) -> int:
        return sum(len(level) for level in self.simplices)


def order_complex(P: FinitePoset) -> OrderComplex:
    levels = chains_by_dimension(P)
    el = P.elements
    return OrderComplex(P, tuple(tuple(tuple(el[i] for i in ch) for ch in lvl) for lvl in levels))


# -- incidence signs --------------------------------------------------------

@dataclass(frozen=True)
class IncidenceAssignment:
    """Signs ``[upper : lower]`` on cover pairs, keyed by ``(lower, upper)``."""

    signs: dict

    def __getitem__(self, pair) -> int:
        return self.signs[pair]


def _diamonds(P: FinitePoset) -> list[tuple[int, int, list[int]]]:
    out = []
    for d in range(len(P)):
        rd = P.rank_of_index(d)
        if rd < 2:
            continue
        cands = P.below_mask(d)
        for c in _bits(cands):
            if P.rank_of_index(c) != rd - 2:
                continue
            mids = [x for x in P.lower_covers_idx(d) if P.leq_idx(c, x)]
            out.append((c, d, mids))
    return out


def incidence_assignment(P: FinitePoset) -> IncidenceAssignment:
    """Solve the diamond parity system over GF(2).

    Every interval of length two must have exactly two intermediate elements,
    and the product of its four cover signs must be -1. When ``P`` has no
    least element, minimal elements are additionally treated as covering a
    virtual empty cell, so that each rank-one element with exactly two
    lower covers gets boundary signs of opposite parity.
    """
    pairs = P.cover_index_pairs()
    var = {p: k for k, p in enumerate(pairs)}
    rows: list[tuple[int, int]] = []
    for c, d, mids in _diamonds(P):
        if len(mids) != 2:
            raise DiamondViolation(P.elements[c], P.elements[d], len(mids))
        a, b = mids
        mask = (1 << var[(c, a)]) ^ (1 << var[(a, d)]) ^ (1 << var[(c, b)]) ^ (1 << var[(b, d)])
        rows.append((mask, 1))
    if P.least_index() is None and len(P) > 0:
        for d in range(len(P)):
            if P.rank_of_index(d) == 1 and len(P.lower_covers_idx(d)) == 2:
                a, b = P.lower_covers_idx(d)
                rows.append(((1 << var[(a, d)]) ^ (1 << var[(b, d)]), 1))

    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        while mask:
            low = (mask & -mask).bit_length() - 1
            if low in pivots:
                pm, pr = pivots[low]
                mask ^= pm
                rhs ^= pr
            else:
                pivots[low] = (mask, rhs)
                break
        else:
            if rhs:
                raise Infeasible("diamond sign system has no solution over GF(2)")
    # back substitution, free variables set to zero
    value = [0] * len(pairs)
    for low in sorted(pivots, reverse=True):
        mask, rhs = pivots[low]
        acc = rhs
        for b in _bits(mask & ~(1 << low)):
            acc ^= value[b]
        value[low] = acc
    el = P.elements
    signs = {(el[a], el[b]): (-1 if value[k] else 1) for (a, b), k in var.items()}
    return IncidenceAssignment(signs)


# -- f and h vectors --------------------------------------------------------

@dataclass(frozen=True)
class FHVector:
    """``f[j]`` counts elements of rank ``j`` (the face number f_{j-1});
    ``h[i]`` is h_i for ``i = 0..d``."""

    f: tuple[int, ...]
    h: tuple[Fraction, ...]

    def h_int(self) -> tuple[int, ...]:
        if any(x.denominator != 1 for x in self.h):
            raise ValueError("h-vector has non-integer entries")
        return tuple(int(x) for x in self.h)


def f_h_vectors(P: FinitePoset) -> FHVector:
    d = P.dim
    f = tuple(len(P.indices_of_rank(j)) for j in range(d + 1))
    h = [Fraction(0)] * (d + 1)
    for i in range(d + 1):
        total = sum((-1) ** ((d - 1 - j) % 2) * f[j] * comb(d - j, i) for j in range(d + 1))
        h[d - i] = Fraction((-1) ** ((i + 1) % 2) * total)
    return FHVector(f, tuple(h))


# -- local cohomology and manifold checks -----------------------------------

def local_cohomology_stalk(P: FinitePoset, c) -> dict[int, int]:
    """Dimensions of U^q(c) = H^{q - rk c}(ord P_{>=c}, ord P_{>c}).

    The relative cochains are the chains whose least element is ``c``; a
    chain with ``s + 1`` elements sits in relative degree ``s``.
    """
    from .homalg import RationalMatrix, RationalChainComplex, homology_dims

    ci = P.index[c]
    upper = P.above_mask(ci) & ~(1 << ci)
    levels = chains_by_dimension(P, within=upper)
    # relative s-cochains <-> chains of P_{>c} with s elements (c appended)
    basis = [[()]] + [lvl for lvl in levels]
    pos = [{ch: k for k, ch in enumerate(lvl)} for lvl in basis]
    mats = []
    for s in range(len(basis) - 1):
        # coboundary from relative degree s to s+1: faces of a chain
        # (x_0 > ... > x_s > c) obtained by deleting one x_i
        entries = {}
        for col_i, ch in enumerate(basis[s + 1]):
            length = len(ch)
            for i in range(length):
                face = ch[:i] + ch[i + 1:]
                sign = -1 if (length - i) % 2 else 1
                entries[(col_i, pos[s][face])] = sign
        mats.append(RationalMatrix(len(basis[s + 1]), len(basis[s]), entries))
    K = RationalChainComplex([len(b) for b in basis], mats, direction="cochain")
    dims = homology_dims(K)
    r = P.rank[c]
    return {s + r: h for s, h in enumerate(dims) if h}


@dataclass(frozen=True)
class ManifoldReport:
    is_manifold: bool
    dim: int
    failures: tuple[tuple, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.is_manifold


def is_homology_manifold(P: FinitePoset) -> ManifoldReport:
    d = P.dim
    failures = []
    for c in P.elements:
        stalk = local_cohomology_stalk(P, c)
        for q, dim_q in sorted(stalk.items()):
            if (q == d and dim_q != 1) or (q != d and dim_q != 0):
                failures.append((c, q, dim_q))
        if stalk.get(d, 0) == 0:
            failures.append((c, d, 0))
    return ManifoldReport(not failures, d, tuple(failures))


def is_simplicial_poset(P: FinitePoset) -> bool:
    """Least element, Boolean lower ideals, and distinct atom sets."""
    if len(P) == 0 or P.least_index() is None:
        return False
    seen = set()
    for i in range(len(P)):
        atoms = P.atoms_below_idx(i)
        if bin(P.below_mask(i)).count("1") != 2 ** len(atoms):
            return False
        if P.rank_of_index(i) != len(atoms):
            return False
        key = frozenset(atoms)
        if key in seen:
            return False
        seen.add(key)
    return True
