"""Toric diagrams as lattices, fans, and the cosheaves H^*(D) and H^*(BS).

A torus ``(S^1)^d`` is represented by its cocharacter lattice ``Z^d``; a
homomorphism of tori by an integer matrix. ``H^1`` of a torus is the dual
lattice tensored with Q, so a homomorphism ``A`` induces ``A^T`` on ``H^1``
and exterior powers of ``A^T`` on ``H^*``. Likewise ``H^2(BS)`` is the dual of
the cocharacter lattice of ``S`` and ``H^*(BS)`` is its symmetric algebra.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb, gcd
from typing import Mapping, Sequence

from . import lattice as L
from .errors import InputError, NonSalient, NotEpimorphism, NotFunctorial, RaysNotPrimitive
from .homalg import RationalMatrix
from .poset import FinitePoset, is_simplicial_poset, _bits
from .sheaf import Cosheaf, GradedCosheaf

__all__ = [
    "LatticeHom",
    "TorusDiagram",
    "TDiagram",
    "StabilizerDiagram",
    "Fan",
    "stabilizer_diagram",
    "is_reduced",
    "is_strongly_reduced",
    "cohomology_cosheaf",
    "classifying_cosheaf",
    "ClassifyingCosheaf",
    "fan_to_diagram",
    "is_t_characteristic",
    "projective_space_fan",
    "monomials",
    "exterior_power",
    "diagram_from_stabilizers",
]


@dataclass(frozen=True)
class LatticeHom:
    source_rank: int
    target_rank: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.matrix) != self.target_rank or any(len(r) != self.source_rank for r in self.matrix):
            raise InputError(
                f"lattice map matrix must be {self.target_rank}x{self.source_rank}"
            )

    @classmethod
    def of(cls, matrix: Sequence[Sequence[int]], source_rank: int) -> "LatticeHom":
        rows = tuple(tuple(int(x) for x in r) for r in matrix)
        return cls(source_rank, len(rows), rows)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]

    def compose(self, first: "LatticeHom") -> "LatticeHom":
        """``self o first``."""
        m = L.matmul(self.rows(), first.rows()) if self.target_rank else []
        if self.target_rank and first.source_rank == 0:
            m = [[] for _ in range(self.target_rank)]
        return LatticeHom.of(m, first.source_rank)


class TorusDiagram:
    """Tori ``Z^{d(c)}`` over a poset with homomorphisms along covers.

    ``arrow[(lo, up)]`` maps ``Z^{d(lo)} -> Z^{d(up)}`` (a covariant functor on C).
    """

    def __init__(self, base: FinitePoset, rank: Mapping, arrow: Mapping):
        self.base = base
        self.rank = {e: int(rank[e]) for e in base.elements}
        self.arrow: dict[tuple, LatticeHom] = {}
        for lo, up in base.covers:
            a = arrow[(lo, up)]
            if not isinstance(a, LatticeHom):
                a = LatticeHom.of(a, self.rank[lo])
            if a.source_rank != self.rank[lo] or a.target_rank != self.rank[up]:
                raise InputError(f"arrow ({lo!r}, {up!r}) does not match lattice ranks")
            self.arrow[(lo, up)] = a
        self._check_functorial()

    def _check_functorial(self):
        P = self.base
        el = P.elements
        for d in range(len(P)):
            for c in _bits(P.below_mask(d)):
                if P.rank_of_index(c) != P.rank_of_index(d) - 2:
                    continue
                mids = [x for x in P.lower_covers_idx(d) if P.leq_idx(c, x)]
                comps = [
                    self.arrow[(el[x], el[d])].compose(self.arrow[(el[c], el[x])]).matrix for x in mids
                ]
                if any(m != comps[0] for m in comps[1:]):
                    raise NotFunctorial(f"arrows do not commute on ({el[c]!r}, {el[d]!r})")


class TDiagram:
    """A torus diagram with a compatible epimorphism from ``Z^k`` to every torus."""

    def __init__(self, diagram: TorusDiagram, k: int, aug: Mapping):
        self.diagram = diagram
        self.k = int(k)
        self.aug: dict = {}
        for e in diagram.base.elements:
            a = aug[e]
            if not isinstance(a, LatticeHom):
                a = LatticeHom.of(a, self.k)
            if a.source_rank != self.k or a.target_rank != diagram.rank[e]:
                raise InputError(f"augmentation at {e!r} has the wrong shape")
            ok_q, ok_z = L.image_is_everything(a.rows(), self.k) if a.target_rank else (True, True)
            if not ok_q or not ok_z:
                raise NotEpimorphism(f"augmentation at {e!r} is not an epimorphism of tori")
            self.aug[e] = a
        for lo, up in diagram.base.covers:
            lhs = diagram.arrow[(lo, up)].compose(self.aug[lo])
            if lhs.matrix != self.aug[up].matrix:
                raise NotFunctorial(f"augmentation is not natural along ({lo!r}, {up!r})")

    @property
    def base(self) -> FinitePoset:
        return self.diagram.base

    def restrict(self, sub: FinitePoset) -> "TDiagram":
        """Pull back along the inclusion of an induced subposet.

        Covers of ``sub`` may be longer chains in the original poset, so the
        arrows are composites.
        """
        P = self.base
        arrows = {}
        for lo, up in sub.covers:
            arrows[(lo, up)] = self.arrow_between(lo, up)
        D = TorusDiagram(sub, {e: self.diagram.rank[e] for e in sub.elements}, arrows)
        return TDiagram(D, self.k, {e: self.aug[e] for e in sub.elements})

    def arrow_between(self, lo, up) -> LatticeHom:
        P = self.base
        if lo == up:
            return LatticeHom.of(L.identity(self.diagram.rank[lo]), self.diagram.rank[lo])
        i, j = P.index[lo], P.index[up]
        for x in P.lower_covers_idx(j):
            if P.leq_idx(i, x):
                xe = P.elements[x]
                return self.diagram.arrow[(xe, up)].compose(self.arrow_between(lo, xe))
        raise ValueError("elements are not comparable")

    @cached_property
    def stabilizers(self) -> "StabilizerDiagram":
        return stabilizer_diagram(self)


@dataclass(frozen=True)
class StabilizerDiagram:
    """Kernel lattices ``S(c) = ker(aug(c))`` as ``k x r`` basis matrices (columns).

    ``basis`` is the adapted basis used for all stalk computations: when
    ``S(c)`` is the direct sum of the stabilizers of its atoms, the atom
    generators (in poset order); otherwise the canonical Hermite basis.
    """

    base: FinitePoset
    k: int
    stab: dict
    basis: dict
    adapted: dict

    def rank(self, c) -> int:
        b = self.stab[c]
        return len(b[0]) if b and b[0] else 0

    def inclusion(self, lo, up) -> list[list[int]]:
        """Integer matrix ``N`` with ``basis[up] @ N = basis[lo]``."""
        Bu = self.basis[up]
        Bl = self.basis[lo]
        rl = len(Bl[0]) if Bl and Bl[0] else 0
        ru = len(Bu[0]) if Bu and Bu[0] else 0
        cols = []
        for j in range(rl):
            x = L.solve_integer(Bu, [Bl[i][j] for i in range(self.k)])
            if x is None:
                raise InputError(f"stabilizer of {lo!r} is not contained in that of {up!r}")
            cols.append(x)
        return [[cols[j][i] for j in range(rl)] for i in range(ru)]


def stabilizer_diagram(TD: TDiagram) -> StabilizerDiagram:
    P = TD.base
    k = TD.k
    stab = {}
    for e in P.elements:
        a = TD.aug[e]
        if a.target_rank == 0:
            stab[e] = L.identity(k) if k else []
            stab[e] = L.canonical_basis(stab[e], k) if k else []
        else:
            stab[e] = L.integer_kernel(a.rows(), k)
    for lo, up in P.covers:
        Bl = stab[lo]
        rl = len(Bl[0]) if Bl and Bl[0] else 0
        for j in range(rl):
            if L.solve_integer(stab[up], [Bl[i][j] for i in range(k)]) is None:
                raise InputError(f"stabilizers are not monotone along ({lo!r}, {up!r})")
    basis, adapted = _adapted_bases(P, k, stab)
    return StabilizerDiagram(P, k, stab, basis, adapted)


def _rank_of(B) -> int:
    return len(B[0]) if B and B[0] else 0


def _atom_generators(P: FinitePoset, k: int, stab: Mapping) -> dict:
    gens = {}
    for i in P.indices_of_rank(1):
        e = P.elements[i]
        if _rank_of(stab[e]) == 1:
            col = [stab[e][r][0] for r in range(k)]
            # prefer the sign with first nonzero coordinate positive
            lead = next((x for x in col if x), 1)
            gens[e] = col if lead > 0 else [-x for x in col]
    return gens


def _adapted_bases(P: FinitePoset, k: int, stab: Mapping) -> tuple[dict, dict]:
    gens = _atom_generators(P, k, stab)
    basis = {}
    adapted = {}
    for idx, e in enumerate(P.elements):
        r = _rank_of(stab[e])
        atoms = [P.elements[a] for a in P.atoms_below_idx(idx) if P.elements[a] in gens]
        ok = False
        if len(atoms) == r and r > 0 and len(P.atoms_below_idx(idx)) == r:
            B = [[gens[a][i] for a in atoms] for i in range(k)]
            ok = L.maximal_minor_gcd(B) == 1 and all(
                L.solve_integer(stab[e], gens[a]) is not None for a in atoms
            )
        if ok:
            basis[e] = B
            adapted[e] = tuple(atoms)
        else:
            basis[e] = [list(row) for row in stab[e]] if r else [[] for _ in range(k)]
            adapted[e] = None if r else ()
    return basis, adapted


def is_reduced(TD: TDiagram) -> bool:
    SD = TD.stabilizers
    P = TD.base
    for i in range(len(P)):
        for j in _bits(P.above_mask(i) & ~(1 << i)):
            if _rank_of(SD.stab[P.elements[i]]) == _rank_of(SD.stab[P.elements[j]]):
                # saturated lattices of equal rank with one inside the other coincide
                return False
    return True


def is_strongly_reduced(TD: TDiagram, shift: int = 0) -> bool:
    """rank S(c) = rk c + shift for every element (shift 0 is the usual notion)."""
    SD = TD.stabilizers
    return all(SD.rank(e) == TD.base.rank[e] + shift for e in TD.base.elements)


def orbit_shift(TD: TDiagram) -> int | None:
    """The constant ``rank S(c) - rk c`` if there is one, else None."""
    SD = TD.stabilizers
    vals = {SD.rank(e) - TD.base.rank[e] for e in TD.base.elements}
    return vals.pop() if len(vals) == 1 else None


# -- exterior and symmetric powers -----------------------------------------

def exterior_power(A: Sequence[Sequence[int]], nrows: int, ncols: int, j: int) -> RationalMatrix:
    """Matrix of Lambda^j(A) in the bases of sorted j-subsets (minors)."""
    rsub = list(combinations(range(nrows), j))
    csub = list(combinations(range(ncols), j))
    data = {}
    for a, I in enumerate(rsub):
        for b, J in enumerate(csub):
            v = L.minor(A, I, J) if j else 1
            if v:
                data.setdefault(a, {})[b] = v
    return RationalMatrix.from_rows(len(rsub), len(csub), data)


def monomials(n: int, t: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree-t monomials in n variables, in a fixed order."""
    if n == 0:
        return [()] if t == 0 else []
    out = []

    def rec(prefix: list[int], left: int, remaining: int):
        if remaining == 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left, -1, -1):
            rec(prefix + [a], left - a, remaining - 1)

    rec([], t, n)
    return out


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, a in p.items():
        for m2, b in q.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            out[m] = out.get(m, 0) + a * b
    return {m: v for m, v in out.items() if v}


def symmetric_power_map(N: Sequence[Sequence[int]], src_vars: int, tgt_vars: int, t: int,
                        src_basis: list | None = None, tgt_index: dict | None = None) -> RationalMatrix:
    """Degree-t part of the algebra map Q[y'] -> Q[y] sending y'_b to sum_a N[b][a] y_a."""
    src = monomials(src_vars, t) if src_basis is None else src_basis
    if tgt_index is None:
        tgt_index = {m: i for i, m in enumerate(monomials(tgt_vars, t))}
    linear = []
    for b in range(src_vars):
        form = {}
        for a in range(tgt_vars):
            if N[b][a]:
                e = [0] * tgt_vars
                e[a] = 1
                form[tuple(e)] = N[b][a]
        linear.append(form)
    one = {tuple([0] * tgt_vars): 1}
    data: dict[int, dict[int, object]] = {}
    for col, mono in enumerate(src):
        poly = one
        for b, e in enumerate(mono):
            for _ in range(e):
                poly = _poly_mul(poly, linear[b])
        for m, v in poly.items():
            data.setdefault(tgt_index[m], {})[col] = v
    return RationalMatrix.from_rows(len(tgt_index), len(src), data)


# -- cosheaves ----------------------------------------------------------------

def cohomology_cosheaf(D: TorusDiagram | TDiagram) -> GradedCosheaf:
    """H^*(D): exterior algebras with exterior powers of transposed arrows."""
    if isinstance(D, TDiagram):
        D = D.diagram
    P = D.base
    top = max(D.rank.values(), default=0)
    pieces = {}
    for j in range(top + 1):
        dims = {e: comb(D.rank[e], j) for e in P.elements}
        maps = {}
        for lo, up in P.covers:
            A = D.arrow[(lo, up)].rows()
            At = L.transpose(A, D.rank[lo]) if A else [[] for _ in range(D.rank[lo])]
            maps[(lo, up)] = exterior_power(At, D.rank[lo], D.rank[up], j)
        pieces[j] = Cosheaf(P, dims, maps)
    return GradedCosheaf(P, pieces)


@dataclass
class ClassifyingCosheaf:
    """H^*(BS) truncated at degree 2*t_max, with the H^*(BT) action.

    ``cosheaf.pieces[2t]`` has the monomial basis ``monomials(rank S(c), t)``
    at each element; ``forms[c][j]`` is the restriction of the generator
    ``x_j`` of H^2(BT) to H^2(BS(c)), as coefficients in the stalk variables.
    """

    cosheaf: GradedCosheaf
    forms: dict
    k: int
    t_max: int
    stab_rank: dict


def classifying_cosheaf(S: StabilizerDiagram, t_max: int) -> ClassifyingCosheaf:
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    P = S.base
    k = S.k
    r = {e: S.rank(e) for e in P.elements}
    incl = {(lo, up): S.inclusion(lo, up) for lo, up in P.covers}
    mono = {}
    pieces = {}
    for t in range(t_max + 1):
        dims = {}
        idx = {}
        for e in P.elements:
            mons = mono.setdefault((r[e], t), monomials(r[e], t))
            dims[e] = len(mons)
            idx[e] = {m: i for i, m in enumerate(mons)}
        maps = {}
        for lo, up in P.covers:
            # dual of N: y'_b (of S(up)) -> sum_a N[b][a] y_a (of S(lo))
            N = incl[(lo, up)]
            maps[(lo, up)] = symmetric_power_map(N, r[up], r[lo], t, mono[(r[up], t)], idx[lo])
        pieces[2 * t] = Cosheaf(P, dims, maps, verify=(t <= 2))
    forms = {}
    for e in P.elements:
        B = S.basis[e]
        forms[e] = [[B[j][a] for a in range(r[e])] for j in range(k)]
    return ClassifyingCosheaf(GradedCosheaf(P, pieces), forms, k, t_max, r)


# -- fans -----------------------------------------------------------------------

def _cone_label(cone: Sequence[int]) -> str:
    return "{" + ",".join(str(i) for i in cone) + "}"


@dataclass(frozen=True)
class Fan:
    ambient_rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[int, ...], ...]
    smooth: bool = field(default=False)
    complete: bool = field(default=False)

    @classmethod
    def from_data(cls, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]]) -> "Fan":
        rays_t = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays_t:
            raise InputError("a fan needs at least one ray")
        d = len(rays_t[0])
        for r in rays_t:
            if len(r) != d:
                raise InputError("rays have inconsistent dimensions")
            g = 0
            for x in r:
                g = gcd(g, x)
            if g != 1:
                raise RaysNotPrimitive(f"ray {list(r)} is not primitive")
        cone_set = []
        seen = set()
        for c in cones:
            cc = tuple(sorted(int(i) for i in c))
            if len(set(cc)) != len(cc) or any(not 0 <= i < len(rays_t) for i in cc):
                raise InputError(f"cone {list(c)} references invalid rays")
            if cc in seen:
                raise InputError(f"duplicate cone {list(c)}")
            seen.add(cc)
            cone_set.append(cc)
        if () not in seen:
            cone_set.insert(0, ())
            seen.add(())
        for cc in cone_set:
            R = [list(rays_t[i]) for i in cc]
            if cc and L.rank_q(R, d) < len(cc):
                _check_salient(R, d)
                raise InputError(f"cone {list(cc)} is not simplicial; only simplicial fans are supported")
            for sub in combinations(cc, len(cc) - 1) if cc else ():
                if sub not in seen:
                    raise InputError(f"face {list(sub)} of cone {list(cc)} is missing")
        for i in range(len(rays_t)):
            if (i,) not in seen:
                raise InputError(f"ray {i} is not a cone of the fan")
        cone_set.sort(key=lambda c: (len(c), c))
        smooth = all(
            not cc or L.maximal_minor_gcd(L.transpose([list(rays_t[i]) for i in cc])) == 1 for cc in cone_set
        )
        fan = cls(d, rays_t, tuple(cone_set), smooth, False)
        object.__setattr__(fan, "complete", _is_complete(fan))
        return fan

    @classmethod
    def from_maximal_cones(cls, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]]) -> "Fan":
        """Like ``from_data`` but closes the given cones under taking faces."""
        closed = set()
        for c in cones:
            cc = tuple(sorted(int(i) for i in c))
            for s in range(len(cc) + 1):
                closed.update(combinations(cc, s))
        return cls.from_data(rays, sorted(closed, key=lambda c: (len(c), c)))


def _check_salient(R: list[list[int]], d: int):
    """Raise NonSalient if some circuit of the rays has a same-sign relation."""
    n = len(R)
    for size in range(2, min(n, d + 1) + 1):
        for S in combinations(range(n), size):
            sub = [R[i] for i in S]
            if L.rank_q(sub, d) != size - 1:
                continue
            if any(L.rank_q([R[i] for i in T], d) < size - 1 for T in combinations(S, size - 1)):
                continue
            ker = L.integer_kernel(L.transpose(sub), size)
            coeffs = [row[0] for row in ker]
            if all(c > 0 for c in coeffs) or all(c < 0 for c in coeffs):
                raise NonSalient(f"cone on rays {list(S)} contains a line")


def _is_complete(F: Fan) -> bool:
    d = F.ambient_rank
    maximal = [c for c in F.cones if not any(set(c) < set(o) for o in F.cones)]
    if any(len(c) != d for c in maximal):
        return False
    walls: dict[tuple, list] = {}
    for c in maximal:
        for w in combinations(c, d - 1):
            walls.setdefault(w, []).append(c)
    for w, cs in walls.items():
        if len(cs) != 2:
            return False
        # the two cones lie on opposite sides of the wall's hyperplane
        W = [list(F.rays[i]) for i in w]
        normal = L.integer_kernel(W, d) if W else [[1] for _ in range(d)]
        nv = [row[0] for row in normal]
        sides = []
        for c in cs:
            extra = [i for i in c if i not in w][0]
            sides.append(sum(a * b for a, b in zip(nv, F.rays[extra])))
        if sides[0] * sides[1] >= 0:
            return False
    # a generic rational point lies in exactly one maximal cone
    from fractions import Fraction

    point = [Fraction(1, 7 + 3 * i) * (-1) ** i + Fraction(1, 101 + i * i) for i in range(d)]
    hits = 0
    for c in maximal:
        R = [[Fraction(F.rays[i][r]) for i in c] for r in range(d)]
        inv = L.inverse(R)
        lam = [sum(inv[i][r] * point[r] for r in range(d)) for i in range(d)]
        if all(x >= 0 for x in lam):
            hits += 1
    return hits == 1


def projective_space_fan(n: int) -> Fan:
    """Fan of CP^n: rays e_1..e_n and -(e_1+...+e_n), cones all proper subsets."""
    rays = [[1 if j == i else 0 for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = [list(c) for s in range(n + 1) for c in combinations(range(n + 1), s)]
    return Fan.from_data(rays, cones)


def fan_to_diagram(F: Fan) -> TDiagram:
    if not F.smooth:
        warnings.warn("fan is not smooth; rank checks are over Q", stacklevel=2)
    d = F.ambient_rank
    labels = {c: _cone_label(c) for c in F.cones}
    covers = []
    cone_set = set(F.cones)
    for c in F.cones:
        for sub in combinations(c, len(c) - 1) if c else ():
            covers.append((labels[sub], labels[c]))
    P = FinitePoset([labels[c] for c in F.cones], covers)
    proj = {}
    sect = {}
    rank = {}
    for c in F.cones:
        B = [[F.rays[i][r] for i in c] for r in range(d)] if c else [[] for _ in range(d)]
        sat = B if not c or L.is_saturated(B, d) else L.canonical_basis(_saturate(B, d), d)
        W = L.complete_to_basis(sat, d)
        Winv = L.unimodular_inverse(W)
        r = len(c)
        proj[c] = [row for row in Winv[r:]]
        sect[c] = [row[r:] for row in W]
        rank[labels[c]] = d - r
    arrows = {}
    for c in F.cones:
        for sub in combinations(c, len(c) - 1) if c else ():
            # induced map Z^d/S(sub) -> Z^d/S(c): proj[c] composed with a section of proj[sub]
            A = L.matmul(proj[c], sect[sub]) if proj[c] else []
            arrows[(labels[sub], labels[c])] = LatticeHom.of(A, d - len(sub))
    D = TorusDiagram(P, rank, arrows)
    aug = {labels[c]: LatticeHom.of(proj[c], d) for c in F.cones}
    return TDiagram(D, d, aug)


def _saturate(B: list[list[int]], d: int) -> list[list[int]]:
    """Saturation of the column span of B: kernel of the kernel of B^T."""
    perp = L.integer_kernel(L.transpose(B), d)
    if not perp or not perp[0]:
        return L.identity(d)
    return L.integer_kernel(L.transpose(perp), d)


def diagram_from_stabilizers(base: FinitePoset, k: int, stab: Mapping[object, Sequence[Sequence[int]]]) -> TDiagram:
    """The T-diagram D(c) = Z^k / S(c) for saturated sublattices S(c) (columns).

    Stabilizers must increase along covers.
    """
    proj = {}
    sect = {}
    rank = {}
    for e in base.elements:
        B = [list(r) for r in stab[e]] if stab[e] and stab[e][0] else [[] for _ in range(k)]
        r = len(B[0]) if B and B[0] else 0
        W = L.complete_to_basis(B, k)
        Winv = L.unimodular_inverse(W)
        proj[e] = [row for row in Winv[r:]]
        sect[e] = [row[r:] for row in W]
        rank[e] = k - r
    arrows = {}
    for lo, up in base.covers:
        A = L.matmul(proj[up], sect[lo]) if proj[up] else []
        arrows[(lo, up)] = LatticeHom.of(A, rank[lo])
    D = TorusDiagram(base, rank, arrows)
    return TDiagram(D, k, {e: LatticeHom.of(proj[e], k) for e in base.elements})


def is_t_characteristic(TD: TDiagram) -> bool:
    """Simplicial base, S(c) the direct sum of its atoms' stabilizers, atoms spanning."""
    P = TD.base
    if not is_simplicial_poset(P):
        return False
    SD = TD.stabilizers
    gens = _atom_generators(P, TD.k, SD.stab)
    atoms = [P.elements[i] for i in P.indices_of_rank(1)]
    if any(a not in gens for a in atoms):
        return False
    for idx, e in enumerate(P.elements):
        if SD.rank(e) != len(P.atoms_below_idx(idx)):
            return False
        if SD.rank(e) and SD.adapted[e] is None:
            return False
    all_gens = [[gens[a][i] for a in atoms] for i in range(TD.k)]
    return L.rank_q(all_gens, len(atoms)) == TD.k if atoms else TD.k == 0
