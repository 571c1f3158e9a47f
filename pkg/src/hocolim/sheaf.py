"""Cellular cosheaves on finite posets and their (co)homology.

Convention: a *cosheaf on C* assigns to each element a vector space and to
each cover ``c <. c'`` a map ``A(c') -> A(c)``. Viewed as a functor on
``C^op`` its derived limits ``lim^i`` are the sheaf cohomology
``H^i(C^op; A)``. A ``"sheaf"`` variance object has maps ``A(c) -> A(c')``
instead, and is handled by passing to the opposite poset.

Derived limits are computed in two independent ways:

* ``"refinement"``: the cochain complex of the refinement sheaf on the order
  complex, with value ``A(c_s)`` on a chain ``c_0 > ... > c_s``;
* ``"resolution"``: ``Hom`` from a minimal projective resolution of the
  constant functor on ``C^op``, which stays small on posets whose order
  complex is huge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import NotFunctorial
from .homalg import (
    RationalChainComplex,
    RationalMatrix,
    block_matrix,
    homology_dims,
    nullspace,
    _echelon,
    _reduce_against,
)
from .poset import FinitePoset, IncidenceAssignment, chains_by_dimension, count_chains, opposite, _bits

__all__ = [
    "Cosheaf",
    "GradedCosheaf",
    "cellular_homology",
    "refinement",
    "refinement_complex",
    "derived_limits",
    "sheaf_cohomology",
    "limit_basis",
    "zmss_duality_check",
    "DualityReport",
    "projective_resolution",
]

# order complexes with more chains than this switch to the resolution route
REFINEMENT_CHAIN_LIMIT = 4000


class Cosheaf:
    """One internal degree of a cosheaf on ``base``.

    ``maps[(lo, up)]`` (element ids, ``lo <. up``) is the matrix of
    ``A(up) -> A(lo)``, shape ``dims[lo] x dims[up]``.
    """

    __slots__ = ("base", "dims", "maps", "_idx_maps", "_composites")

    def __init__(self, base: FinitePoset, dims: Mapping, maps: Mapping, verify: bool = True):
        self.base = base
        self.dims = {e: int(dims.get(e, 0)) for e in base.elements}
        idx_maps: dict[tuple[int, int], RationalMatrix] = {}
        clean = {}
        for lo, up in base.covers:
            m = maps.get((lo, up))
            shape = (self.dims[lo], self.dims[up])
            if m is None:
                if 0 not in shape:
                    raise NotFunctorial(f"missing map for cover ({lo!r}, {up!r})")
                m = RationalMatrix(*shape)
            if m.shape != shape:
                raise NotFunctorial(f"map ({lo!r}, {up!r}) has shape {m.shape}, expected {shape}")
            clean[(lo, up)] = m
            idx_maps[(base.index[lo], base.index[up])] = m
        self.maps = clean
        self._idx_maps = idx_maps
        self._composites: dict[tuple[int, int], RationalMatrix] = {}
        if verify:
            self._check_functorial()

    def dim_idx(self, i: int) -> int:
        return self.dims[self.base.elements[i]]

    def _check_functorial(self):
        P = self.base
        for d in range(len(P)):
            for c in _bits(P.below_mask(d)):
                if P.rank_of_index(c) != P.rank_of_index(d) - 2:
                    continue
                mids = [x for x in P.lower_covers_idx(d) if P.leq_idx(c, x)]
                comps = [self._idx_maps[(c, x)] @ self._idx_maps[(x, d)] for x in mids]
                for other in comps[1:]:
                    if other != comps[0]:
                        raise NotFunctorial(
                            f"composites disagree on interval ({P.elements[c]!r}, {P.elements[d]!r})"
                        )

    def composite(self, lo: int, up: int) -> RationalMatrix:
        """Map ``A(up) -> A(lo)`` for ``lo <= up`` (indices)."""
        if lo == up:
            n = self.dim_idx(lo)
            return RationalMatrix.identity(n)
        key = (lo, up)
        hit = self._composites.get(key)
        if hit is not None:
            return hit
        P = self.base
        for x in P.lower_covers_idx(up):
            if P.leq_idx(lo, x):
                m = self.composite(lo, x) @ self._idx_maps[(x, up)]
                self._composites[key] = m
                return m
        raise ValueError("elements are not comparable")

    def total_dim(self) -> int:
        return sum(self.dims.values())


class GradedCosheaf:
    """A graded (co)sheaf: one :class:`Cosheaf` per internal degree.

    ``variance="cosheaf"`` means maps run toward smaller elements;
    ``variance="sheaf"`` means they run toward larger ones, in which case
    ``pieces`` hold cosheaves on the opposite poset.
    """

    def __init__(self, base: FinitePoset, pieces: Mapping[int, Cosheaf], variance: str = "cosheaf"):
        if variance not in ("cosheaf", "sheaf"):
            raise ValueError("variance must be 'cosheaf' or 'sheaf'")
        self.base = base
        self.variance = variance
        self.pieces = {deg: pieces[deg] for deg in sorted(pieces)}

    @property
    def degrees(self) -> list[int]:
        return list(self.pieces)

    def stalk_dims(self, element) -> dict[int, int]:
        return {deg: F.dims[element] for deg, F in self.pieces.items() if F.dims[element]}

    def as_cosheaf(self) -> "GradedCosheaf":
        """Same data as a cosheaf (on ``base`` or its opposite)."""
        return self

    @classmethod
    def constant(cls, base: FinitePoset, dims: Mapping[int, int] | None = None) -> "GradedCosheaf":
        dims = {0: 1} if dims is None else dims
        pieces = {}
        for deg, n in dims.items():
            maps = {cv: RationalMatrix.identity(n) for cv in base.covers}
            pieces[deg] = Cosheaf(base, {e: n for e in base.elements}, maps, verify=False)
        return cls(base, pieces)


def _cosheaf_piece(A: GradedCosheaf, deg: int) -> Cosheaf:
    return A.pieces[deg]


# -- cellular homology -------------------------------------------------------

def cellular_chain_complex(C: FinitePoset, inc: IncidenceAssignment, B: Cosheaf) -> RationalChainComplex:
    """C_i = sum over rank-i elements of B(c), d(c x y) = sum [c:c'] c' x B(c'<=c) y."""
    d = C.dim
    by_rank = [C.indices_of_rank(r) for r in range(d + 1)]
    offsets = []
    dims = []
    for cells in by_rank:
        off = {}
        tot = 0
        for c in cells:
            off[c] = tot
            tot += B.dim_idx(c)
        offsets.append(off)
        dims.append(tot)
    diffs = []
    el = C.elements
    for i in range(1, d + 1):
        data: dict[int, dict[int, object]] = {}
        for c in by_rank[i]:
            for cp in C.lower_covers_idx(c):
                sign = inc[(el[cp], el[c])]
                m = B._idx_maps[(cp, c)]
                r0, c0 = offsets[i - 1][cp], offsets[i][c]
                for r, row in m.row_items():
                    tgt = data.setdefault(r0 + r, {})
                    for cc, v in row.items():
                        tgt[c0 + cc] = tgt.get(c0 + cc, 0) + sign * v
        diffs.append(RationalMatrix.from_rows(dims[i - 1], dims[i], data))
    return RationalChainComplex(dims, diffs, direction="chain")


def cellular_homology(C: FinitePoset, inc: IncidenceAssignment, B: GradedCosheaf) -> dict[int, list[int]]:
    """Per internal degree, dims of H^cw_i(C; B) for i = 0..dim C."""
    if B.variance != "cosheaf":
        raise ValueError("cellular homology needs a cosheaf on C")
    out = {}
    for deg, F in B.pieces.items():
        if len(C) == 0:
            out[deg] = []
            continue
        out[deg] = homology_dims(cellular_chain_complex(C, inc, F))
    return out


# -- refinement route ---------------------------------------------------------

def refinement_complex(F: Cosheaf) -> RationalChainComplex:
    """Cochain complex of the refinement sheaf on the order complex.

    Degree s holds the sum over chains c_0 > ... > c_s of F(c_s). Deleting
    vertex i from an (s+1)-chain has sign (-1)^(s+1-i); deleting the least
    element applies the cosheaf map.
    """
    P = F.base
    levels = chains_by_dimension(P)
    if not levels:
        return RationalChainComplex([], [], direction="cochain")
    offsets = []
    dims = []
    for lvl in levels:
        off = {}
        tot = 0
        for ch in lvl:
            off[ch] = tot
            tot += F.dim_idx(ch[-1])
        offsets.append(off)
        dims.append(tot)
    diffs = []
    for s in range(len(levels) - 1):
        data: dict[int, dict[int, object]] = {}
        for ch in levels[s + 1]:
            n_up = F.dim_idx(ch[-1])
            if not n_up:
                continue
            r0 = offsets[s + 1][ch]
            top = s + 1
            for i in range(s + 2):
                face = ch[:i] + ch[i + 1:]
                sign = -1 if (top - i) % 2 else 1
                c0 = offsets[s][face]
                if i == top:
                    m = F.composite(ch[-1], face[-1])
                    for r, row in m.row_items():
                        tgt = data.setdefault(r0 + r, {})
                        for cc, v in row.items():
                            tgt[c0 + cc] = tgt.get(c0 + cc, 0) + sign * v
                else:
                    for r in range(n_up):
                        tgt = data.setdefault(r0 + r, {})
                        tgt[c0 + r] = tgt.get(c0 + r, 0) + sign
        diffs.append(RationalMatrix.from_rows(dims[s + 1], dims[s], data))
    return RationalChainComplex(dims, diffs, direction="cochain")


def refinement(A: GradedCosheaf) -> GradedCosheaf:
    """The refinement of a cosheaf on C: a sheaf on the chain poset of C.

    The stalk at a chain is the stalk of ``A`` at its least element. For a
    face ``tau`` of a chain ``sigma`` the map runs ``s(tau) -> s(sigma)``
    (the cosheaf map from ``min tau`` down to ``min sigma``). Elements of the
    returned base are the chains, as tuples of element ids ``c_0 > ... > c_s``.
    """
    P = A.base
    levels = chains_by_dimension(P)
    el = P.elements
    chains = [ch for lvl in levels for ch in lvl]
    names = [tuple(el[i] for i in ch) for ch in chains]
    covers = []
    for ch, name in zip(chains, names):
        if len(ch) < 2:
            continue
        for i in range(len(ch)):
            face = ch[:i] + ch[i + 1:]
            covers.append((tuple(el[j] for j in face), name))
    chain_poset = FinitePoset(names, covers)
    # as a sheaf on the chain poset its maps go up; store as a cosheaf on the opposite
    opp = opposite(chain_poset)
    pieces = {}
    for deg, F in A.pieces.items():
        dims = {name: F.dim_idx(ch[-1]) for ch, name in zip(chains, names)}
        maps = {}
        for face_name, name in covers:
            ch = tuple(P.index[x] for x in name)
            face = tuple(P.index[x] for x in face_name)
            maps[(name, face_name)] = F.composite(ch[-1], face[-1])
        pieces[deg] = Cosheaf(opp, dims, maps, verify=False)
    return GradedCosheaf(chain_poset, pieces, variance="sheaf")


# -- resolution route ---------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveResolution:
    """Minimal projective resolution of the constant functor on C^op.

    ``sites[i][g]`` is the element (index) carrying generator g of P_i, i.e.
    P_i is the sum of the representables Q[C_{<= site}]. ``vectors[i][g]``
    (for i >= 1) is the image of generator g of P_i as a combination of
    generators of P_{i-1} whose sites lie above it.
    """

    poset: FinitePoset
    sites: tuple[tuple[int, ...], ...]
    vectors: tuple[tuple[dict, ...], ...]

    @property
    def length(self) -> int:
        return len(self.sites) - 1

    def ranks(self) -> list[int]:
        return [len(s) for s in self.sites]


def _kernel_at(columns: list[dict[int, int]], cols_global: list[int]) -> list[dict[int, object]]:
    """Kernel of the matrix with the given sparse columns, in global labels."""
    if not cols_global:
        return []
    rows_used = sorted({r for col in columns for r in col})
    ridx = {r: i for i, r in enumerate(rows_used)}
    data: dict[int, dict[int, object]] = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            data.setdefault(ridx[r], {})[j] = v
    M = RationalMatrix.from_rows(len(rows_used), len(columns), data)
    _, basis = nullspace(M)
    return [{cols_global[j]: v for j, v in vec.items()} for vec in basis]


def _primitive(vec: dict[int, object]) -> dict[int, int]:
    from fractions import Fraction
    from math import gcd, lcm

    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    iv = {k: int(v * den) for k, v in vec.items()}
    g = 0
    for v in iv.values():
        g = gcd(g, v)
    return {k: v // g for k, v in iv.items()} if g > 1 else iv


@lru_cache(maxsize=64)
def projective_resolution(P: FinitePoset) -> ProjectiveResolution:
    n = len(P)
    if n == 0:
        return ProjectiveResolution(P, ((),), ((),))
    order = sorted(range(n), key=lambda x: -P.rank_of_index(x))
    sites: list[list[int]] = [sorted(P.maximal_indices())]
    vectors: list[list[dict]] = [[{} for _ in sites[0]]]
    # columns of the current map: for level 0 the augmentation to Q
    columns: list[dict[int, int]] = [{0: 1} for _ in sites[0]]
    while True:
        cur_sites = sites[-1]
        kernels: dict[int, list[dict]] = {}
        new_sites: list[int] = []
        new_vecs: list[dict] = []
        for z in order:
            above = P.above_mask(z)
            cols = [g for g, s in enumerate(cur_sites) if above >> s & 1]
            K = _kernel_at([columns[g] for g in cols], cols)
            kernels[z] = K
            if not K:
                continue
            # generators at z complement the images of the kernels above
            piv: dict[int, dict[int, int]] = {}
            for y in P.upper_covers_idx(z):
                for v in kernels[y]:
                    red = _reduce_against(_primitive(v), piv)
                    if red:
                        piv[min(red)] = red
            for v in K:
                pv = _primitive(v)
                red = _reduce_against(dict(pv), piv)
                if red:
                    piv[min(red)] = red
                    new_sites.append(z)
                    new_vecs.append(pv)
        if not new_sites:
            break
        sites.append(new_sites)
        vectors.append(new_vecs)
        columns = new_vecs
    return ProjectiveResolution(P, tuple(tuple(s) for s in sites), tuple(tuple(v) for v in vectors))


def hom_complex(F: Cosheaf, R: ProjectiveResolution | None = None) -> RationalChainComplex:
    """Cochain complex Hom(P_*, F) whose cohomology is lim^* F."""
    R = projective_resolution(F.base) if R is None else R
    dims = []
    offsets = []
    for lvl in R.sites:
        off = []
        tot = 0
        for s in lvl:
            off.append(tot)
            tot += F.dim_idx(s)
        offsets.append(off)
        dims.append(tot)
    diffs = []
    for i in range(1, len(R.sites)):
        data: dict[int, dict[int, object]] = {}
        for gp, vec in enumerate(R.vectors[i]):
            zp = R.sites[i][gp]
            if not F.dim_idx(zp):
                continue
            r0 = offsets[i][gp]
            for g, coeff in vec.items():
                z = R.sites[i - 1][g]
                m = F.composite(zp, z)
                c0 = offsets[i - 1][g]
                for r, row in m.row_items():
                    tgt = data.setdefault(r0 + r, {})
                    for cc, v in row.items():
                        tgt[c0 + cc] = tgt.get(c0 + cc, 0) + coeff * v
        diffs.append(RationalMatrix.from_rows(dims[i], dims[i - 1], data))
    return RationalChainComplex(dims, diffs, direction="cochain")


def _choose_method(P: FinitePoset, method: str) -> str:
    if method == "auto":
        return "refinement" if count_chains(P) <= REFINEMENT_CHAIN_LIMIT else "resolution"
    if method not in ("refinement", "resolution"):
        raise ValueError(f"unknown method {method!r}")
    return method


def derived_limits(F: Cosheaf, method: str = "auto") -> list[int]:
    """dims of lim^i F over C^op, trailing zeros trimmed."""
    if len(F.base) == 0 or F.total_dim() == 0:
        return []
    how = _choose_method(F.base, method)
    K = refinement_complex(F) if how == "refinement" else hom_complex(F)
    dims = homology_dims(K)
    while dims and dims[-1] == 0:
        dims.pop()
    return dims


def sheaf_cohomology(A: GradedCosheaf, method: str = "auto") -> dict[int, list[int]]:
    """Per internal degree, dims of H^i(C^op; A) = lim^i A."""
    return {deg: derived_limits(F, method) for deg, F in A.pieces.items()}


def limit_basis(F: Cosheaf) -> tuple[list[int], list[dict[int, object]], list[int]]:
    """A basis of lim^0 F as compatible families on the maximal elements.

    Returns ``(free, basis, offsets)`` where vectors live in the sum of the
    stalks at the maximal elements (in the order of
    ``projective_resolution(F.base).sites[0]``), ``offsets`` gives the start
    of each stalk block, and ``free`` are the coordinates that read off the
    expansion of a family in the basis.
    """
    K = hom_complex(F)
    offsets = []
    tot = 0
    for s in projective_resolution(F.base).sites[0]:
        offsets.append(tot)
        tot += F.dim_idx(s)
    if len(K.differentials) == 0:
        return list(range(tot)), [{i: 1} for i in range(tot)], offsets
    free, basis = nullspace(K.differentials[0])
    return free, basis, offsets


# -- duality -------------------------------------------------------------------

@dataclass(frozen=True)
class DualityReport:
    skipped: bool
    dim: int
    passed: bool
    rows: tuple = field(default=())

    def as_dict(self) -> dict:
        return {
            "skipped": self.skipped,
            "dim": self.dim,
            "passed": self.passed,
            "rows": [dict(r) for r in self.rows],
        }


def zmss_duality_check(C: FinitePoset, A: GradedCosheaf, inc: IncidenceAssignment | None = None, method: str = "auto") -> DualityReport:
    """Compare lim^i A with H^cw_{d-i}(C; A) in every internal degree."""
    from .poset import incidence_assignment, is_homology_manifold

    d = C.dim
    if not is_homology_manifold(C):
        return DualityReport(True, d, True)
    inc = incidence_assignment(C) if inc is None else inc
    lims = sheaf_cohomology(A, method)
    cw = cellular_homology(C, inc, A)
    rows = []
    ok = True
    for deg in A.degrees:
        left = [lims[deg][i] if i < len(lims[deg]) else 0 for i in range(d + 1)]
        right = [cw[deg][d - i] for i in range(d + 1)]
        same = left == right
        ok &= same
        rows.append((("degree", deg), ("lim", tuple(left)), ("cellular", tuple(right)), ("equal", same)))
    return DualityReport(False, d, ok, tuple(rows))
