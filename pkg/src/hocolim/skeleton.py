"""Skeleta of T-characteristic diagrams.

Contents: restriction to rank skeleta, the ideal cosheaf J* with its
Taylor-type resolution, the skeleton cohomology theorem with its Euler
identity, the bigraded Betti formulas for skeleta, and the closed forms for
skeleta of CP^{m-1}.

Exterior algebra conventions: H_j(T) = Lambda^j(Q^k) in the basis of sorted
j-subsets of {0..k-1}; an atom a contributes the degree-one class u_a (its
stabilizer generator).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Any

from .errors import ExactnessFailure, NotCharacteristic, NotEquivariantlyFormal, OutOfRange
from .homalg import RationalChainComplex, RationalMatrix, homology_dims, rref
from .poset import FinitePoset, reduced_euler_characteristic, skeleton
from .sheaf import Cosheaf, GradedCosheaf, derived_limits
from .spectra import bigraded_betti, ef_check, lim_table
from .toric import TDiagram, _atom_generators, fan_to_diagram, is_t_characteristic, projective_space_fan

__all__ = [
    "restrict_diagram",
    "j_cosheaf",
    "TaylorResolution",
    "taylor_resolution",
    "j_sequence_check",
    "skeleton_cohomology",
    "euler_boundary",
    "skeleton_bigraded",
    "cp_diagram",
    "gbin",
    "cp_closed_forms",
    "cp_direct",
    "cp_verify",
]


def restrict_diagram(TD: TDiagram, q: int) -> TDiagram:
    if q < 0:
        raise ValueError("q must be non-negative")
    if q >= TD.base.dim:
        return TD
    return TD.restrict(skeleton(TD.base, q))


def _require_characteristic(TD: TDiagram):
    if not is_t_characteristic(TD):
        raise NotCharacteristic("diagram is not T-characteristic")


# -- exterior algebra helpers -------------------------------------------------

class _Ext:
    """Sorted subset bases of Lambda^j(Q^k) and wedge with degree-one vectors."""

    def __init__(self, k: int):
        self.k = k
        self.subsets = [list(combinations(range(k), j)) for j in range(k + 1)]
        self.index = [{S: i for i, S in enumerate(s)} for s in self.subsets]

    def wedge_vec(self, u: list[int], w: dict[int, object], j: int) -> dict[int, object]:
        """u ^ w for u in Lambda^1 and w in Lambda^j; result in Lambda^{j+1}."""
        out: dict[int, object] = {}
        for s, v in w.items():
            S = self.subsets[j][s]
            for a, ua in enumerate(u):
                if not ua or a in S:
                    continue
                pos = sum(1 for x in S if x < a)
                T = tuple(sorted(S + (a,)))
                key = self.index[j + 1][T]
                val = out.get(key, 0) + (-1 if pos % 2 else 1) * ua * v
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        return out

    def principal(self, gens: list[list[int]], j: int) -> list[dict[int, object]]:
        """Spanning set of (u_1 ^ ... ^ u_r) ^ Lambda^{j-r} inside Lambda^j."""
        r = len(gens)
        if j < r or j > self.k:
            return []
        top: dict[int, object] = {0: 1}
        deg = 0
        for u in gens:
            top = self.wedge_vec(u, top, deg)
            deg += 1
        if not top:
            return []
        out = []
        # right-multiplication by the monomial basis of Lambda^{j-r}
        for S in self.subsets[j - r]:
            w = dict(top)
            d = r
            for a in S:
                e = [0] * self.k
                e[a] = 1
                # w ^ e_a = (-1)^d e_a ^ w
                w = {key: (-v if d % 2 else v) for key, v in self.wedge_vec(e, w, d).items()}
                d += 1
            if w:
                out.append(w)
        return out


@dataclass(frozen=True)
class _Subspace:
    """Subspace of Lambda^j in reduced row echelon form; coords = values at pivots."""

    pivots: tuple[int, ...]
    rows: tuple[dict, ...]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def coords(self, v: dict) -> list:
        return [v.get(p, 0) for p in self.pivots]


def _subspace(vectors: list[dict], ambient: int) -> _Subspace:
    if not vectors:
        return _Subspace((), ())
    M = RationalMatrix.from_rows(len(vectors), ambient, dict(enumerate(vectors)))
    piv, red = rref(M)
    rows = tuple(red[p] for p in piv)
    return _Subspace(tuple(piv), rows)


def _inclusion(small: _Subspace, big: _Subspace) -> RationalMatrix:
    """Matrix (big.dim x small.dim) of the inclusion in the echelon bases."""
    data: dict[int, dict[int, object]] = {}
    for col, row in enumerate(small.rows):
        for r, v in enumerate(big.coords(row)):
            if v:
                data.setdefault(r, {})[col] = v
    return RationalMatrix.from_rows(big.dim, small.dim, data)


# -- J* and the Taylor-type resolution -----------------------------------------

class _CharacteristicData:
    """Atom generators and echelon bases of J_*(c) and P_*(c) per degree."""

    def __init__(self, TD: TDiagram):
        _require_characteristic(TD)
        P = TD.base
        self.P = P
        self.k = TD.k
        self.ext = _Ext(TD.k)
        gens = _atom_generators(P, TD.k, TD.stabilizers.stab)
        self.atom_idx = sorted(P.indices_of_rank(1))
        self.u = {i: gens[P.elements[i]] for i in self.atom_idx}
        self.atoms_of = {c: sorted(P.atoms_below_idx(c)) for c in range(len(P))}
        self._J: dict = {}
        self._P: dict = {}

    def J(self, c: int, j: int) -> _Subspace:
        key = (c, j)
        if key not in self._J:
            vecs = []
            for a in self.atoms_of[c]:
                vecs.extend(self.ext.principal([self.u[a]], j))
            self._J[key] = _subspace(vecs, len(self.ext.subsets[j]))
        return self._J[key]

    def Pstar(self, c: int, j: int) -> _Subspace:
        key = (c, j)
        if key not in self._P:
            vecs = self.ext.principal([self.u[a] for a in self.atoms_of[c]], j)
            self._P[key] = _subspace(vecs, len(self.ext.subsets[j]))
        return self._P[key]


def j_cosheaf(TD: TDiagram) -> GradedCosheaf:
    """The cosheaf J*: stalkwise dual of the ideal generated by H_1(S(c)).

    Stalk exactness of 0 -> H^*(D) -> H^*(T) -> J* -> 0 is checked by the
    rank count dim J^j(c) = binom(k, j) - binom(k - rank S(c), j).
    """
    return _j_cosheaf(_CharacteristicData(TD))


def _j_cosheaf(data: _CharacteristicData) -> GradedCosheaf:
    P, k = data.P, data.k
    el = P.elements
    pieces = {}
    for j in range(k + 1):
        dims = {}
        for c in range(len(P)):
            dim = data.J(c, j).dim
            r = len(data.atoms_of[c])
            if dim != comb(k, j) - comb(k - r, j):
                raise ExactnessFailure(el[c], j)
            dims[el[c]] = dim
        maps = {}
        for lo, up in P.covers:
            incl = _inclusion(data.J(P.index[lo], j), data.J(P.index[up], j))
            maps[(lo, up)] = incl.transpose()
        pieces[j] = Cosheaf(P, dims, maps)
    return GradedCosheaf(P, pieces)


@dataclass
class TaylorResolution:
    """0 -> J* -> R_0 -> ... -> R_{d-1} -> 0 with R_i(c) = sum over c' <= c, rk c' = i+1 of P*(c').

    ``eta[j][c]`` and ``xi[i][j][c]`` are the stalk matrices at element
    index ``c`` in degree ``j``; ``components[i][c]`` lists the c' of each
    block of R_i(c). ``lim_complex(j)`` is the complex of limits, which is
    the direct sum of P*(c') over rk c' = i+1 because every R_i is acyclic.
    """

    base: FinitePoset
    k: int
    j_star: GradedCosheaf
    terms: list
    components: list
    eta: dict
    xi: list
    lim_dims: dict = field(default_factory=dict)
    _lim_diffs: dict = field(default_factory=dict, repr=False)

    @property
    def length(self) -> int:
        return len(self.terms)

    def lim_complex(self, j: int) -> RationalChainComplex:
        return RationalChainComplex(self.lim_dims[j], self._lim_diffs[j], direction="cochain")

    def lim_cohomology(self) -> dict[int, list[int]]:
        """H^i of the complex of limits, which computes lim^i J*."""
        return {j: homology_dims(self.lim_complex(j)) for j in sorted(self.lim_dims)}


def _face_sign(c_atoms: list[int], face_atoms: list[int]) -> int:
    missing = next(p for p, a in enumerate(c_atoms) if a not in face_atoms)
    return -1 if missing % 2 else 1


def taylor_resolution(TD: TDiagram, verify: bool = True) -> TaylorResolution:
    data = _CharacteristicData(TD)
    P, k = data.P, data.k
    el = P.elements
    n = len(P)
    d = P.dim
    Jstar = _j_cosheaf(data)
    by_rank = [sorted(P.indices_of_rank(r)) for r in range(d + 1)]
    length = d  # R_0 .. R_{d-1}
    components = []
    for i in range(length):
        comp = {}
        for c in range(n):
            below = P.below_mask(c)
            comp[c] = [x for x in by_rank[i + 1] if below >> x & 1]
        components.append(comp)

    def faces(x: int) -> list[int]:
        return sorted(P.lower_covers_idx(x))

    # global boundary blocks P_*(x) -> P_*(y) for y a facet of x, with signs
    def block(x: int, y: int, j: int) -> RationalMatrix:
        s = _face_sign(data.atoms_of[x], data.atoms_of[y])
        return _inclusion(data.Pstar(x, j), data.Pstar(y, j)).scale(s)

    terms = []
    for i in range(length):
        pieces = {}
        for j in range(k + 1):
            dims = {el[c]: sum(data.Pstar(x, j).dim for x in components[i][c]) for c in range(n)}
            maps = {}
            for lo, up in P.covers:
                li, ui = P.index[lo], P.index[up]
                # projection R_i(up) -> R_i(lo) onto the blocks c' <= lo
                data_rows: dict[int, dict[int, object]] = {}
                offs_up = {}
                o = 0
                for x in components[i][ui]:
                    offs_up[x] = o
                    o += data.Pstar(x, j).dim
                r = 0
                for x in components[i][li]:
                    for t in range(data.Pstar(x, j).dim):
                        data_rows[r] = {offs_up[x] + t: 1}
                        r += 1
                maps[(lo, up)] = RationalMatrix.from_rows(dims[lo], dims[up], data_rows)
            pieces[j] = Cosheaf(P, dims, maps, verify=False)
        terms.append(GradedCosheaf(P, pieces))

    def offsets(xs: list[int], j: int) -> dict[int, int]:
        out = {}
        o = 0
        for x in xs:
            out[x] = o
            o += data.Pstar(x, j).dim
        return out

    eta: dict = {}
    xi: list = [dict() for _ in range(max(length - 1, 0))]
    for j in range(k + 1):
        eta[j] = {}
        for i in range(length - 1):
            xi[i][j] = {}
        for c in range(n):
            Jc = data.J(c, j)
            # augmentation (homology side) sum_a P_*(a) -> J_*(c); eta is its transpose
            atoms = components[0][c] if length else []
            off = offsets(atoms, j)
            tot = sum(data.Pstar(a, j).dim for a in atoms)
            aug = {}
            for a in atoms:
                inc = _inclusion(data.Pstar(a, j), Jc)
                for (r, col), v in inc.entries.items():
                    aug[(r, off[a] + col)] = v
            eta[j][c] = RationalMatrix(Jc.dim, tot, aug).transpose()
            for i in range(length - 1):
                src = components[i][c]
                tgt = components[i + 1][c]
                off_s = offsets(src, j)
                off_t = offsets(tgt, j)
                ent = {}
                for x in tgt:
                    for y in faces(x):
                        b = block(x, y, j)
                        for (r, col), v in b.entries.items():
                            ent[(off_t[x] + col, off_s[y] + r)] = v
                rows = sum(data.Pstar(x, j).dim for x in tgt)
                cols = sum(data.Pstar(y, j).dim for y in src)
                xi[i][j][c] = RationalMatrix(rows, cols, ent)
            if verify:
                dims = [Jc.dim] + [sum(data.Pstar(x, j).dim for x in components[i][c]) for i in range(length)]
                mats = [eta[j][c]] + [xi[i][j][c] for i in range(length - 1)]
                K = RationalChainComplex(dims, mats, direction="cochain")
                h = homology_dims(K)
                bad = next((p for p, v in enumerate(h) if v), None)
                if bad is not None:
                    raise ExactnessFailure(el[c], bad)

    # complex of limits: blocks over all c' of rank i+1
    lim_dims = {}
    lim_diffs = {}
    for j in range(k + 1):
        ranks = [by_rank[i + 1] for i in range(length)]
        lim_dims[j] = [sum(data.Pstar(x, j).dim for x in xs) for xs in ranks]
        diffs = []
        for i in range(length - 1):
            off_s = offsets(ranks[i], j)
            off_t = offsets(ranks[i + 1], j)
            ent = {}
            for x in ranks[i + 1]:
                for y in faces(x):
                    for (r, col), v in block(x, y, j).entries.items():
                        ent[(off_t[x] + col, off_s[y] + r)] = v
            diffs.append(RationalMatrix(lim_dims[j][i + 1], lim_dims[j][i], ent))
        lim_diffs[j] = diffs
    return TaylorResolution(P, k, Jstar, terms, components, eta, xi, lim_dims, lim_diffs)


def j_sequence_check(TD: TDiagram) -> dict[str, Any]:
    """The long exact sequence of 0 -> H^*(D) -> H^*(T) -> J* -> 0 in limits.

    Expected: lim^0 H^j(D) = 0 and 0 -> H^j(T) -> lim J*^j -> lim^1 H^j(D) -> 0
    for j >= 1, and lim^i H^j(D) = lim^{i-1} J*^j for i >= 2.
    """
    _require_characteristic(TD)
    k = TD.k
    HD = lim_table(TD)
    J = {j: derived_limits(F) for j, F in j_cosheaf(TD).pieces.items()}
    rows = []
    ok = True
    for j in range(1, k + 1):
        Jj = J.get(j, [])
        lj = lambda i: Jj[i] if i < len(Jj) else 0  # noqa: E731
        row = {
            "j": j,
            "lim0_H": HD.get((0, j), 0),
            "short_exact": comb(k, j) + HD.get((1, j), 0) == lj(0),
            "shifted": all(HD.get((i, j), 0) == lj(i - 1) for i in range(2, TD.base.dim + 2)),
        }
        row["ok"] = row["lim0_H"] == 0 and row["short_exact"] and row["shifted"]
        ok &= row["ok"]
        rows.append(row)
    return {"rows": rows, "passed": ok}


# -- skeleton cohomology --------------------------------------------------------

def _chi_upper(P: FinitePoset) -> dict[int, int]:
    """chi~ of the strict upper set of each element, chi~(empty) = -1."""
    out = {}
    for c in range(len(P)):
        out[c] = reduced_euler_characteristic(P, within=P.above_mask(c) & ~(1 << c))
    return out


def euler_boundary(TD: TDiagram, q: int, lower: dict[tuple[int, int], int], j: int) -> int:
    """Predicted dim lim^q H^j(D_{<=q}) from the Euler characteristic.

    ``lower`` supplies dim lim^i H^j for i < q. With chi~ taken on strict
    upper sets in sk^q C:
    (-1)^{q+1} (sum_c chi~((sk^q C)_{>c}) binom(k - rk c, j) + sum_{i<q} (-1)^i lim^i).
    """
    S = skeleton(TD.base, q)
    chi = _chi_upper(S)
    total = sum(chi[c] * comb(TD.k - S.rank_of_index(c), j) for c in range(len(S)))
    total += sum((-1) ** i * lower.get((i, j), 0) for i in range(q))
    return (-1) ** (q + 1) * total


def skeleton_cohomology(TD: TDiagram, q: int, full: dict | None = None) -> dict[str, Any]:
    """All lim^i H^j(D_{<=q}) with the three assertions of the skeleton theorem."""
    _require_characteristic(TD)
    full = lim_table(TD) if full is None else full
    R = restrict_diagram(TD, q)
    table = lim_table(R)
    k = TD.k
    stab = [{"i": i, "j": j, "restricted": table.get((i, j), 0), "full": full.get((i, j), 0)}
            for i in range(q) for j in range(k + 1)
            if table.get((i, j), 0) != full.get((i, j), 0)]
    vanish = [{"i": i, "j": j, "dim": v} for (i, j), v in sorted(table.items()) if v and (i > q or i > j)]
    boundary = []
    for j in range(k + 1):
        pred = euler_boundary(TD, q, full, j)
        got = table.get((q, j), 0)
        boundary.append({"j": j, "direct": got, "formula": pred, "equal": got == pred})
    return {
        "q": q,
        "table": {f"{i},{j}": v for (i, j), v in sorted(table.items())},
        "stability": not stab,
        "stability_failures": stab,
        "vanishing": not vanish,
        "vanishing_failures": vanish,
        "boundary": boundary,
        "boundary_identity": all(b["equal"] for b in boundary),
        "passed": not stab and not vanish and all(b["equal"] for b in boundary),
        "_table": table,
    }


def skeleton_bigraded(TD: TDiagram, q: int, t_max: int | None = None) -> dict[str, Any]:
    """Koszul-computed beta(D_{<=q}) against the two skeleton formulas.

    First family: beta^{0,2t}(D_{<=q}) = beta^{0,2t}(D) for t < q. Second
    family: beta^{-i,2(i+q)}(D_{<=q}) given by the Euler sum with j = i + q.
    Every other cell must vanish.
    """
    _require_characteristic(TD)
    if not ef_check(TD):
        raise NotEquivariantlyFormal("the diagram is not equivariantly formal")
    k = TD.k
    t_max = k + q if t_max is None else t_max
    R = restrict_diagram(TD, q)
    beta_q = bigraded_betti(R, t_max)
    beta = bigraded_betti(TD, min(t_max, max(q - 1, 0)))
    S = skeleton(TD.base, q)
    chi = _chi_upper(S)
    cells = []
    ok = True
    for (i, t), v in sorted(beta_q.beta.items()):
        if i == 0 and t < q:
            fam, pred = "stable", beta.beta[(0, t)]
        elif t - i == q:
            j = i + q
            fam = "boundary"
            pred = (-1) ** (q + 1) * sum(chi[c] * comb(k - S.rank_of_index(c), j) for c in range(len(S)))
        else:
            fam, pred = "zero", 0
        same = v == pred
        ok &= same
        if v or pred:
            cells.append({"i": i, "t": t, "family": fam, "koszul": v, "formula": pred, "equal": same})
    return {"q": q, "t_max": t_max, "verified_through_degree": 2 * t_max, "cells": cells, "passed": ok}


# -- CP^{m-1} ---------------------------------------------------------------------

def cp_diagram(m: int) -> TDiagram:
    """The standard diagram of CP^{m-1} (cone over the boundary of a simplex)."""
    if m < 2:
        raise OutOfRange("m must be at least 2")
    return fan_to_diagram(projective_space_fan(m - 1))


def gbin(n: int, r: int) -> int:
    """Binomial n(n-1)...(n-r+1)/r! for any integer n; zero for r < 0."""
    if r < 0:
        return 0
    num = 1
    for t in range(r):
        num *= n - t
    return num // factorial(r)


def _zbin(n: int, r: int) -> int:
    return comb(n, r) if 0 <= r <= n else 0


def cp_closed_forms(m: int, q: int, j: int, convention: str = "generalized") -> tuple[int, int]:
    """The two finite sums for dim lim^{q+1} H^j of the CP^{m-1} skeleton diagram."""
    if not 1 <= q + 1 <= m - 1 or j < 0:
        raise OutOfRange(f"need 1 <= q+1 <= m-1 and j >= 0 (m={m}, q={q}, j={j})")
    B = gbin if convention == "generalized" else _zbin
    s1 = sum(B(m, i + 1) * (-1) ** ((q - 1 - i) % 2) * B(m - 2 - i, q - i) * B(m - 2 - i, j) for i in range(-1, q + 1))
    s1 *= (-1) ** q
    s2 = sum(B(m - 1 - i, j - i) * B(j - i - 1, q - i + 1) for i in range(q + 2))
    return s1, s2


def cp_direct(m: int, q: int) -> dict[tuple[int, int], int]:
    """lim table of the CP^{m-1} diagram restricted to rank <= q+1."""
    return lim_table(restrict_diagram(cp_diagram(m), q + 1))


def cp_verify(m: int, qmax: int | None = None, jmax: int | None = None, workers: int = 1) -> dict[str, Any]:
    """Triples (first sum, second sum, direct) for q <= qmax, j <= jmax."""
    qmax = m - 2 if qmax is None else qmax
    jmax = m if jmax is None else jmax
    if qmax > m - 2 or qmax < 0 or jmax < 0:
        raise OutOfRange(f"need 0 <= qmax <= m-2 and jmax >= 0 (m={m})")
    qs = list(range(qmax + 1))
    if workers > 1 and len(qs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            tables = dict(zip(qs, ex.map(cp_direct, [m] * len(qs), qs)))
    else:
        tables = {q: cp_direct(m, q) for q in qs}
    cells = []
    for q in qs:
        for j in range(jmax + 1):
            a, b = cp_closed_forms(m, q, j)
            c = tables[q].get((q + 1, j), 0)
            cells.append({"q": q, "j": j, "first": a, "second": b, "direct": c,
                          "sums_equal": a == b, "all_equal": a == b == c})
    return {
        "m": m,
        "qmax": qmax,
        "jmax": jmax,
        "cells": cells,
        "sums_agree": all(x["sums_equal"] for x in cells),
        "all_equal": all(x["all_equal"] for x in cells),
        "all_equal_above_diagonal": all(x["all_equal"] for x in cells if x["j"] >= x["q"] + 1),
    }
