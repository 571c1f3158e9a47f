"""Betti numbers, equivariant cohomology and bigraded Betti numbers of hocolim D.

The collapse theorems are used as definitions of outputs: Betti numbers are
sums of derived limits of H^*(D), equivariant cohomology is lim^0 of
H^*(BS), and bigraded Betti numbers are Koszul homology of that limit as a
module over H^*(BT). Every identity the theory predicts between these
numbers is checked by an explicit function returning a report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .homalg import GradedModulePresentation, RationalMatrix, koszul_tor_table
from .poset import f_h_vectors, incidence_assignment, is_homology_manifold
from .sheaf import (
    cellular_homology,
    derived_limits,
    hom_complex,
    limit_basis,
    projective_resolution,
    refinement_complex,
    _choose_method,
)
from .toric import (
    ClassifyingCosheaf,
    TDiagram,
    classifying_cosheaf,
    cohomology_cosheaf,
    is_strongly_reduced,
    monomials,
    orbit_shift,
)

__all__ = [
    "BettiTable",
    "BigradedBettiTable",
    "EquivariantResult",
    "betti_numbers",
    "lim_table",
    "equivariant_betti",
    "limit_module",
    "bigraded_betti",
    "orbit_ss_page2",
    "comparison_check",
    "cm_check",
    "ef_check",
    "euler_h_check",
    "default_t_max",
]


def default_t_max(TD: TDiagram) -> int:
    return TD.k + TD.base.dim + 2


def lim_table(TD: TDiagram, method: str = "auto") -> dict[tuple[int, int], int]:
    """Nonzero dims of lim^i H^j(D), keyed by (i, j)."""
    H = cohomology_cosheaf(TD)
    out = {}
    for j, F in H.pieces.items():
        for i, v in enumerate(derived_limits(F, method)):
            if v:
                out[(i, j)] = v
    return out


@dataclass(frozen=True)
class BettiTable:
    b: tuple[int, ...]
    provenance: dict = field(default_factory=dict)
    chain_euler: int = 0

    def as_dict(self) -> dict:
        return {
            "b": list(self.b),
            "provenance": {str(n): [list(x) for x in v] for n, v in sorted(self.provenance.items())},
            "euler_characteristic": self.chain_euler,
        }


def betti_numbers(TD: TDiagram, method: str = "auto") -> BettiTable:
    """b_n = sum over i + j = n of dim lim^i H^j(D)."""
    H = cohomology_cosheaf(TD)
    how = _choose_method(TD.base, method)
    contributions: dict[int, list[tuple[int, int, int]]] = {}
    chain_euler = 0
    top = 0
    for j, F in H.pieces.items():
        if len(TD.base) == 0:
            continue
        K = refinement_complex(F) if how == "refinement" else hom_complex(F)
        from .homalg import homology_dims

        dims = homology_dims(K)
        chain_euler += (-1) ** j * K.euler_characteristic()
        for i, v in enumerate(dims):
            if v:
                contributions.setdefault(i + j, []).append((i, j, v))
                top = max(top, i + j)
    b = tuple(sum(v for _, _, v in contributions.get(n, [])) for n in range(top + 1))
    return BettiTable(b, contributions, chain_euler)


@dataclass(frozen=True)
class EquivariantResult:
    t_max: int
    lims: dict  # degree 2t -> list of lim^i dims
    module: GradedModulePresentation

    def hilbert(self) -> list[int]:
        return list(self.module.pieces)

    def as_dict(self) -> dict:
        return {
            "t_max": self.t_max,
            "verified_through_degree": 2 * self.t_max,
            "lim": {str(d): v for d, v in sorted(self.lims.items())},
            "hilbert_function": self.hilbert(),
        }


def _mult_tables(r: int, t: int) -> list[list[int]]:
    """For each variable a, index in degree t+1 of y_a times each degree-t monomial."""
    src = monomials(r, t)
    tgt = {m: i for i, m in enumerate(monomials(r, t + 1))}
    out = []
    for a in range(r):
        row = []
        for m in src:
            mm = list(m)
            mm[a] += 1
            row.append(tgt[tuple(mm)])
        out.append(row)
    return out


def limit_module(CS: ClassifyingCosheaf, t_max: int | None = None) -> GradedModulePresentation:
    """lim^0 H^*(BS) as a graded module over H^*(BT), up to degree 2*t_max."""
    t_max = CS.t_max if t_max is None else t_max
    P = CS.cosheaf.base
    sites = projective_resolution(P).sites[0] if len(P) else ()
    el = P.elements
    bases = []
    for t in range(t_max + 1):
        F = CS.cosheaf.pieces[2 * t]
        free, basis, offsets = limit_basis(F)
        bases.append((free, basis, offsets))
    action = [[] for _ in range(CS.k)]
    for t in range(t_max):
        free_src, basis_src, off_src = bases[t]
        free_tgt, _, off_tgt = bases[t + 1]
        pos = {c: i for i, c in enumerate(free_tgt)}
        mult = {}
        for s in sites:
            r = CS.stab_rank[el[s]]
            if (r, t) not in mult:
                mult[(r, t)] = _mult_tables(r, t)
        for j in range(CS.k):
            data: dict[int, dict[int, object]] = {}
            for col, vec in enumerate(basis_src):
                image: dict[int, object] = {}
                for g, s in enumerate(sites):
                    e = el[s]
                    r = CS.stab_rank[e]
                    form = CS.forms[e][j]
                    lo = off_src[g]
                    hi = off_src[g + 1] if g + 1 < len(off_src) else None
                    table = mult[(r, t)]
                    for coord, v in vec.items():
                        if coord < lo or (hi is not None and coord >= hi):
                            continue
                        local = coord - lo
                        for a in range(r):
                            if form[a]:
                                key = off_tgt[g] + table[a][local]
                                image[key] = image.get(key, 0) + form[a] * v
                for key, v in image.items():
                    if v and key in pos:
                        data.setdefault(pos[key], {})[col] = v
            action[j].append(RationalMatrix.from_rows(len(free_tgt), len(basis_src), data))
    pieces = [len(b[1]) for b in bases]
    return GradedModulePresentation(CS.k, pieces, action, t_max, verify=t_max <= 6)


def equivariant_betti(TD: TDiagram, t_max: int | None = None, method: str = "auto") -> EquivariantResult:
    t_max = default_t_max(TD) if t_max is None else t_max
    CS = classifying_cosheaf(TD.stabilizers, t_max)
    lims = {deg: derived_limits(F, method) for deg, F in CS.cosheaf.pieces.items()}
    M = limit_module(CS, t_max)
    for t in range(t_max + 1):
        got = lims[2 * t][0] if lims[2 * t] else 0
        if got != M.pieces[t]:
            raise AssertionError(f"lim^0 dimension mismatch in degree {2 * t}: {got} vs {M.pieces[t]}")
    return EquivariantResult(t_max, lims, M)


@dataclass(frozen=True)
class BigradedBettiTable:
    """beta[(i, t)] = dim Tor^{-i,2t}; ``truncated`` marks cells at degree 2*t_max."""

    k: int
    t_max: int
    beta: dict
    truncated: dict

    def nonzero(self) -> dict:
        return {key: v for key, v in self.beta.items() if v}

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "t_max": self.t_max,
            "verified_through_degree": 2 * self.t_max,
            "beta": {f"{-i},{2 * t}": v for (i, t), v in sorted(self.beta.items()) if v},
            "boundary_cells": [f"{-i},{2 * t}" for (i, t), f in sorted(self.truncated.items()) if f and self.beta[(i, t)]],
        }


def bigraded_betti(TD: TDiagram, t_max: int | None = None, module: GradedModulePresentation | None = None) -> BigradedBettiTable:
    t_max = TD.k + TD.base.dim if t_max is None else t_max
    if module is None:
        module = limit_module(classifying_cosheaf(TD.stabilizers, t_max), t_max)
    table = koszul_tor_table(module, t_max)
    truncated = {key: key[1] == t_max for key in table}
    return BigradedBettiTable(TD.k, t_max, table, truncated)


def betti_from_tor(beta: BigradedBettiTable) -> list[int]:
    """b_n = sum over 2t - i = n of beta^{-i,2t} (Eilenberg-Moore collapse)."""
    out: dict[int, int] = {}
    for (i, t), v in beta.beta.items():
        if v:
            out[2 * t - i] = out.get(2 * t - i, 0) + v
    top = max(out, default=-1)
    return [out.get(n, 0) for n in range(top + 1)]


# -- orbit spectral sequence -----------------------------------------------

@dataclass(frozen=True)
class OrbitPage:
    dim: int
    entries: dict  # (s, t) -> dim H^cw_{d-s}(C; H^t(D))
    manifold: bool
    antidiagonal: tuple[int, ...]
    betti: tuple[int, ...] | None
    matches_betti: bool | None

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "entries": {f"{s},{t}": v for (s, t), v in sorted(self.entries.items()) if v},
            "homology_manifold": self.manifold,
            "antidiagonal_sums": list(self.antidiagonal),
            "betti": list(self.betti) if self.betti is not None else None,
            "matches_betti": self.matches_betti,
        }


def orbit_ss_page2(TD: TDiagram, check: bool = True) -> OrbitPage:
    C = TD.base
    d = C.dim
    inc = incidence_assignment(C)
    H = cohomology_cosheaf(TD)
    cw = cellular_homology(C, inc, H)
    entries = {}
    for t, dims in cw.items():
        for i, v in enumerate(dims):
            entries[(d - i, t)] = v
    sums: dict[int, int] = {}
    for (s, t), v in entries.items():
        sums[s + t] = sums.get(s + t, 0) + v
    top = max((n for n, v in sums.items() if v), default=-1)
    anti = tuple(sums.get(n, 0) for n in range(top + 1))
    manifold = bool(is_homology_manifold(C))
    betti = None
    matches = None
    if check and manifold:
        betti = betti_numbers(TD).b
        matches = _trim(betti) == _trim(anti)
    return OrbitPage(d, entries, manifold, anti, betti, matches)


def _trim(seq) -> tuple:
    seq = list(seq)
    while seq and seq[-1] == 0:
        seq.pop()
    return tuple(seq)


# -- identity checks --------------------------------------------------------------

def _acyclicity(lims: dict) -> tuple[bool, list]:
    bad = []
    for deg, dims in sorted(lims.items()):
        for i, v in enumerate(dims):
            if i >= 1 and v:
                bad.append({"degree": deg, "i": i, "dim": v})
    return not bad, bad


def comparison_check(TD: TDiagram, t_max: int | None = None) -> dict[str, Any]:
    """beta^{-i,2t} = dim lim^{t-i} H^t(D), plus lim^i H^j = 0 for i > j."""
    t_max = default_t_max(TD) if t_max is None else t_max
    eq = equivariant_betti(TD, t_max)
    acyclic, bad = _acyclicity(eq.lims)
    beta = bigraded_betti(TD, t_max, module=eq.module)
    lims = lim_table(TD)
    cells = []
    ok = True
    for t in range(t_max + 1):
        for i in range(TD.k + 1):
            b = beta.beta[(i, t)]
            other = lims.get((t - i, t), 0) if t - i >= 0 else 0
            same = b == other
            ok &= same
            if b or other:
                cells.append({"i": i, "t": t, "beta": b, "lim": other, "equal": same})
    below = [{"i": i, "j": j, "dim": v} for (i, j), v in sorted(lims.items()) if i > j]
    return {
        "hypothesis": {
            "acyclic_through_degree": 2 * t_max if acyclic else None,
            "acyclic": acyclic,
            "failures": bad,
        },
        "verified_through_degree": 2 * t_max,
        "cells": cells,
        "comparison_holds": ok,
        "below_diagonal_vanishing": not below,
        "below_diagonal_failures": below,
        "passed": (ok and not below) if acyclic else None,
    }


def cm_check(TD: TDiagram, t_max: int | None = None) -> dict[str, Any]:
    """Cohen-Macaulay criterion: acyclicity of H^*(BS) against cellular vanishing.

    Hypotheses: the base is a homology manifold and rank S(c) - rk c is a
    constant b (b = 0 is strong reducedness; b > 0 covers coskeleta).
    """
    C = TD.base
    t_max = default_t_max(TD) if t_max is None else t_max
    manifold = is_homology_manifold(C)
    shift = orbit_shift(TD)
    hyp = {
        "homology_manifold": bool(manifold),
        "strongly_reduced": is_strongly_reduced(TD),
        "orbit_shift": shift,
        "dimension_matches": shift is not None and C.dim == TD.k - shift,
    }
    if not (hyp["homology_manifold"] and shift is not None):
        return {"hypotheses": hyp, "hypotheses_met": False, "status": "hypotheses not met"}
    d = C.dim
    CS = classifying_cosheaf(TD.stabilizers, t_max)
    lims = {deg: derived_limits(F) for deg, F in CS.cosheaf.pieces.items()}
    acyclic, bad = _acyclicity(lims)
    cw = cellular_homology(C, incidence_assignment(C), CS.cosheaf)
    cw_bad = []
    agree0 = True
    for deg, dims in sorted(cw.items()):
        for i in range(1, d + 1):
            if dims[d - i]:
                cw_bad.append({"degree": deg, "i": i, "dim": dims[d - i]})
        lim0 = lims[deg][0] if lims[deg] else 0
        agree0 &= lim0 == dims[d]
    vanishing = not cw_bad
    return {
        "hypotheses": hyp,
        "hypotheses_met": True,
        "verified_through_degree": 2 * t_max,
        "acyclic": acyclic,
        "acyclicity_failures": bad,
        "cellular_vanishing": vanishing,
        "cellular_failures": cw_bad,
        "lim0_matches_top_cellular": agree0,
        "checks_agree": acyclic == vanishing,
        "cohen_macaulay": acyclic,
        "passed": acyclic == vanishing and agree0,
    }


def ef_check(TD: TDiagram, betti: BettiTable | None = None) -> bool:
    b = betti_numbers(TD).b if betti is None else betti.b
    return all(v == 0 for n, v in enumerate(b) if n % 2)


def euler_h_check(TD: TDiagram) -> dict[str, Any]:
    """b_{2i} against h_{d-i} from the rank counts of the base poset."""
    C = TD.base
    bt = betti_numbers(TD)
    ef = ef_check(TD, bt)
    manifold = bool(is_homology_manifold(C))
    if not (ef and manifold):
        return {"skipped": True, "equivariantly_formal": ef, "homology_manifold": manifold}
    d = C.dim
    fh = f_h_vectors(C)
    rows = []
    ok = True
    for i in range(d + 1):
        b2i = bt.b[2 * i] if 2 * i < len(bt.b) else 0
        h = fh.h[d - i]
        same = b2i == h
        ok &= same
        rows.append({"i": i, "b_2i": b2i, "h_d_minus_i": str(h), "equal": same})
    extra = [n for n, v in enumerate(bt.b) if v and n > 2 * d]
    ok &= not extra
    return {
        "skipped": False,
        "f": list(fh.f),
        "h": [str(x) for x in fh.h],
        "b": list(bt.b),
        "rows": rows,
        "passed": ok,
    }
