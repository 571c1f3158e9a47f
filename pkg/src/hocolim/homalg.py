"""Exact rational linear algebra, chain complexes and Koszul homology.

Matrices are sparse and immutable, with entries stored as Python ``int`` or
``Fraction``. Ranks are exact. Inside :func:`homology_dims` a rank modulo a
large prime is used as a certified shortcut: for an integer matrix the
rank mod p never exceeds the rank over Q. So whenever the mod-p homology
vanishes at a position, the two adjacent ranks are already exact.
Differentials that remain uncertified are recomputed by exact
fraction-free elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import NotAComplex, TruncationExceeded

__all__ = [
    "RationalMatrix",
    "RationalChainComplex",
    "GradedModulePresentation",
    "rank",
    "rank_mod_p",
    "rank_exact",
    "rref",
    "block_matrix",
    "nullspace",
    "homology_dims",
    "koszul_complex",
    "koszul_tor",
    "koszul_tor_table",
]


def _normalize(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v.numerator)
        return v
    if isinstance(v, int):
        return v
    raise TypeError(f"matrix entries must be int or Fraction, got {type(v).__name__}")


class RationalMatrix:
    """Sparse matrix over Q, stored row-wise."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        self.rows = rows
        self.cols = cols
        data: dict[int, dict[int, object]] = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
                v = _normalize(v)
                if v:
                    data.setdefault(r, {})[c] = v
        self._data = data

    @classmethod
    def from_rows(cls, rows: int, cols: int, row_dicts: Mapping[int, Mapping[int, object]]) -> "RationalMatrix":
        """Trusted fast constructor; zero entries are dropped."""
        m = cls(rows, cols)
        data = {}
        for r, row in row_dicts.items():
            clean = {c: _normalize(v) for c, v in row.items() if v}
            if clean:
                data[r] = clean
        m._data = data
        return m

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]]) -> "RationalMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, {(r, c): v for r, row in enumerate(dense) for c, v in enumerate(row) if v})

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[Sequence]) -> "RationalMatrix":
        return cls(rows, cols, {(int(r), int(c)): Fraction(v) for r, c, v in triplets})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    @property
    def entries(self) -> dict[tuple[int, int], object]:
        return {(r, c): v for r, row in self._data.items() for c, v in row.items()}

    def row(self, r: int) -> dict[int, object]:
        return dict(self._data.get(r, {}))

    def row_items(self):
        return self._data.items()

    def get(self, r: int, c: int):
        return self._data.get(r, {}).get(c, 0)

    def is_zero(self) -> bool:
        return not self._data

    def to_dense(self) -> list[list[object]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def to_triplets(self) -> list[list]:
        return [[r, c, str(v)] for r in sorted(self._data) for c, v in sorted(self._data[r].items())]

    def transpose(self) -> "RationalMatrix":
        t: dict[int, dict[int, object]] = {}
        for r, row in self._data.items():
            for c, v in row.items():
                t.setdefault(c, {})[r] = v
        m = RationalMatrix(self.cols, self.rows)
        m._data = t
        return m

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: dict[int, dict[int, object]] = {}
        odata = other._data
        for r, row in self._data.items():
            acc: dict[int, object] = {}
            for k, a in row.items():
                orow = odata.get(k)
                if orow is None:
                    continue
                for c, b in orow.items():
                    acc[c] = acc.get(c, 0) + a * b
            acc = {c: _normalize(v) for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        m = RationalMatrix(self.rows, other.cols)
        m._data = out
        return m

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = {r: dict(row) for r, row in self._data.items()}
        for r, row in other._data.items():
            tgt = out.setdefault(r, {})
            for c, v in row.items():
                tgt[c] = tgt.get(c, 0) + v
        return RationalMatrix.from_rows(self.rows, self.cols, out)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(self.rows, self.cols, {r: {c: -v for c, v in row.items()} for r, row in self._data.items()})

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def scale(self, s) -> "RationalMatrix":
        return RationalMatrix.from_rows(self.rows, self.cols, {r: {c: v * s for c, v in row.items()} for r, row in self._data.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self._data == other._data

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def apply(self, vec: Mapping[int, object]) -> dict[int, object]:
        """Matrix times a sparse column vector."""
        out: dict[int, object] = {}
        for r, row in self._data.items():
            s = 0
            for c, v in row.items():
                x = vec.get(c)
                if x:
                    s += v * x
            if s:
                out[r] = s
        return out

    def integer_rows(self) -> list[dict[int, int]]:
        """Rows rescaled to primitive integer vectors (same row space)."""
        out = []
        for _, row in sorted(self._data.items()):
            den = 1
            for v in row.values():
                if isinstance(v, Fraction):
                    den = den * v.denominator // gcd(den, v.denominator)
            ir = {c: int(v * den) for c, v in row.items()}
            g = 0
            for v in ir.values():
                g = gcd(g, v)
            if g > 1:
                ir = {c: v // g for c, v in ir.items()}
            out.append(ir)
        return out


def block_matrix(rows: Sequence[int], cols: Sequence[int], blocks: Mapping[tuple[int, int], RationalMatrix]) -> RationalMatrix:
    """Assemble a block matrix from sub-blocks keyed by block position."""
    roff = [0]
    for r in rows:
        roff.append(roff[-1] + r)
    coff = [0]
    for c in cols:
        coff.append(coff[-1] + c)
    data: dict[int, dict[int, object]] = {}
    for (bi, bj), B in blocks.items():
        if B.shape != (rows[bi], cols[bj]):
            raise ValueError(f"block {bi},{bj} has shape {B.shape}, expected {(rows[bi], cols[bj])}")
        r0, c0 = roff[bi], coff[bj]
        for r, row in B.row_items():
            tgt = data.setdefault(r0 + r, {})
            for c, v in row.items():
                tgt[c0 + c] = tgt.get(c0 + c, 0) + v
    return RationalMatrix.from_rows(roff[-1], coff[-1], data)


# -- exact elimination ------------------------------------------------------

def _reduce_against(row: dict[int, int], pivots: dict[int, dict[int, int]]) -> dict[int, int]:
    """Fraction-free reduction of an integer row against echelon pivots."""
    while row:
        c = min(row)
        piv = pivots.get(c)
        if piv is None:
            return row
        a, b = piv[c], row[c]
        g = gcd(a, b)
        a //= g
        b //= g
        new = {k: a * v for k, v in row.items()} if a != 1 else dict(row)
        for k, v in piv.items():
            nv = new.get(k, 0) - b * v
            if nv:
                new[k] = nv
            else:
                new.pop(k, None)
        g = 0
        for v in new.values():
            g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            new = {k: v // g for k, v in new.items()}
        row = new
    return row


def _echelon(int_rows: Iterable[dict[int, int]]) -> dict[int, dict[int, int]]:
    pivots: dict[int, dict[int, int]] = {}
    for row in sorted(int_rows, key=len):
        red = _reduce_against(row, pivots)
        if red:
            pivots[min(red)] = red
    return pivots


def rank_exact(M: RationalMatrix) -> int:
    """Exact rank by sparse fraction-free elimination."""
    if M.is_zero():
        return 0
    rows = M.integer_rows()
    if M.rows > M.cols:
        rows = M.transpose().integer_rows()
    return len(_echelon(rows))


def _csr_mod_p(M: RationalMatrix, p: int):
    # order columns by increasing frequency: sparse columns make good pivots
    freq: dict[int, int] = {}
    int_rows = M.integer_rows()
    for row in int_rows:
        for c in row:
            freq[c] = freq.get(c, 0) + 1
    order = sorted(freq, key=lambda c: (freq[c], c))
    relabel = {c: i for i, c in enumerate(order)}
    int_rows.sort(key=len)
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for row in int_rows:
        for c, v in row.items():
            v %= p
            if v:
                indices.append(relabel[c])
                data.append(v)
        indptr.append(len(indices))
    return indptr, indices, data, len(int_rows), len(order)


def rank_mod_p(M: RationalMatrix, p: int = kernels.PRIME, backend: str | None = None) -> int:
    """Rank of the integer-rescaled matrix over GF(p); a lower bound for the rank over Q."""
    if M.is_zero():
        return 0
    indptr, indices, data, nr, nc = _csr_mod_p(M, p)
    return kernels.rank_mod_p(indptr, indices, data, nr, nc, p, backend=backend)


def rank(M: RationalMatrix) -> int:
    """Exact rank over Q.

    A full-rank answer modulo p is already exact; anything else is
    recomputed by exact elimination.
    """
    if M.is_zero():
        return 0
    rp = rank_mod_p(M)
    if rp == min(M.rows, M.cols):
        return rp
    return rank_exact(M)


def rref(M: RationalMatrix) -> tuple[list[int], dict[int, dict[int, Fraction]]]:
    """Reduced row echelon form: pivot columns and normalised pivot rows."""
    pivots = _echelon(M.integer_rows())
    cols = sorted(pivots)
    reduced: dict[int, dict[int, Fraction]] = {}
    for c in reversed(cols):
        row = pivots[c]
        lead = row[c]
        vec: dict[int, Fraction] = {k: Fraction(v, lead) for k, v in row.items()}
        for k in [k for k in vec if k != c and k in reduced]:
            f = vec.pop(k)
            for kk, vv in reduced[k].items():
                if kk == k:
                    continue
                nv = vec.get(kk, 0) - f * vv
                if nv:
                    vec[kk] = nv
                else:
                    vec.pop(kk, None)
        reduced[c] = vec
    return cols, reduced


def nullspace(M: RationalMatrix) -> tuple[list[int], list[dict[int, object]]]:
    """Kernel basis of ``M`` (acting on column vectors).

    Returns the free columns and one basis vector per free column; the basis
    vector for free column ``f`` is 1 at ``f`` and 0 at the other free
    columns, so the coordinates of any kernel vector are its values at the
    free columns.
    """
    pcols, red = rref(M)
    pset = set(pcols)
    free = [c for c in range(M.cols) if c not in pset]
    by_col: dict[int, list[tuple[int, Fraction]]] = {}
    for pc, row in red.items():
        for c, v in row.items():
            if c != pc:
                by_col.setdefault(c, []).append((pc, v))
    basis = []
    for f in free:
        vec: dict[int, object] = {f: 1}
        for pc, v in by_col.get(f, ()):
            vec[pc] = _normalize(-v)
        basis.append(vec)
    return free, basis


# -- chain complexes --------------------------------------------------------

@dataclass(frozen=True)
class RationalChainComplex:
    """Finite complex of Q-vector spaces.

    ``differentials[i]`` connects positions ``i`` and ``i+1``: for a
    ``"cochain"`` complex it maps position i to i+1 (shape dims[i+1] x dims[i]);
    for a ``"chain"`` complex it maps position i+1 to i (shape dims[i] x dims[i+1]).
    """

    dims: tuple[int, ...]
    differentials: tuple[RationalMatrix, ...]
    direction: str = "cochain"
    verify: bool = field(default=True, compare=False)

    def __init__(self, dims: Sequence[int], differentials: Sequence[RationalMatrix], direction: str = "cochain", verify: bool = True):
        if direction not in ("cochain", "chain"):
            raise ValueError("direction must be 'cochain' or 'chain'")
        dims = tuple(int(d) for d in dims)
        diffs = tuple(differentials)
        if len(diffs) != max(len(dims) - 1, 0):
            raise ValueError("need exactly one differential between consecutive positions")
        for i, d in enumerate(diffs):
            want = (dims[i + 1], dims[i]) if direction == "cochain" else (dims[i], dims[i + 1])
            if d.shape != want:
                raise ValueError(f"differential {i} has shape {d.shape}, expected {want}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "differentials", diffs)
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "verify", verify)
        if verify:
            for i in range(len(diffs) - 1):
                prod = diffs[i + 1] @ diffs[i] if direction == "cochain" else diffs[i] @ diffs[i + 1]
                if not prod.is_zero():
                    raise NotAComplex(f"d o d != 0 between positions {i} and {i + 2}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * d for i, d in enumerate(self.dims))


def _certified_ranks(mats: Sequence[RationalMatrix], dims: Sequence[int]) -> list[int]:
    rp = [rank_mod_p(m) for m in mats]
    n = len(dims)
    certified = [r == min(m.shape) for r, m in zip(rp, mats)]
    for i in range(n):
        r_in = rp[i - 1] if i >= 1 else 0
        r_out = rp[i] if i < len(mats) else 0
        if dims[i] - r_in - r_out == 0:
            if i >= 1:
                certified[i - 1] = True
            if i < len(mats):
                certified[i] = True
    return [r if ok else rank_exact(m) for r, ok, m in zip(rp, certified, mats)]


def homology_dims(K: RationalChainComplex) -> list[int]:
    """Exact dimension of homology at every position."""
    ranks = _certified_ranks(K.differentials, K.dims)
    out = []
    for i, d in enumerate(K.dims):
        r_in = ranks[i - 1] if i >= 1 else 0
        r_out = ranks[i] if i < len(ranks) else 0
        out.append(d - r_in - r_out)
    return out


# -- graded modules and Koszul homology -------------------------------------

@dataclass(frozen=True)
class GradedModulePresentation:
    """A graded module over Q[x_1..x_k] with deg x_g = 2, truncated at 2*t_max.

    ``pieces[t]`` is the dimension in degree 2t; ``action[g][t]`` is the
    matrix of multiplication by x_g from degree 2t to 2t+2 (defined for
    ``t < t_max``).
    """

    k: int
    pieces: tuple[int, ...]
    action: tuple[tuple[RationalMatrix, ...], ...]
    t_max: int

    def __init__(self, k: int, pieces: Sequence[int], action: Sequence[Sequence[RationalMatrix]], t_max: int | None = None, verify: bool = True):
        pieces = tuple(int(p) for p in pieces)
        t_max = len(pieces) - 1 if t_max is None else t_max
        if len(pieces) != t_max + 1:
            raise ValueError("pieces must list dimensions for t = 0..t_max")
        action = tuple(tuple(a) for a in action)
        if len(action) != k:
            raise ValueError("need one action list per generator")
        for g, mats in enumerate(action):
            if len(mats) != t_max:
                raise ValueError(f"generator {g}: need action matrices for t = 0..t_max-1")
            for t, m in enumerate(mats):
                if m.shape != (pieces[t + 1], pieces[t]):
                    raise ValueError(f"generator {g}, t={t}: shape {m.shape} != {(pieces[t + 1], pieces[t])}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "t_max", t_max)
        if verify:
            for t in range(t_max - 1):
                for a in range(k):
                    for b in range(a + 1, k):
                        if action[b][t + 1] @ action[a][t] != action[a][t + 1] @ action[b][t]:
                            raise ValueError(f"actions of generators {a} and {b} do not commute at t={t}")

    def dim(self, t: int) -> int:
        if t < 0:
            return 0
        if t > self.t_max:
            raise TruncationExceeded(f"degree {2 * t} lies beyond the truncation 2*t_max = {2 * self.t_max}")
        return self.pieces[t]

    @classmethod
    def ground_field(cls, k: int, t_max: int) -> "GradedModulePresentation":
        pieces = [1] + [0] * t_max
        action = [[RationalMatrix(pieces[t + 1], pieces[t]) for t in range(t_max)] for _ in range(k)]
        return cls(k, pieces, action, t_max)

    @classmethod
    def polynomial_ring(cls, k: int, t_max: int) -> "GradedModulePresentation":
        """The free module Q[x_1..x_k] in the monomial basis."""
        from .toric import monomials

        bases = [monomials(k, t) for t in range(t_max + 1)]
        index = [{m: i for i, m in enumerate(b)} for b in bases]
        action = []
        for g in range(k):
            mats = []
            for t in range(t_max):
                ent = {}
                for i, mono in enumerate(bases[t]):
                    up = list(mono)
                    up[g] += 1
                    ent[(index[t + 1][tuple(up)], i)] = 1
                mats.append(RationalMatrix(len(bases[t + 1]), len(bases[t]), ent))
            action.append(mats)
        return cls(k, [len(b) for b in bases], action, t_max)


def koszul_complex(M: GradedModulePresentation, t: int) -> RationalChainComplex:
    """Koszul complex of ``M`` in internal degree 2t, as a chain complex.

    Position p holds Lambda^p(Q^k) (x) M_{2(t-p)}, with
    d(e_J (x) m) = sum_a (-1)^a e_{J - j_a} (x) x_{j_a} m  (a counted from 0).
    """
    if t > M.t_max:
        raise TruncationExceeded(f"degree {2 * t} lies beyond the truncation 2*t_max = {2 * M.t_max}")
    k = M.k
    subsets = [list(combinations(range(k), p)) for p in range(k + 1)]
    sub_index = [{J: i for i, J in enumerate(s)} for s in subsets]
    dims = []
    for p in range(k + 1):
        dims.append(len(subsets[p]) * M.dim(t - p) if t - p >= 0 else 0)
    diffs = []
    for p in range(k):
        # d: position p+1 -> p
        src_deg = t - p - 1
        rows_dim = dims[p]
        cols_dim = dims[p + 1]
        data: dict[int, dict[int, object]] = {}
        if cols_dim and rows_dim:
            mdim_src = M.dim(src_deg)
            mdim_tgt = M.dim(src_deg + 1)
            for jcol, J in enumerate(subsets[p + 1]):
                for a, g in enumerate(J):
                    sign = -1 if a % 2 else 1
                    jrow = sub_index[p][J[:a] + J[a + 1:]]
                    act = M.action[g][src_deg]
                    for r, row in act.row_items():
                        tgt = data.setdefault(jrow * mdim_tgt + r, {})
                        for c, v in row.items():
                            key = jcol * mdim_src + c
                            nv = tgt.get(key, 0) + sign * v
                            if nv:
                                tgt[key] = nv
                            else:
                                tgt.pop(key, None)
        diffs.append(RationalMatrix.from_rows(rows_dim, cols_dim, data))
    return RationalChainComplex(dims, diffs, direction="chain")


def koszul_tor(M: GradedModulePresentation, i: int, t: int) -> int:
    """dim Tor^{-i,2t}(M, Q) over Q[x_1..x_k]."""
    if not 0 <= i <= M.k:
        raise ValueError(f"homological degree {i} outside 0..{M.k}")
    return homology_dims(koszul_complex(M, t))[i]


def koszul_tor_table(M: GradedModulePresentation, t_max: int | None = None) -> dict[tuple[int, int], int]:
    """All Tor^{-i,2t} for 0 <= i <= k and 0 <= t <= t_max."""
    t_max = M.t_max if t_max is None else t_max
    out = {}
    for t in range(t_max + 1):
        h = homology_dims(koszul_complex(M, t))
        for i, v in enumerate(h):
            out[(i, t)] = v
    return out


def exterior_dim(k: int, j: int) -> int:
    return comb(k, j) if 0 <= j <= k else 0
