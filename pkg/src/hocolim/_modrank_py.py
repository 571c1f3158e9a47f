"""Pure-Python sparse rank modulo a prime.

Mirrors ``_modrank.pyx`` line for line; used when the compiled extension is
unavailable or disabled with ``HOCOLIM_PURE=1``.
"""

from __future__ import annotations

import heapq


def rank_mod_p(indptr, indices, data, nrows: int, ncols: int, p: int) -> int:
    """Rank of a CSR matrix over GF(p).

    Rows are reduced one at a time against pivot rows keyed by their leading
    column; entries of ``data`` must already lie in ``[0, p)``.
    """
    pivots: dict[int, list] = {}
    rank = 0
    for r in range(nrows):
        start, stop = indptr[r], indptr[r + 1]
        if start == stop:
            continue
        acc: dict[int, int] = {}
        heap: list[int] = []
        for k in range(start, stop):
            c = indices[k]
            v = data[k] % p
            if v:
                acc[c] = (acc.get(c, 0) + v) % p
                heapq.heappush(heap, c)
        queued = set(heap)
        while heap:
            c = heapq.heappop(heap)
            queued.discard(c)
            f = acc.pop(c, 0)
            if not f:
                continue
            piv = pivots.get(c)
            if piv is not None:
                cols, vals = piv
                for k in range(1, len(cols)):
                    cc = cols[k]
                    nv = (acc.get(cc, 0) - f * vals[k]) % p
                    if nv:
                        acc[cc] = nv
                    else:
                        acc.pop(cc, None)
                    if cc not in queued:
                        queued.add(cc)
                        heapq.heappush(heap, cc)
                continue
            inv = pow(f, p - 2, p)
            rest = sorted(cc for cc, vv in acc.items() if vv)
            cols = [c] + rest
            vals = [1] + [acc[cc] * inv % p for cc in rest]
            pivots[c] = (cols, vals)
            rank += 1
            break
    return rank
