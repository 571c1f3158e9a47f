"""Selects the compiled modular-rank kernel or its pure-Python twin.

Set ``HOCOLIM_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from array import array

from . import _modrank_py

BACKEND = "python"
_compiled = None
if os.environ.get("HOCOLIM_PURE") != "1":
    try:
        from . import _modrank as _compiled  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _compiled = None

# largest prime below 2**31, so products of residues fit in a signed 64-bit int
PRIME = 2147483629


def rank_mod_p(indptr, indices, data, nrows: int, ncols: int, p: int = PRIME, backend: str | None = None) -> int:
    use = backend or BACKEND
    if use == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        return _compiled.rank_mod_p(
            array("q", indptr), array("q", indices), array("q", data), nrows, ncols, p
        )
    return _modrank_py.rank_mod_p(indptr, indices, data, nrows, ncols, p)
