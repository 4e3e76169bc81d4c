"""Backend selection for the word-scan kernels.

The compiled extension is used when it was built and the inputs fit in
64-bit arithmetic; otherwise the pure-Python module is used.  Setting
``ULTRAPARADOX_PURE=1`` forces the pure-Python path.
"""

from __future__ import annotations

import os

from . import _kernels_py

_compiled = None
if os.environ.get("ULTRAPARADOX_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_LIMIT = 1 << 62


def _norm(M) -> int:
    # max absolute row sum; submultiplicative, bounds every entry of a product
    return max(abs(r[0]) + abs(r[1]) for r in M)


def fits_int64(A, B, maxlen: int) -> bool:
    """True when every entry of every product of length <= maxlen fits in int64."""
    for M in (A, B):
        if not all(isinstance(x, int) for r in M for x in r):
            return False
    # inverses of unimodular matrices have the same row-sum bound up to a transpose
    cols = lambda M: max(abs(M[0][j]) + abs(M[1][j]) for j in range(2))  # noqa: E731
    m = max(_norm(A), _norm(B), cols(A), cols(B), 1)
    return 2 * m ** max(maxlen, 1) < _LIMIT


def _as_int_pair(A, B):
    return (tuple(tuple(int(x) for x in r) for r in A),
            tuple(tuple(int(x) for x in r) for r in B))


def _pick(A, B, maxlen, backend):
    if backend == "python" or _compiled is None:
        return _kernels_py
    if not fits_int64(A, B, maxlen):
        if backend == "cython":
            raise OverflowError("entries may exceed 64 bits; use the python backend")
        return _kernels_py
    return _compiled


def trace_scan(A, B, maxlen: int, targets=(2, -2), backend: str | None = None):
    """Scan all nonidentity words of length <= maxlen over unimodular integer A, B.

    Returns (number of words scanned, words whose trace lies in ``targets``),
    the witnesses in depth-first lexicographic order.
    """
    A, B = _as_int_pair(A, B)
    return _pick(A, B, maxlen, backend).trace_scan(A, B, maxlen, tuple(targets))


def level_traces(A, B, maxlen: int, backend: str | None = None) -> list[int]:
    """Traces of rho(w) for every reduced w of length <= maxlen, in enumeration order."""
    A, B = _as_int_pair(A, B)
    return list(_pick(A, B, maxlen, backend).level_traces(A, B, maxlen))
