"""Selects the F_p elimination kernel at import time.

The compiled kernel is used when it was built; otherwise the pure-Python
fallback is used. Setting DGAHH_PURE_PYTHON=1 forces the fallback.
"""
from __future__ import annotations

import os
from array import array

from . import _fp_python

_compiled = None
if os.environ.get("DGAHH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _fp_kernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

NAME = "cython" if _compiled is not None else "python"


def available_backends():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def pack(vectors):
    """Pack sparse vectors ({index: value} dicts) into CSR arrays."""
    indptr = array("q", [0])
    indices = array("q")
    data = array("q")
    for vec in vectors:
        for j, v in vec.items():
            indices.append(j)
            data.append(v)
        indptr.append(len(indices))
    return indptr, indices, data


def fp_rank_packed(indptr, indices, data, dim, p, which=None):
    which = which or NAME
    if dim == 0 or len(indptr) <= 1:
        return 0
    if which == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not built")
        return _compiled.fp_rank_csr(indptr, indices, data, dim, p)
    return _fp_python.fp_rank_csr(indptr, indices, data, dim, p)


def fp_rank(vectors, dim, p, which=None):
    """Rank over F_p of a list of sparse vectors of length ``dim``."""
    indptr, indices, data = pack([{j: v % p for j, v in vec.items()} for vec in vectors])
    return fp_rank_packed(indptr, indices, data, dim, p, which)
