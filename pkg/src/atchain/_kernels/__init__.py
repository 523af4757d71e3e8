"""Hot permutation-table kernels: compiled core with a NumPy fallback.

The Cython backend is preferred when its extension module is importable;
``ATCHAIN_PURE_PY=1`` forces the pure backend.  Both expose the same four
functions and produce bit-identical tables, which the test suite checks.
"""

import os

if os.environ.get("ATCHAIN_PURE_PY"):
    from . import _pykern as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckern as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _pykern as _impl

        BACKEND = "python"

perm_table = _impl.perm_table
lehmer_codes = _impl.lehmer_codes
rank_perms = _impl.rank_perms
build_tau_tables = _impl.build_tau_tables

__all__ = [
    "BACKEND",
    "perm_table",
    "lehmer_codes",
    "rank_perms",
    "build_tau_tables",
]
