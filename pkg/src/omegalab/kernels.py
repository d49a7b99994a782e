"""Backend selection for the hot elimination kernel.

The compiled Cython extension is used when it was built; otherwise the numpy
implementation takes over.  Setting ``OMEGALAB_PURE=1`` forces the fallback.
"""
import os

from . import _modrank_py

try:
    if os.environ.get("OMEGALAB_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _modrank as _compiled
except ImportError:
    _compiled = None

if _compiled is not None:
    rank_mod_p = _compiled.rank_mod_p
    BACKEND = "cython"
else:
    rank_mod_p = _modrank_py.rank_mod_p
    BACKEND = "python"

# Both primes are below 2**31 so products stay inside int64.
PRIMES = (2147483647, 2147483629)
