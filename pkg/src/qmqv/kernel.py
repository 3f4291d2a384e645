"""Backend selection for the modular elimination kernel.

The compiled extension is preferred; set ``QMQV_PURE_PYTHON=1`` to force the
interpreted fallback (the benchmark does this to compare the two).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("QMQV_PURE_PYTHON"):
    _impl = None
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = None

BACKEND = "cython" if _impl is not None else "python"
rank_mod_p = _impl.rank_mod_p if _impl is not None else _kernel_py.rank_mod_p
rank_mod_p_python = _kernel_py.rank_mod_p

# Largest prime below 2**31; products of two residues fit in int64.
DEFAULT_PRIME = 2147483647
