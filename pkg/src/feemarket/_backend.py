"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled kernels are used when the extension built; set
FEEMARKET_PURE_PYTHON=1 to force the numpy fallback. Both expose the same
functions and produce bit-identical floats.
"""

import os

if os.environ.get("FEEMARKET_PURE_PYTHON", "") not in ("", "0"):
    from feemarket import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from feemarket import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from feemarket import _kernels_py as kernels

        BACKEND = "python"


def backend_name() -> str:
    return BACKEND
