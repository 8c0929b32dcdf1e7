"""Backend selection for the modular linear-algebra kernels.

The quantum-torus identity tests evaluate expressions in clock-and-shift
matrix models over a prime field; the hot operations are dense modular
matrix products and Gauss-Jordan inverses.  A numba backend is used when
available; set ``QTEICH_KERNELS=numpy`` to force the pure-numpy fallback
(or ``numba`` to insist on the compiled one).
"""

import os

_choice = os.environ.get("QTEICH_KERNELS", "").strip().lower()

if _choice not in ("", "numpy", "numba"):
    raise RuntimeError(f"QTEICH_KERNELS must be 'numpy' or 'numba', not {_choice!r}")

if _choice == "numpy":
    from . import _numpy as _backend
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _backend
        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import _numpy as _backend
        BACKEND = "numpy"

matmul_mod = _backend.matmul_mod
inv_mod = _backend.inv_mod
matpow_mod = _backend.matpow_mod


def backend_name():
    return BACKEND
