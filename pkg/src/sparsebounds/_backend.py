"""Select the numerical core at import time.

The compiled ``_core`` extension is used when it was built; otherwise the
numpy ``_fallback`` module. Setting ``SPARSEBOUNDS_PURE_PYTHON=1`` forces the
fallback, which is how the test-suite exercises both paths.
"""
import os

if os.environ.get("SPARSEBOUNDS_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as impl
else:
    try:
        from . import _core as impl
    except ImportError:  # extension not built
        from . import _fallback as impl

NAME = "compiled" if impl.__name__.endswith("_core") else "python"

cross_dot = impl.cross_dot
cross_sqdist = impl.cross_sqdist
sym_dot = impl.sym_dot
sym_sqdist = impl.sym_sqdist
cholesky = impl.cholesky
cho_solve = impl.cho_solve
jacobi = impl.jacobi
