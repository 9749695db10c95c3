"""Select the quadrature kernel backend at import time.

The compiled extension ``gpmfix._ckernels`` is used when it was built;
otherwise, or when the environment variable ``GPMFIX_PURE_PYTHON`` is set to a
non-empty value, the numpy implementations in ``gpmfix._kernels_py`` are used.
"""

import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("GPMFIX_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

ivp_convolve = backend.ivp_convolve
periodic_convolve = backend.periodic_convolve

# reference-only variant; numpy in both modes
periodic_convolve_trapezoid = python_backend.periodic_convolve_trapezoid
