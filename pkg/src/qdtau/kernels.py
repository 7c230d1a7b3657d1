"""Backend selector for the evaluation kernels.

Prefers the compiled extension when it is built; set QDTAU_FORCE_PY=1
to force the numpy implementation (used by the backend-equivalence
tests and the benchmark).
"""

import os

if os.environ.get("QDTAU_FORCE_PY") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # compiled extension
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
eval_sheet1 = _impl.eval_sheet1
eval_oncut = _impl.eval_oncut
