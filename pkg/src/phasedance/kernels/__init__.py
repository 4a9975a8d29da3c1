"""Hot-kernel backend selection.

The compiled Cython backend is used when it imported successfully; the
numpy backend is the fallback. ``PHASEDANCE_KERNELS`` overrides the
choice: ``c``/``cython`` requires the extension, ``numpy``/``py`` forces
the fallback, anything else (or unset) means auto.
"""

import os

from . import _numpy_backend


def select_backend(forced=None):
    """Resolve the backend module for a given override string."""
    mode = (forced or "auto").strip().lower()
    if mode in ("numpy", "py", "python"):
        return _numpy_backend
    try:
        from . import _ckernels
    except ImportError:
        if mode in ("c", "cython"):
            raise ImportError(
                "PHASEDANCE_KERNELS requested the compiled backend but the "
                "extension is not built; reinstall or set PHASEDANCE_KERNELS=numpy"
            )
        return _numpy_backend
    return _ckernels


backend = select_backend(os.environ.get("PHASEDANCE_KERNELS"))

softmax_lastdim = backend.softmax_lastdim
softmax_lastdim_grad = backend.softmax_lastdim_grad
layernorm_lastdim = backend.layernorm_lastdim
layernorm_lastdim_grad = backend.layernorm_lastdim_grad
smooth_l1_mean = backend.smooth_l1_mean
smooth_l1_mean_grad = backend.smooth_l1_mean_grad
adam_update = backend.adam_update

BACKEND_NAME = backend.NAME
