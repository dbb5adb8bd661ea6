"""Kernel backend selection.

Prefers the compiled Cython kernels, falling back to the pure-NumPy
implementation.  Override with the environment variable
``SGNSEP_BACKEND=python`` (force fallback) or ``SGNSEP_BACKEND=cython``
(fail loudly if the extension is missing).
"""

import os

_forced = os.environ.get("SGNSEP_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _kernels_py as kernels
elif _forced == "cython":
    from . import _kernels as kernels  # noqa: F401  (ImportError is the point)
elif _forced:
    raise ValueError(f"SGNSEP_BACKEND must be 'cython' or 'python', got {_forced!r}")
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND_NAME
