"""Select the amplitude-kernel implementation at import time.

Prefers the compiled Cython extension and falls back to the numpy
implementation. ``QSEG_BACKEND=python`` (or ``=cython``) forces a choice;
forcing ``cython`` raises if the extension is missing.
"""

import os

_forced = os.environ.get("QSEG_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _kernels_py as kernels
elif _forced == "cython":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND_NAME
