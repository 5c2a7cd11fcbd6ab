"""Kernel backend selection.

The compiled extension is preferred when present; set ``BFREE_PURE=1`` in the
environment to force the pure-Python kernels (used by the benchmark and as a
fallback on installs without a C toolchain).
"""

import os

if os.environ.get("BFREE_PURE"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND: str = kernels.BACKEND_NAME
