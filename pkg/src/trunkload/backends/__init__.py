"""Kernel backend selection.

The jitted kernels are the default; set ``TRUNKLOAD_PURE_NUMPY=1`` to
force the pure-numpy fallback (or leave numba uninstalled).  Both paths
expose the same functions; ``benchmarks/bench_backends.py`` compares
their throughput.
"""

from __future__ import annotations

import os


def _want_pure_numpy() -> bool:
    return os.environ.get("TRUNKLOAD_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes", "on")


if _want_pure_numpy():
    from . import numpy_kernels as kernels
else:
    try:
        from . import numba_kernels as kernels  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - exercised only without numba
        from . import numpy_kernels as kernels  # type: ignore[no-redef]


def active_backend() -> str:
    """Name of the kernel implementation in use: ``numba`` or ``numpy``."""
    return kernels.NAME


__all__ = ["kernels", "active_backend"]
