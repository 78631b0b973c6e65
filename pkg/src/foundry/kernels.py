"""Kernel selection: the compiled extension when it is built and
``FOUNDRY_PURE`` is unset, otherwise the pure-Python fallback."""

import os

if os.environ.get("FOUNDRY_PURE"):
    from ._kernels_py import count_minor_bases, subset_ranks

    BACKEND = "python"
else:
    try:
        from ._kernels import count_minor_bases, subset_ranks

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import count_minor_bases, subset_ranks

        BACKEND = "python"

__all__ = ["BACKEND", "count_minor_bases", "subset_ranks"]
