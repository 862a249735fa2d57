"""Kernel backend selection.

The compiled extension is used when it imports; ``QGRAPH_PURE_PYTHON=1``
forces the numpy fallback.  Both expose ``osc_integral``, ``mu_hat_point``,
``mu_hat_grid`` and ``unit_phase_counts``.
"""
import os

from qgraph import _pykernels as python_kernels

compiled_kernels = None
if not os.environ.get("QGRAPH_PURE_PYTHON"):
    try:
        from qgraph import _ckernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
NAME = "cython" if compiled_kernels is not None else "python"


def get(name: str | None = None):
    """Return the kernel module called ``name`` (``"cython"``/``"python"``), or the active one."""
    if name is None:
        return kernels
    if name == "python":
        return python_kernels
    if name == "cython":
        if compiled_kernels is None:
            raise ImportError("compiled kernels are not built")
        return compiled_kernels
    raise ValueError(f"unknown backend {name!r}")
