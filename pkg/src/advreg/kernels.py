"""Dispatch to the selected kernel backend (see backend.py)."""

from types import ModuleType

from .backend import BACKEND


def load_kernels(name: str | None = None) -> ModuleType:
    """Import the kernel module for the given backend name."""
    from . import backend as _backend

    resolved = _backend.select_backend(name)
    if resolved == "numba":
        from . import _kernels_numba as mod
    else:
        from . import _kernels_numpy as mod
    return mod


_mod = load_kernels(BACKEND)
element_blocks = _mod.element_blocks
ilu0_factor = _mod.ilu0_factor
ilu0_solve = _mod.ilu0_solve
