"""Kernel backend selection.

Hot inner loops (element matrix accumulation, ILU(0) factorization and
triangular solves) exist twice: a numba @njit version and a pure-numpy
fallback.  The environment variable ADVREG_BACKEND picks one:

    ADVREG_BACKEND=numpy   force the numpy fallback
    ADVREG_BACKEND=numba   require numba (ImportError if missing)

Unset, numba is used when importable.
"""

import os

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def select_backend(name: str | None = None) -> str:
    """Resolve the backend name, validating against availability."""
    if name is None:
        name = os.environ.get("ADVREG_BACKEND", "").strip().lower()
    if name not in ("", "numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}, expected 'numba' or 'numpy'")
    if name == "numpy":
        return "numpy"
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("ADVREG_BACKEND=numba but numba is not importable")
    return "numba" if HAVE_NUMBA else "numpy"


BACKEND = select_backend()
