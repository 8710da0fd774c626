"""Kernel backend selection.

The hot inner loops (modular elimination, matrix products, exhaustive minor
checks) exist in two interchangeable implementations:

* ``kernels_numba``: numba ``@njit`` loops, used for moduli below 2**31 where
  a product of two residues fits in int64.
* ``kernels_numpy``: vectorized numpy reference implementation. It also
  handles large moduli (up to 2**61) by switching to object-dtype arrays of
  Python ints, which cannot overflow.

Set ``JPLT_BACKEND=numpy`` to force the fallback, or ``JPLT_BACKEND=numba``
to insist on the compiled path (falls back with a warning if numba is not
importable). ``benchmarks/bench_backends.py`` compares the two.
"""

import os
import warnings

import numpy as np

# Largest modulus whose residue products fit in int64: (p-1)^2 < 2**63.
FAST_MODULUS_BOUND = 1 << 31

_ENV_VAR = "JPLT_BACKEND"
_CHOICES = ("numba", "numpy")

_active = None
_numba_kernels = None
_numba_failed = False


def _initial_choice():
    name = os.environ.get(_ENV_VAR, "").strip().lower()
    if name and name not in _CHOICES:
        raise ValueError(f"{_ENV_VAR} must be one of {_CHOICES}, got {name!r}")
    return name or "numba"


def active_backend():
    """Name of the backend that will serve small-modulus kernels."""
    global _active
    if _active is None:
        _active = _initial_choice()
    return _active


def set_backend(name):
    """Override the backend at runtime ("numba" or "numpy")."""
    global _active
    if name not in _CHOICES:
        raise ValueError(f"backend must be one of {_CHOICES}, got {name!r}")
    _active = name


def _load_numba_kernels():
    global _numba_kernels, _numba_failed
    if _numba_kernels is None and not _numba_failed:
        try:
            from . import kernels_numba
            _numba_kernels = kernels_numba
        except ImportError:
            _numba_failed = True
            warnings.warn("numba is not importable; using the numpy backend")
    return _numba_kernels


def kernels_for(p):
    """Kernel module appropriate for modulus p under the active backend."""
    from . import kernels_numpy

    if p < FAST_MODULUS_BOUND and active_backend() == "numba":
        mod = _load_numba_kernels()
        if mod is not None:
            return mod
    return kernels_numpy


def work_dtype(p):
    """Array dtype for residues mod p: int64 when products fit, else object."""
    return np.int64 if p < FAST_MODULUS_BOUND else object
