"""Hot kernels: the compiled extension when available, pure Python otherwise.

The compiled loops use 64-bit residues, so moduli of 2^62 or more always go
through the Python versions.
"""

from . import _kernels_py

try:
    from . import _kernels as _compiled
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None
    BACKEND = "python"

WORD_LIMIT = 1 << 62


def _pick(modulus):
    return _compiled if _compiled is not None and modulus < WORD_LIMIT else _kernels_py


def pullback_functional(a, b, c, d, phi, w, modulus):
    return _pick(modulus).pullback_functional(a, b, c, d, phi, w, modulus)


def fiber_sum(values, index, nbins, modulus):
    return _pick(modulus).fiber_sum(values, index, nbins, modulus)


def binomial_transport(coeffs, exps, M, modulus):
    return _pick(modulus).binomial_transport(coeffs, exps, M, modulus)


__all__ = ["BACKEND", "WORD_LIMIT", "binomial_transport", "fiber_sum", "pullback_functional"]
