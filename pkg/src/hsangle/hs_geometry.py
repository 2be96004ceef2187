"""Hilbert-Schmidt inner product, norm, and the operator angle.

The angle between nonzero X and Y is defined through
``cos = Re<X,Y> / (norm(X) norm(Y))`` with ``<X,Y> = tr(Y*X)``; the sine is
``sqrt(1 - cos^2)``, so it lives in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix_core import ComplexMatrix, ShapeError

DEFAULT_PREDICATE_TOL = 1e-8


class ZeroOperandError(ValueError):
    """An angle was requested for an operand with zero Hilbert-Schmidt norm."""


@dataclass(frozen=True)
class AngleReport:
    """Cosine, sine, inner product and norms for one pair of operators."""

    cos: float
    sin: float
    inner: complex
    norm_x: float
    norm_y: float

    def to_json_dict(self) -> dict:
        return {
            "cos": self.cos,
            "sin": self.sin,
            "inner": {"re": self.inner.real, "im": self.inner.imag},
            "norm_x": self.norm_x,
            "norm_y": self.norm_y,
        }


def hs_inner(x: ComplexMatrix, y: ComplexMatrix) -> complex:
    """<X,Y> = tr(Y*X); conjugate-linear in Y."""
    if x.a.shape != y.a.shape:
        raise ShapeError(
            f"hs_inner requires matching shapes, got {x.rows}x{x.cols} and {y.rows}x{y.cols}"
        )
    return complex(np.trace(y.a.conj().T @ x.a))


def hs_norm(x: ComplexMatrix) -> float:
    """sqrt of the sum of squared entry moduli; zero only for the zero matrix."""
    n = float(np.linalg.norm(x.a))
    if n == 0.0:
        # squared subnormals underflow; rescale so zero detection stays exact
        m = float(np.max(np.abs(x.a)))
        if m > 0.0:
            return m * float(np.linalg.norm(x.a / m))
    return n


def _nonzero_norms(x: ComplexMatrix, y: ComplexMatrix):
    nx, ny = hs_norm(x), hs_norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ZeroOperandError("angle undefined for a zero operand")
    return nx, ny


def cos_angle(x: ComplexMatrix, y: ComplexMatrix) -> float:
    """Re<X,Y>/(norm(X) norm(Y)), clamped into [-1, 1] against roundoff."""
    nx, ny = _nonzero_norms(x, y)
    c = hs_inner(x, y).real / (nx * ny)
    return min(1.0, max(-1.0, c))


def sin_angle(x: ComplexMatrix, y: ComplexMatrix) -> float:
    """sqrt(1 - cos^2), evaluated as the orthogonal-residual norm.

    ||x/nx - cos * y/ny|| equals sqrt(1 - cos^2) exactly, but stays accurate
    to machine precision near parallel pairs, where the naive form bottoms
    out at sqrt(eps) ~ 1e-8.
    """
    nx, ny = _nonzero_norms(x, y)
    c = hs_inner(x, y).real / (nx * ny)
    c = min(1.0, max(-1.0, c))
    return min(1.0, float(np.linalg.norm(x.a / nx - c * (y.a / ny))))


def angle(x: ComplexMatrix, y: ComplexMatrix) -> float:
    """The angle itself, in [0, pi]."""
    return math.acos(cos_angle(x, y))


def angle_report(x: ComplexMatrix, y: ComplexMatrix) -> AngleReport:
    nx, ny = _nonzero_norms(x, y)
    inner = hs_inner(x, y)
    c = min(1.0, max(-1.0, inner.real / (nx * ny)))
    s = min(1.0, float(np.linalg.norm(x.a / nx - c * (y.a / ny))))
    return AngleReport(c, s, inner, nx, ny)


def is_weak_orthogonal(
    x: ComplexMatrix, y: ComplexMatrix, tol: float = DEFAULT_PREDICATE_TOL
) -> bool:
    """True iff |cos| <= tol, i.e. Re<X,Y> vanishes relative to the norms."""
    return abs(cos_angle(x, y)) <= tol


def is_weak_parallel(
    x: ComplexMatrix, y: ComplexMatrix, tol: float = DEFAULT_PREDICATE_TOL
) -> bool:
    """True iff sin <= tol, i.e. cos = +-1 up to tol."""
    return sin_angle(x, y) <= tol


def cosine_expansion(x: ComplexMatrix, y: ComplexMatrix, sign: int) -> float:
    """norm(X)^2 + norm(Y)^2 +- 2 norm(X) norm(Y) cos; equals norm(X +- Y)^2."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    nx, ny = _nonzero_norms(x, y)
    return nx * nx + ny * ny + 2.0 * sign * nx * ny * cos_angle(x, y)
