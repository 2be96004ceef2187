"""One checker per inequality: compute both sides, report the slack.

Registry (each line lhs <= rhs, over square matrices of equal dimension):

    CS_21   |<X,Y>|  <=  norm(X) norm(Y)
    T213    |<X,Y>|^2  <=  <|X*|,|Y*|> <|X|,|Y|>
    T214i   cos(X,Y)^2  <=  cos(|X*|,|Y*|) cos(|X|,|Y|)
    T214ii  |cos(X,Y)|  <=  min(sqrt cos(|X*|,|Y*|), sqrt cos(|X|,|Y|))
    T214iii sin(|X*|,|Y*|)^2 + sin(|X|,|Y|)^2  <=  2 sin(X,Y)^2
    T31     norm(|X*|-|Y*|)^2 + norm(|X|-|Y|)^2  <=  2 norm(X-Y)^2
    C32     norm(|X|-|Y|)  <=  sqrt(2) norm(X-Y)
    R33     norm(|X|-|Y|)  <=  norm(X-Y)            (normal X, Y only)
    T34     norm(X+Y)^2  <=  norm(|X*|+|Y*|) norm(|X|+|Y|)
    T35     norm(|X|-|Y|)^2  <=  norm(X+Y) norm(X-Y)
    L31     nx ny c  <=  c (nx^2+ny^2) - nx ny c^2   with c = cos(|X|,|Y|)
    T36     norm(|X*|+|Y*|)  <=  sqrt(2) norm(|X|+|Y|)
    L32     2 nx ny cos(|X*|,|Y*|)  <=  nx^2 + ny^2 + 4 nx ny cos(|X|,|Y|)
    T37     norm(X+Y)  <=  sqrt((sqrt(2)+1)/2) norm(|X|+|Y|)

Angle-based ids (T214*, L31, L32) require nonzero operands; a zero operand
makes them hold trivially and is reported as such instead of erroring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix_core import ComplexMatrix, ShapeError, digest, trace
from .spectral import abs_adjoint, abs_op, is_psd
from .hs_geometry import cos_angle, hs_inner, hs_norm, sin_angle, angle

SQRT2 = math.sqrt(2.0)
# Sharp coefficient in the sum inequality T37.
SUM_SHARP_CONSTANT = math.sqrt((SQRT2 + 1.0) / 2.0)
# Normality threshold for R33: norm(XX* - X*X) <= NORMALITY_TOL * (1 + norm(X)^2).
NORMALITY_TOL = 1e-10

DEFAULT_CHECK_TOL = 1e-9


class UnknownInequalityError(ValueError):
    """The requested id is not in the registry."""


class NotNormalError(ValueError):
    """R33 was applied to an operand that is not normal."""


class DegenerateIdentityError(ValueError):
    """A product required by the identity vanishes, leaving it undefined."""


@dataclass(frozen=True)
class InequalityReport:
    id: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    scale: float
    operands_digest: str

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "scale": self.scale,
            "operands_digest": self.operands_digest,
        }


def is_normal(x: ComplexMatrix, tol: float = NORMALITY_TOL) -> bool:
    a = x.a
    dev = np.linalg.norm(a @ a.conj().T - a.conj().T @ a)
    return bool(dev <= tol * (1.0 + np.linalg.norm(a) ** 2))


def _abs_cos(x, y):
    return cos_angle(abs_op(x), abs_op(y))


def _abs_adj_cos(x, y):
    return cos_angle(abs_adjoint(x), abs_adjoint(y))


def _sides_cs_21(x, y):
    return abs(hs_inner(x, y)), hs_norm(x) * hs_norm(y)


def _sides_t213(x, y):
    lhs = abs(hs_inner(x, y)) ** 2
    rhs = hs_inner(abs_adjoint(x), abs_adjoint(y)).real * hs_inner(abs_op(x), abs_op(y)).real
    return lhs, rhs


def _sides_t214i(x, y):
    return cos_angle(x, y) ** 2, _abs_adj_cos(x, y) * _abs_cos(x, y)


def _sides_t214ii(x, y):
    # Cosines of PSD pairs are nonnegative; clamp roundoff before the sqrt.
    ca = math.sqrt(max(0.0, _abs_adj_cos(x, y)))
    cb = math.sqrt(max(0.0, _abs_cos(x, y)))
    return abs(cos_angle(x, y)), min(ca, cb)


def _sides_t214iii(x, y):
    lhs = sin_angle(abs_adjoint(x), abs_adjoint(y)) ** 2 + sin_angle(abs_op(x), abs_op(y)) ** 2
    return lhs, 2.0 * sin_angle(x, y) ** 2


def _sides_t31(x, y):
    dif_adj = hs_norm(ComplexMatrix(abs_adjoint(x).a - abs_adjoint(y).a))
    dif = hs_norm(ComplexMatrix(abs_op(x).a - abs_op(y).a))
    return dif_adj**2 + dif**2, 2.0 * hs_norm(ComplexMatrix(x.a - y.a)) ** 2


def _sides_c32(x, y):
    dif = hs_norm(ComplexMatrix(abs_op(x).a - abs_op(y).a))
    return dif, SQRT2 * hs_norm(ComplexMatrix(x.a - y.a))


def _sides_r33(x, y):
    dif = hs_norm(ComplexMatrix(abs_op(x).a - abs_op(y).a))
    return dif, hs_norm(ComplexMatrix(x.a - y.a))


def _sides_t34(x, y):
    lhs = hs_norm(ComplexMatrix(x.a + y.a)) ** 2
    rhs = hs_norm(ComplexMatrix(abs_adjoint(x).a + abs_adjoint(y).a)) * hs_norm(
        ComplexMatrix(abs_op(x).a + abs_op(y).a)
    )
    return lhs, rhs


def _sides_t35(x, y):
    dif = hs_norm(ComplexMatrix(abs_op(x).a - abs_op(y).a))
    return dif**2, hs_norm(ComplexMatrix(x.a + y.a)) * hs_norm(ComplexMatrix(x.a - y.a))


def _sides_l31(x, y):
    nx, ny, c = hs_norm(x), hs_norm(y), _abs_cos(x, y)
    return nx * ny * c, c * (nx * nx + ny * ny) - nx * ny * c * c


def _sides_t36(x, y):
    lhs = hs_norm(ComplexMatrix(abs_adjoint(x).a + abs_adjoint(y).a))
    return lhs, SQRT2 * hs_norm(ComplexMatrix(abs_op(x).a + abs_op(y).a))


def _sides_l32(x, y):
    nx, ny = hs_norm(x), hs_norm(y)
    lhs = 2.0 * nx * ny * _abs_adj_cos(x, y)
    return lhs, nx * nx + ny * ny + 4.0 * nx * ny * _abs_cos(x, y)


def _sides_t37(x, y):
    lhs = hs_norm(ComplexMatrix(x.a + y.a))
    return lhs, SUM_SHARP_CONSTANT * hs_norm(ComplexMatrix(abs_op(x).a + abs_op(y).a))


_REGISTRY = {
    "CS_21": _sides_cs_21,
    "T213": _sides_t213,
    "T214i": _sides_t214i,
    "T214ii": _sides_t214ii,
    "T214iii": _sides_t214iii,
    "T31": _sides_t31,
    "C32": _sides_c32,
    "R33": _sides_r33,
    "T34": _sides_t34,
    "T35": _sides_t35,
    "L31": _sides_l31,
    "T36": _sides_t36,
    "L32": _sides_l32,
    "T37": _sides_t37,
}

INEQUALITY_IDS = tuple(_REGISTRY)

# Ids whose sides involve angles and therefore need nonzero operands.
ANGLE_IDS = frozenset({"T214i", "T214ii", "T214iii", "L31", "L32"})

# Ids restricted to normal operands.
NORMAL_ONLY_IDS = frozenset({"R33"})


def check(
    inequality_id: str, x: ComplexMatrix, y: ComplexMatrix, tol: float = DEFAULT_CHECK_TOL
) -> InequalityReport:
    """Evaluate both sides of the inequality and report the slack.

    holds is slack >= -tol * scale with scale = max(|lhs|, |rhs|, 1); the
    sides grow quadratically with the operand norms, so the test is relative.
    """
    try:
        sides = _REGISTRY[inequality_id]
    except KeyError:
        raise UnknownInequalityError(
            f"unknown inequality id {inequality_id!r}; known: {', '.join(INEQUALITY_IDS)}"
        ) from None
    if not (x.is_square and y.is_square and x.rows == y.rows):
        raise ShapeError(
            f"check requires square matrices of equal dimension, got "
            f"{x.rows}x{x.cols} and {y.rows}x{y.cols}"
        )
    if inequality_id in NORMAL_ONLY_IDS:
        for name, m in (("X", x), ("Y", y)):
            if not is_normal(m):
                raise NotNormalError(f"{inequality_id} requires normal operands; {name} is not")
    dig = digest(x, y)
    if inequality_id in ANGLE_IDS and (hs_norm(x) == 0.0 or hs_norm(y) == 0.0):
        # The angle ids presuppose nonzero operands; with a zero operand the
        # statement holds trivially and there is nothing to compute.
        return InequalityReport(inequality_id, 0.0, 0.0, 0.0, True, 1.0, dig)
    lhs, rhs = sides(x, y)
    lhs, rhs = float(lhs), float(rhs)
    scale = max(abs(lhs), abs(rhs), 1.0)
    slack = rhs - lhs
    return InequalityReport(inequality_id, lhs, rhs, slack, bool(slack >= -tol * scale), scale, dig)


def commutation_identity_residual(x: ComplexMatrix, y: ComplexMatrix, z: ComplexMatrix) -> float:
    """Residual of the exact identity

    norm(XZ-ZY)^2 + norm(X*Z)^2 + norm(ZY*)^2
        = norm(XZ)^2 + norm(ZY)^2 + norm(X*Z-ZY*)^2,

    normalized by 1 + lhs.
    """
    xa, ya, za = x.a, y.a, z.a
    if not (x.is_square and y.is_square and x.rows == z.rows and z.cols == y.rows):
        raise ShapeError("commutation_identity_residual requires conformable square operands")
    xz, zy = xa @ za, za @ ya
    xsz, zys = xa.conj().T @ za, za @ ya.conj().T
    n = np.linalg.norm
    lhs = n(xz - zy) ** 2 + n(xsz) ** 2 + n(zys) ** 2
    rhs = n(xz) ** 2 + n(zy) ** 2 + n(xsz - zys) ** 2
    return abs(lhs - rhs) / (1.0 + lhs)


def adjoint_link_residual(x: ComplexMatrix, y: ComplexMatrix, z: ComplexMatrix) -> float:
    """Residual of  norm(XZ) norm(ZY) cos(XZ,ZY) = norm(X*Z) norm(ZY*) cos(X*Z,ZY*).

    Undefined (raises) when any of the four products vanishes.
    """
    xa, ya, za = x.a, y.a, z.a
    if not (x.is_square and y.is_square and x.rows == z.rows and z.cols == y.rows):
        raise ShapeError("adjoint_link_residual requires conformable square operands")
    prods = {
        "XZ": xa @ za,
        "ZY": za @ ya,
        "X*Z": xa.conj().T @ za,
        "ZY*": za @ ya.conj().T,
    }
    for name, p in prods.items():
        if np.linalg.norm(p) == 0.0:
            raise DegenerateIdentityError(f"product {name} is zero; the identity degenerates")
    m = {k: ComplexMatrix(v) for k, v in prods.items()}
    s1 = hs_norm(m["XZ"]) * hs_norm(m["ZY"]) * cos_angle(m["XZ"], m["ZY"])
    s2 = hs_norm(m["X*Z"]) * hs_norm(m["ZY*"]) * cos_angle(m["X*Z"], m["ZY*"])
    return abs(s1 - s2) / (1.0 + max(abs(s1), abs(s2)))


def angle_triangle_slack(x: ComplexMatrix, y: ComplexMatrix, z: ComplexMatrix):
    """Slacks of the two triangle inequalities through Z.

    Returns (sin-slack, theta-slack):
        sin(X,Z) + sin(Z,Y) - sin(X,Y)  and  theta(X,Z) + theta(Z,Y) - theta(X,Y).
    Both are nonnegative up to roundoff.
    """
    sin_slack = sin_angle(x, z) + sin_angle(z, y) - sin_angle(x, y)
    theta_slack = angle(x, z) + angle(z, y) - angle(x, y)
    return sin_slack, theta_slack


def t213_equality_holds(
    x: ComplexMatrix, y: ComplexMatrix, tol: float = DEFAULT_CHECK_TOL
) -> bool:
    """True iff the T213 bound is attained, i.e. some unimodular multiple of
    Y*X is positive semidefinite.

    A PSD matrix has real nonnegative trace, so the only admissible phase is
    the one making tr(Y*X) real positive; when the trace vanishes, positivity
    forces Y*X = 0.
    """
    if x.a.shape != y.a.shape or not x.is_square:
        raise ShapeError("t213_equality_holds requires square matrices of equal shape")
    p = ComplexMatrix(y.a.conj().T @ x.a)
    t = trace(p)
    if t == 0:
        return hs_norm(p) <= tol * (1.0 + hs_norm(x) * hs_norm(y))
    zeta = t.conjugate() / abs(t)
    return is_psd(ComplexMatrix(zeta * p.a), tol)
