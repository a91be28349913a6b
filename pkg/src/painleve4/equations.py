"""Equation right-hand sides, residuals, the conserved constraint, and jet identities.

The toolkit integrates the fourth Painleve equation in the parameter
convention of Ince's canonical form XXXI,

    w'' = w'^2/(2w) + (3/2) w^3 + 4 z w^2 + 2 (z^2 - alpha) w - beta^2/(2w),

together with three more members of the Painleve-Gambier canonical list
that carry their derivatives in the same combination w'' - w'^2/(2w):

    xvii    w'' = w'^2/(2w)
    xxix    w'' = w'^2/(2w) + (3/2) w^3
    xxxii   w'' = (w'^2 - 1)/(2w)

and the square-root companion of the alpha = beta = 0 case,

    sqrt-piv0   4 f'' = f (3 f^2 + 2 t)(f^2 + 2 t).

Multiplying through by 2w and differentiating once removes the 1/w
denominator entirely; for piv the result is

    w''' = {6 w^2 + 12 z w + 4 (z^2 - alpha)} w' + 4 (w + z) w,

which is polynomial in every variable and therefore regular at zeros of w.
That third-order form is what the integrator advances; the second-order
equation survives only as the cleared-denominator residual monitor
`residual2` and the conserved constraint `constraint_c`.

Note on parameters: the ``beta**2`` convention above is Ince's XXXI form.
The standalone Painleve IV convention relabels beta^2 as -2*beta; no
conversion is offered anywhere in this package.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import SingularInput, UnsupportedKind

Scalar = float | complex


class EquationKind(Enum):
    """Selector for the supported equations."""

    PIV = "piv"
    PIV0 = "piv0"
    XVII = "xvii"
    XXIX = "xxix"
    XXXII = "xxxii"
    SQRT_PIV0 = "sqrt-piv0"

    @classmethod
    def from_name(cls, name: str) -> "EquationKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown equation {name!r}; expected one of: {valid}") from None


class ScalarField(Enum):
    """Arithmetic mode: real-line integration or a straight path in the complex plane."""

    REAL = "real"
    COMPLEX = "complex"


#: kinds whose second-order form divides by w
DIVIDES_BY_W = frozenset(
    {EquationKind.PIV, EquationKind.PIV0, EquationKind.XVII, EquationKind.XXIX, EquationKind.XXXII}
)

#: kinds advanced through the third-order system (w, w', w'')
THIRD_ORDER_KINDS = frozenset(
    {EquationKind.PIV, EquationKind.PIV0, EquationKind.XVII, EquationKind.XXIX, EquationKind.XXXII}
)


def is_finite_scalar(x: Scalar) -> bool:
    if isinstance(x, complex):
        return cmath.isfinite(x)
    return math.isfinite(x)


def _check_finite(name: str, x: Scalar) -> None:
    if not is_finite_scalar(x):
        raise ValueError(f"{name} must be finite, got {x!r}")


@dataclass(frozen=True)
class Params:
    """Scalar parameter pair (alpha, beta) of the piv family, beta^2 convention."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        _check_finite("alpha", self.alpha)
        _check_finite("beta", self.beta)


@dataclass(frozen=True)
class Jet2:
    """Point value (z, w, w') of a solution, second derivative not included."""

    z: Scalar
    w: Scalar
    w1: Scalar

    def __post_init__(self):
        for name in ("z", "w", "w1"):
            _check_finite(name, getattr(self, name))


@dataclass(frozen=True)
class Jet3:
    """Point value (z, w, w', w''): the full state of the third-order system.

    The third derivative is never stored; it is recomputed from `rhs3`
    whenever needed.
    """

    z: Scalar
    w: Scalar
    w1: Scalar
    w2: Scalar

    def __post_init__(self):
        for name in ("z", "w", "w1", "w2"):
            _check_finite(name, getattr(self, name))

    def to_jet2(self) -> Jet2:
        return Jet2(self.z, self.w, self.w1)


def ensure_kind_params(kind: EquationKind, p: Params) -> None:
    """Reject nonzero (alpha, beta) for the parameter-free specialisations.

    piv0 is piv at alpha = beta = 0; sqrt-piv0 is derived from piv0 and is
    equally parameter free.
    """
    if kind in (EquationKind.PIV0, EquationKind.SQRT_PIV0):
        if p.alpha != 0.0 or p.beta != 0.0:
            raise ValueError(f"{kind.value} requires alpha = beta = 0, got {p}")


def _rhs2_scalar(kind: EquationKind, p: Params, z: Scalar, w: Scalar, w1: Scalar) -> Scalar:
    if kind is EquationKind.SQRT_PIV0:
        ensure_kind_params(kind, p)
        return w * (3.0 * w * w + 2.0 * z) * (w * w + 2.0 * z) * 0.25
    if w == 0:
        raise SingularInput(f"{kind.value}: w = 0 is outside the second-order form's domain")
    if kind is EquationKind.XVII:
        return w1 * w1 / (2.0 * w)
    if kind is EquationKind.XXIX:
        return w1 * w1 / (2.0 * w) + 1.5 * w ** 3
    if kind is EquationKind.XXXII:
        return (w1 * w1 - 1.0) / (2.0 * w)
    ensure_kind_params(kind, p)
    return (
        w1 * w1 / (2.0 * w)
        + 1.5 * w ** 3
        + 4.0 * z * w * w
        + 2.0 * (z * z - p.alpha) * w
        - p.beta * p.beta / (2.0 * w)
    )


def rhs2(kind: EquationKind, p: Params, j: Jet2 | Jet3) -> Scalar:
    """Second derivative prescribed by the selected second-order equation at j.

    Raises SingularInput when w = 0 for the kinds that divide by w; the
    limit interpretation at zeros belongs to the integrator (via `rhs3`)
    and to the zero classifier, never to this pointwise evaluator.
    """
    return _rhs2_scalar(kind, p, j.z, j.w, j.w1)


def rhs3(kind: EquationKind, p: Params, z: Scalar, w: Scalar, w1: Scalar) -> Scalar:
    """Third derivative of the regularised third-order form; defined for all w.

    piv / piv0:  {6 w^2 + 12 z w + 4 (z^2 - alpha)} w' + 4 (w + z) w
    xxix:        6 w^2 w'
    xvii, xxxii: 0  (2 w w''' = 0 after clearing and differentiating)

    The second derivative does not appear on the right-hand side: it cancels
    when the cleared-denominator form is differentiated.
    """
    if kind is EquationKind.SQRT_PIV0:
        raise UnsupportedKind("sqrt-piv0 is integrated in second-order form only")
    if kind is EquationKind.XXIX:
        return 6.0 * w * w * w1
    if kind in (EquationKind.XVII, EquationKind.XXXII):
        return 0.0 * w
    ensure_kind_params(kind, p)
    return (6.0 * w * w + 12.0 * z * w + 4.0 * (z * z - p.alpha)) * w1 + 4.0 * (w + z) * w


def _piv_poly(alpha: float, beta: float, z: Scalar, w: Scalar, w1: Scalar, w2: Scalar) -> Scalar:
    # shared by constraint_c and residual2(piv) so the two agree bit for bit
    return (
        2.0 * w * w2
        - w1 * w1
        - 3.0 * w ** 4
        - 8.0 * z * w ** 3
        - 4.0 * (z * z - alpha) * w * w
        + beta * beta
    )


def constraint_c(p: Params, j: Jet3) -> Scalar:
    """Conserved constraint C = 2 w w'' - w'^2 - 3 w^4 - 8 z w^3 - 4 (z^2 - alpha) w^2 + beta^2.

    C = 0 exactly characterises jets consistent with the second-order piv
    equation, including the w = 0 limit case where it reduces to
    w'^2 = beta^2.  Along any solution of the third-order form the total
    derivative of C vanishes identically, so C is a first integral of that
    flow whatever its initial value.
    """
    return _piv_poly(p.alpha, p.beta, j.z, j.w, j.w1, j.w2)


def residual2(kind: EquationKind, p: Params, j: Jet3) -> Scalar:
    """Division-free residual of the selected second-order equation at j.

    The equation is multiplied through by 2w (sign convention:
    2w * (LHS - RHS), expanded), so the residual is defined at w = 0 and
    vanishes exactly on solution jets.  For piv it is the same polynomial
    as `constraint_c`.  sqrt-piv0 has no denominator; its residual is
    4 f'' - f (3 f^2 + 2 t)(f^2 + 2 t) with the jet read as (t, f, f', f'').
    """
    z, w, w1, w2 = j.z, j.w, j.w1, j.w2
    if kind in (EquationKind.PIV, EquationKind.PIV0):
        ensure_kind_params(kind, p)
        return _piv_poly(p.alpha, p.beta, z, w, w1, w2)
    if kind is EquationKind.XVII:
        return 2.0 * w * w2 - w1 * w1
    if kind is EquationKind.XXIX:
        return 2.0 * w * w2 - w1 * w1 - 3.0 * w ** 4
    if kind is EquationKind.XXXII:
        return 2.0 * w * w2 - w1 * w1 + 1.0
    return 4.0 * w2 - w * (3.0 * w * w + 2.0 * z) * (w * w + 2.0 * z)


def jet_identities(j: Jet3, w3: Scalar) -> tuple[Scalar, Scalar | None]:
    """Floating-point departure of two differential identities on the jet (j, w3).

    delta1 checks (2 w w'' - w'^2)' = 2 w w''' with the left side expanded
    termwise; delta2 checks the rival identity
    (w'^2 / w)' = (w'/w^2)(2 w w'' - w'^2).  Both are algebraic identities
    in the jet variables, so the returned values are pure rounding noise.

    delta2 requires w != 0; at w = 0 it is returned as None while delta1 is
    still computed.
    """
    w, w1, w2 = j.w, j.w1, j.w2
    expanded1 = 2.0 * w1 * w2 + 2.0 * w * w3 - 2.0 * w1 * w2
    delta1 = expanded1 - 2.0 * w * w3
    if w == 0:
        return delta1, None
    lhs2 = 2.0 * w1 * w2 / w - w1 ** 3 / (w * w)
    rhs2_ = (w1 / (w * w)) * (2.0 * w * w2 - w1 * w1)
    return delta1, lhs2 - rhs2_
