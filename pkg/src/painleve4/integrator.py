"""Adaptive explicit integration of the third-order systems with dense output.

All kinds except sqrt-piv0 advance the state (w, w', w'') whose derivative
is (w', w'', rhs3); sqrt-piv0 advances (f, f') with (f', rhs2).  Both real
and complex trajectories are parametrised by a real arc parameter s >= 0
along z(s) = z0 + s*d where d is +-1 on the real line and a unit complex
direction otherwise, so a single code path serves both modes.

The stepper is the classic Dormand-Prince 5(4) embedded pair.  Dense output
is not taken from the pair: node jets already carry (w, w', w''), so a
two-point quintic Hermite interpolant between accepted nodes reproduces the
solution to the same order and is exact on quadratics.
"""

import logging
from dataclasses import dataclass
from enum import Enum

from .equations import (
    EquationKind,
    Jet2,
    Jet3,
    Params,
    Scalar,
    ScalarField,
    constraint_c,
    ensure_kind_params,
    is_finite_scalar,
    residual2,
    rhs3,
    _rhs2_scalar,
)
from .errors import InvalidInitialData, NonFiniteState, OutOfSpan

logger = logging.getLogger(__name__)

# Dormand-Prince 5(4) tableau; E = b5 - b4 gives the embedded error weights.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# PI controller exponents for a 5th-order propagator
_PI_ALPHA = 0.7 / 5.0
_PI_BETA = 0.4 / 5.0

_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class Tolerances:
    """Step control and termination thresholds."""

    rel: float = 1e-10
    abs: float = 1e-10
    h_init: float = 1e-3
    h_min: float = 1e-12
    pole_cutoff: float = 1e8

    def __post_init__(self):
        if not (self.rel >= 1e-14):
            raise ValueError(f"rel: must be >= 1e-14, got {self.rel}")
        if not (self.abs >= 1e-14):
            raise ValueError(f"abs: must be >= 1e-14, got {self.abs}")
        if not (0 < self.h_min < self.h_init):
            raise ValueError(f"h_min: need 0 < h_min < h_init, got {self.h_min} vs {self.h_init}")
        if not (self.pole_cutoff >= 1e3):
            raise ValueError(f"pole_cutoff: must be >= 1e3, got {self.pole_cutoff}")


def _as_real(name: str, x) -> float:
    if isinstance(x, complex):
        raise InvalidInitialData(f"{name}: REAL mode rejects complex values, got {x!r}")
    return float(x)


@dataclass(frozen=True)
class InitialData:
    """Initial data in one of three modes.

    nonzero(w0 != 0, w1):  w'' is completed from the second-order equation,
        which guarantees C = 0.
    zero(branch, w2):      w = 0 seed for piv/piv0; the slope is forced to
        branch * beta, the only value compatible with the equation, and w''
        is free.  C = 0 automatically.
    raw(w0, w1, w2):       unconstrained jet, for general third-order
        experiments including C != 0 ones.
    """

    z0: Scalar
    mode: str  # "nonzero" | "zero" | "raw"
    w0: Scalar | None = None
    w1_0: Scalar | None = None
    w2_0: Scalar | None = None
    branch: int | None = None
    field: ScalarField = ScalarField.REAL
    direction: Scalar = 1.0

    def __post_init__(self):
        if self.mode not in ("nonzero", "zero", "raw"):
            raise InvalidInitialData(f"mode: unknown initial-data mode {self.mode!r}")
        if self.mode == "nonzero":
            if self.w0 == 0 or self.w0 is None:
                raise InvalidInitialData("w0: nonzero mode requires w0 != 0")
        if self.mode == "zero":
            if self.branch not in (+1, -1):
                raise InvalidInitialData(f"branch: must be +1 or -1, got {self.branch!r}")
        if self.field is ScalarField.REAL:
            for name in ("z0", "w0", "w1_0", "w2_0"):
                value = getattr(self, name)
                if isinstance(value, complex):
                    raise InvalidInitialData(f"{name}: REAL mode rejects complex values")
        else:
            if abs(abs(complex(self.direction)) - 1.0) > 1e-12:
                raise InvalidInitialData(
                    f"direction: COMPLEX mode needs a unit direction, |d| = {abs(complex(self.direction))!r}"
                )

    @classmethod
    def nonzero(cls, z0, w0, w1, field=ScalarField.REAL, direction=1.0) -> "InitialData":
        return cls(z0, "nonzero", w0=w0, w1_0=w1, field=field, direction=direction)

    @classmethod
    def zero(cls, z0, branch, w2, field=ScalarField.REAL, direction=1.0) -> "InitialData":
        return cls(z0, "zero", w2_0=w2, branch=branch, field=field, direction=direction)

    @classmethod
    def raw(cls, z0, w0, w1, w2, field=ScalarField.REAL, direction=1.0) -> "InitialData":
        return cls(z0, "raw", w0=w0, w1_0=w1, w2_0=w2, field=field, direction=direction)


class TrajectoryStatus(Enum):
    COMPLETED = "completed"
    POLE = "pole"
    STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class TrajectoryNode:
    """One accepted integration node with step metadata and monitor values."""

    jet: Jet3
    h: float
    err_est: float
    c: Scalar
    res2: Scalar
    s: float


@dataclass(frozen=True)
class Trajectory:
    """Ordered accepted nodes of one integration, plus terminal status."""

    kind: EquationKind
    params: Params
    field: ScalarField
    direction: Scalar
    tol: Tolerances
    nodes: tuple[TrajectoryNode, ...]
    status: TrajectoryStatus
    pole_estimate: Scalar | None = None

    @property
    def z0(self) -> Scalar:
        return self.nodes[0].jet.z

    @property
    def span(self) -> float:
        """Covered arc length along the path parameter."""
        return self.nodes[-1].s

    def max_abs_w(self) -> float:
        return max(abs(n.jet.w) for n in self.nodes)

    def jets(self) -> tuple[Jet3, ...]:
        return tuple(n.jet for n in self.nodes)


def complete_initial_data(kind: EquationKind, p: Params, init: InitialData) -> Jet3:
    """Fill in the jet entries the equation determines; pass raw data through.

    For sqrt-piv0 the second derivative is never free data: it is always
    recomputed from the equation, also in raw mode.
    """
    ensure_kind_params(kind, p)
    if init.field is ScalarField.COMPLEX:
        z0 = complex(init.z0)
        conv = complex
    else:
        z0 = _as_real("z0", init.z0)
        conv = float

    if init.mode == "zero":
        if kind not in (EquationKind.PIV, EquationKind.PIV0):
            raise InvalidInitialData(f"zero-branch: zero mode is only valid for piv/piv0, not {kind.value}")
        return Jet3(z0, conv(0.0), conv(init.branch * p.beta), conv(init.w2_0 if init.w2_0 is not None else 0.0))

    w0 = conv(init.w0 if init.w0 is not None else 0.0)
    w1 = conv(init.w1_0 if init.w1_0 is not None else 0.0)
    if init.mode == "nonzero":
        w2 = _rhs2_scalar(kind, p, z0, w0, w1)
        return Jet3(z0, w0, w1, w2)

    # raw
    if kind is EquationKind.SQRT_PIV0:
        w2 = _rhs2_scalar(kind, p, z0, w0, w1)
    else:
        w2 = conv(init.w2_0 if init.w2_0 is not None else 0.0)
    return Jet3(z0, w0, w1, w2)


def _make_deriv(kind: EquationKind, p: Params, z0: Scalar, d: Scalar):
    """Derivative of the advanced state with respect to the arc parameter s."""
    if kind is EquationKind.SQRT_PIV0:

        def deriv(s, y):
            t = z0 + s * d
            return (d * y[1], d * _rhs2_scalar(kind, p, t, y[0], y[1]))

        return deriv

    def deriv(s, y):
        z = z0 + s * d
        return (d * y[1], d * y[2], d * rhs3(kind, p, z, y[0], y[1]))

    return deriv


def _rk_stages(deriv, s: float, y: tuple, h: float):
    """One Dormand-Prince evaluation: returns (y5, error_components) or None on a non-finite stage."""
    k = [deriv(s, y)]
    n = len(y)
    for i in range(1, 7):
        a = _A[i]
        yi = tuple(y[j] + h * sum(a[m] * k[m][j] for m in range(i)) for j in range(n))
        if not all(is_finite_scalar(v) for v in yi):
            return None
        k.append(deriv(s + _C[i] * h, yi))
    y_new = tuple(y[j] + h * sum(_B5[m] * k[m][j] for m in range(7)) for j in range(n))
    err = tuple(h * sum(_E[m] * k[m][j] for m in range(7)) for j in range(n))
    if not all(is_finite_scalar(v) for v in y_new):
        return None
    return y_new, err


def _mixed_norm(err, y_old, y_new, tol: Tolerances) -> float:
    """max over components of |e_i| / (abs + rel * |y_i|)."""
    worst = 0.0
    for e, a, b in zip(err, y_old, y_new):
        scale = tol.abs + tol.rel * max(abs(a), abs(b))
        worst = max(worst, abs(e) / scale)
    return worst


def step(
    kind: EquationKind,
    p: Params,
    j: Jet3,
    h: float,
    tol: Tolerances = Tolerances(),
) -> tuple[Jet3, float]:
    """One explicit embedded Runge-Kutta step of the advanced system from jet j.

    h is a signed real step in z (the path direction is sign(h); complex jet
    entries are allowed).  Returns the new jet and the embedded error
    estimate in the mixed norm.  Raises NonFiniteState if any advanced
    component leaves the finite range.
    """
    if h == 0:
        raise ValueError("h: step size must be nonzero")
    d = 1.0 if h > 0 else -1.0
    if kind is EquationKind.SQRT_PIV0:
        y = (j.w, j.w1)
    else:
        y = (j.w, j.w1, j.w2)
    deriv = _make_deriv(kind, p, j.z, d)
    out = _rk_stages(deriv, 0.0, y, abs(h))
    if out is None:
        raise NonFiniteState(f"non-finite state advancing from z = {j.z!r} with h = {h!r}")
    y_new, err = out
    z_new = j.z + abs(h) * d
    if kind is EquationKind.SQRT_PIV0:
        jet = Jet3(z_new, y_new[0], y_new[1], _rhs2_scalar(kind, p, z_new, y_new[0], y_new[1]))
    else:
        jet = Jet3(z_new, y_new[0], y_new[1], y_new[2])
    return jet, _mixed_norm(err, y, y_new, tol)


def _pole_extrapolate(n_prev: TrajectoryNode, n_last: TrajectoryNode) -> Scalar:
    """Linear extrapolation of 1/w from the last two nodes to 1/w = 0."""
    z1, w1 = n_prev.jet.z, n_prev.jet.w
    z2, w2 = n_last.jet.z, n_last.jet.w
    if w1 == 0 or w2 == 0:
        return z2
    u1, u2 = 1.0 / w1, 1.0 / w2
    if u2 == u1:
        return z2
    slope = (u2 - u1) / (z2 - z1)
    return z2 - u2 / slope


def integrate(
    kind: EquationKind,
    p: Params,
    init: InitialData,
    span: float,
    tol: Tolerances = Tolerances(),
) -> Trajectory:
    """Adaptive accept/reject integration over a path of length |span|.

    REAL mode integrates from z0 to z0 + span (span may be negative);
    COMPLEX mode walks the straight path z = z0 + s * direction for
    s in [0, span] with span > 0.  Every accepted node records the
    constraint value C and the division-free residual of the selected
    second-order equation.

    Termination:
      COMPLETED       the requested span was covered,
      POLE(z_est)     |w| exceeded pole_cutoff; z_est extrapolates 1/w -> 0
                      linearly from the last two accepted nodes,
      STEP_UNDERFLOW  the controller pushed h below h_min.

    A state that turns non-finite while |w| was growing is classified as
    POLE, otherwise as STEP_UNDERFLOW.
    """
    ensure_kind_params(kind, p)
    if not (span != 0 and is_finite_scalar(span) and not isinstance(span, complex)):
        raise ValueError(f"span: must be a nonzero finite real, got {span!r}")
    if kind is EquationKind.SQRT_PIV0 and init.field is ScalarField.COMPLEX:
        raise InvalidInitialData("field: sqrt-piv0 is restricted to REAL mode")
    if init.field is ScalarField.COMPLEX:
        if span < 0:
            raise ValueError("span: COMPLEX paths use span > 0 with a direction vector")
        d: Scalar = complex(init.direction)
    else:
        d = 1.0 if span > 0 else -1.0

    j0 = complete_initial_data(kind, p, init)
    total = abs(span)
    second_order = kind is EquationKind.SQRT_PIV0
    y = (j0.w, j0.w1) if second_order else (j0.w, j0.w1, j0.w2)
    deriv = _make_deriv(kind, p, j0.z, d)

    def make_node(jet: Jet3, h: float, err: float, s: float) -> TrajectoryNode:
        return TrajectoryNode(jet, h, err, constraint_c(p, jet), residual2(kind, p, jet), s)

    nodes = [make_node(j0, 0.0, 0.0, 0.0)]
    status = TrajectoryStatus.COMPLETED
    pole_estimate: Scalar | None = None

    s = 0.0
    h = min(tol.h_init, total)
    err_prev = 1.0
    rejected = False
    nonfinite = False
    n_steps = 0

    def growing() -> bool:
        return len(nodes) >= 2 and abs(nodes[-1].jet.w) > abs(nodes[-2].jet.w)

    while total - s > tol.h_min:
        n_steps += 1
        if n_steps > _MAX_STEPS:
            raise RuntimeError(f"step budget exceeded after {len(nodes)} nodes at s = {s}")
        if h < tol.h_min:
            # a non-finite state on a growing |w| is a pole the cutoff missed
            if nonfinite and growing():
                status = TrajectoryStatus.POLE
                if len(nodes) >= 2:
                    pole_estimate = _pole_extrapolate(nodes[-2], nodes[-1])
                else:
                    pole_estimate = nodes[-1].jet.z
            else:
                status = TrajectoryStatus.STEP_UNDERFLOW
            break
        hit_end = h >= total - s
        if hit_end:
            h = total - s
        out = _rk_stages(deriv, s, y, h)
        if out is None:
            h *= _MIN_FACTOR
            rejected = True
            nonfinite = True
            continue
        y_new, err_vec = out
        err = _mixed_norm(err_vec, y, y_new, tol)
        if err > 1.0:
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-0.2))
            rejected = True
            nonfinite = False
            continue

        # accepted
        s_new = total if hit_end else s + h
        z_new = j0.z + s_new * d
        if second_order:
            jet = Jet3(z_new, y_new[0], y_new[1], _rhs2_scalar(kind, p, z_new, y_new[0], y_new[1]))
        else:
            jet = Jet3(z_new, y_new[0], y_new[1], y_new[2])

        if abs(jet.w) > tol.pole_cutoff:
            status = TrajectoryStatus.POLE
            if len(nodes) >= 2:
                pole_estimate = _pole_extrapolate(nodes[-2], nodes[-1])
            else:
                pole_estimate = _pole_extrapolate(nodes[-1], make_node(jet, h, err, s_new))
            break

        nodes.append(make_node(jet, h, err, s_new))
        if hit_end:
            break

        if err == 0.0:
            factor = _MAX_FACTOR
        else:
            factor = _SAFETY * err ** (-_PI_ALPHA) * max(err_prev, 1e-16) ** _PI_BETA
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        if rejected:
            factor = min(1.0, factor)
        h *= factor
        err_prev = max(err, 1e-16)
        rejected = False
        nonfinite = False
        s, y = s_new, y_new

    logger.debug(
        "integrate %s: %d nodes, status %s, span %.6g of %.6g",
        kind.value,
        len(nodes),
        status.value,
        nodes[-1].s,
        total,
    )
    return Trajectory(kind, p, init.field, d, tol, tuple(nodes), status, pole_estimate)


def _hermite_quintic(n0: TrajectoryNode, n1: TrajectoryNode, d: Scalar, s: float) -> Jet3:
    """Two-point quintic Hermite through (w, w', w'') at the bracketing nodes."""
    h = n1.s - n0.s
    theta = (s - n0.s) / h
    j0, j1 = n0.jet, n1.jet
    # arc-parameter derivatives: dw/ds = d * w', d2w/ds2 = d^2 * w''
    c0 = j0.w
    c1 = h * (d * j0.w1)
    c2 = 0.5 * h * h * (d * d * j0.w2)
    ra = j1.w - c0 - c1 - c2
    rb = h * (d * j1.w1) - c1 - 2.0 * c2
    rc = h * h * (d * d * j1.w2) - 2.0 * c2
    c3 = 10.0 * ra - 4.0 * rb + 0.5 * rc
    c4 = -15.0 * ra + 7.0 * rb - rc
    c5 = 6.0 * ra - 3.0 * rb + 0.5 * rc
    w = c0 + theta * (c1 + theta * (c2 + theta * (c3 + theta * (c4 + theta * c5))))
    dw = c1 + theta * (2.0 * c2 + theta * (3.0 * c3 + theta * (4.0 * c4 + theta * 5.0 * c5)))
    d2w = 2.0 * c2 + theta * (6.0 * c3 + theta * (12.0 * c4 + theta * 20.0 * c5))
    z = j0.z + (s - n0.s) * d
    return Jet3(z, w, (dw / h) / d, (d2w / (h * h)) / (d * d))


def dense_eval_param(traj: Trajectory, s: float) -> Jet3:
    """Interpolated jet at arc parameter s in [0, covered span]."""
    nodes = traj.nodes
    s_end = nodes[-1].s
    pad = 1e-12 * max(1.0, s_end)
    if s < -pad or s > s_end + pad:
        raise OutOfSpan(f"s = {s!r} outside covered span [0, {s_end!r}]")
    s = min(max(s, 0.0), s_end)
    lo, hi = 0, len(nodes) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if nodes[mid].s <= s:
            lo = mid
        else:
            hi = mid
    if nodes[lo].s == s:
        return nodes[lo].jet
    if nodes[hi].s == s:
        return nodes[hi].jet
    return _hermite_quintic(nodes[lo], nodes[hi], traj.direction, s)


def dense_eval(traj: Trajectory, z) -> Jet3:
    """Interpolated jet at z (REAL mode) or at arc parameter z (COMPLEX mode).

    On the real line z itself parametrises the path, so z is accepted
    directly; a straight complex path is indexed by the real arc parameter
    because a generic complex z does not lie on it.
    """
    if traj.field is ScalarField.COMPLEX:
        return dense_eval_param(traj, float(z))
    s = (float(z) - traj.z0) * traj.direction
    try:
        return dense_eval_param(traj, s)
    except OutOfSpan:
        z_lo = min(traj.z0, traj.nodes[-1].jet.z)
        z_hi = max(traj.z0, traj.nodes[-1].jet.z)
        raise OutOfSpan(f"z = {z!r} outside covered span [{z_lo!r}, {z_hi!r}]") from None
