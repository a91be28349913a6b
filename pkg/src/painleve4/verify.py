"""Randomized verification suites behind the `verify` CLI command.

Every suite draws its instances from a seeded `random.Random`, so a fixed
(seed, count) pair reproduces bit-identical results.  Suites report one
PropertyResult per checked property with the worst observed deviation.

Jet entries are drawn uniformly from [-10, 10], excluding |w| < 1e-3 where
an operation divides by w.  The `constraint` suite is the exception: its
draws are kept at desk scale (entries in [-1, 1], runs conditioned on
staying bounded), because the conserved quantity C contains w^4 terms and
an absolute drift bound in double precision is only meaningful while the
terms it cancels stay representable at that accuracy.  Near-pole nodes of
an unconstrained draw would swamp any integrator with pure rounding noise.
"""

import logging
import random
from dataclasses import dataclass

from .equations import (
    EquationKind,
    Jet2,
    Jet3,
    Params,
    constraint_c,
    jet_identities,
    residual2,
)
from .integrator import (
    InitialData,
    Tolerances,
    TrajectoryStatus,
    complete_initial_data,
    dense_eval,
    integrate,
)
from .oracles import (
    eval_quadratic,
    fit_quadratic,
    square_push,
    xxix_integrals,
    xxix_pole_family,
    xxxii_u_integral,
)

logger = logging.getLogger(__name__)

SUITE_NAMES = ("identities", "constraint", "closed-forms", "xxix-integrals", "sqrt")

DEFAULT_COUNTS = {
    "identities": 1000,
    "constraint": 50,
    "closed-forms": 200,
    "xxix-integrals": 200,
    "sqrt": 25,
}

_VERIFY_TOL = Tolerances(rel=1e-10, abs=1e-10)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    worst: float
    budget: float
    note: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"{self.name}: {verdict} (worst {self.worst:.3e}, budget {self.budget:.1e})"
        if self.note:
            text += f" [{self.note}]"
        return text


def _draw_w(rng: random.Random, lo: float = -10.0, hi: float = 10.0) -> float:
    # excludes the division-by-w neighbourhood
    while True:
        w = rng.uniform(lo, hi)
        if abs(w) >= 1e-3:
            return w


def suite_identities(seed: int, count: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    worst1 = 0.0
    worst2 = 0.0
    for _ in range(count):
        z = rng.uniform(-10.0, 10.0)
        w = _draw_w(rng)
        w1 = rng.uniform(-10.0, 10.0)
        w2 = rng.uniform(-10.0, 10.0)
        w3 = rng.uniform(-10.0, 10.0)
        d1, d2 = jet_identities(Jet3(z, w, w1, w2), w3)
        scale1 = max(1.0, abs(2.0 * w1 * w2) + abs(2.0 * w * w3))
        worst1 = max(worst1, abs(d1) / scale1)
        scale2 = max(
            1.0,
            abs(2.0 * w1 * w2 / w) + abs(w1 ** 3 / (w * w)) + abs((w1 / (w * w)) * (2.0 * w * w2 - w1 * w1)),
        )
        worst2 = max(worst2, abs(d2) / scale2)
    budget = 1e-12
    return [
        PropertyResult("derivative of (2*w*w'' - w'^2) equals 2*w*w'''", worst1 < budget, worst1, budget),
        PropertyResult("derivative of (w'^2/w) equals (w'/w^2)*(2*w*w'' - w'^2)", worst2 < budget, worst2, budget),
    ]


def _draw_bounded_run(rng: random.Random, w_cap: float = 3.0, max_attempts: int = 400):
    """Random third-order piv data conditioned on a bounded span-2 run."""
    for _ in range(max_attempts):
        p = Params(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
        z0 = rng.uniform(-1.5, -0.5)
        init = InitialData.raw(z0, rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        traj = integrate(EquationKind.PIV, p, init, 2.0, _VERIFY_TOL)
        if traj.status is TrajectoryStatus.COMPLETED and traj.max_abs_w() <= w_cap:
            return traj
    raise RuntimeError("could not draw a bounded constraint run; ranges need retuning")


def suite_constraint(seed: int, count: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    worst = 0.0
    off_manifold = 0
    for _ in range(count):
        traj = _draw_bounded_run(rng)
        c0 = traj.nodes[0].c
        if abs(c0) > 1e-6:
            off_manifold += 1
        drift = max(abs(n.c - c0) for n in traj.nodes)
        worst = max(worst, drift)
    budget = 1e-7
    note = f"{off_manifold}/{count} runs started off the C = 0 set"
    return [PropertyResult("constraint C conserved along the third-order flow", worst < budget, worst, budget, note)]


def _quadratic_closure(kind: EquationKind, rng: random.Random, count: int):
    worst_w = 0.0
    worst_disc = 0.0
    worst_k = 0.0
    has_k = kind is EquationKind.XXXII
    for _ in range(count):
        # |w0| >= 0.25 and |z0| <= 1.5 keep the b^2 - 4ac cancellation within
        # a few hundred eps, compatible with the absolute discriminant budget
        z0 = rng.uniform(-1.5, 1.5)
        w0 = rng.choice((-1.0, 1.0)) * rng.uniform(0.25, 3.0)
        w1 = rng.uniform(-3.0, 3.0)
        q = fit_quadratic(kind, Jet2(z0, w0, w1))
        worst_disc = max(worst_disc, abs(q.discriminant - q.target_discriminant))
        span = rng.choice((-1.0, 1.0)) * rng.uniform(1.0, 3.0)
        traj = integrate(kind, Params(), InitialData.nonzero(z0, w0, w1), span, _VERIFY_TOL)
        for node in traj.nodes:
            exact = eval_quadratic(q, node.jet.z)
            worst_w = max(worst_w, abs(node.jet.w - exact.w))
            if has_k and node.jet.w > 1e-3:
                worst_k = max(worst_k, abs(xxxii_u_integral(node.jet) - q.a))
    return worst_w, worst_disc, worst_k


def suite_closed_forms(seed: int, count: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    each = max(1, count // 2)
    w32, disc32, k32 = _quadratic_closure(EquationKind.XXXII, rng, each)
    w17, disc17, _ = _quadratic_closure(EquationKind.XVII, rng, each)
    return [
        PropertyResult("xxxii trajectories reproduce their fitted quadratic", w32 < 1e-9, w32, 1e-9),
        PropertyResult("xvii trajectories reproduce their fitted quadratic", w17 < 1e-9, w17, 1e-9),
        PropertyResult("fitted discriminants hit 1 (xxxii) and 0 (xvii)", max(disc32, disc17) < 1e-12, max(disc32, disc17), 1e-12),
        PropertyResult("u-substitution integral equals the leading coefficient", k32 < 1e-8, k32, 1e-8),
    ]


def suite_xxix_integrals(seed: int, count: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    worst_l = 0.0
    for _ in range(count):
        z0 = rng.uniform(-2.0, 2.0)
        w0 = _draw_w(rng)
        w1 = rng.uniform(-10.0, 10.0)
        init = InitialData.nonzero(z0, w0, w1)
        jet = complete_initial_data(EquationKind.XXIX, Params(), init)
        worst_l = max(worst_l, abs(xxix_integrals(jet).L))

    worst_drift = 0.0
    runs = max(1, count // 10)
    for _ in range(runs):
        for _attempt in range(200):
            z0 = 0.0
            w0 = rng.choice((-1.0, 1.0)) * rng.uniform(0.3, 1.2)
            w1 = rng.uniform(-1.0, 1.0)
            span = rng.choice((-1.0, 1.0)) * rng.uniform(0.2, 0.5)
            traj = integrate(EquationKind.XXIX, Params(), InitialData.nonzero(z0, w0, w1), span, _VERIFY_TOL)
            if traj.status is TrajectoryStatus.COMPLETED and traj.max_abs_w() <= 10.0:
                break
        else:
            raise RuntimeError("could not draw a bounded xxix run")
        first = xxix_integrals(traj.nodes[0].jet)
        for node in traj.nodes:
            vals = xxix_integrals(node.jet)
            worst_drift = max(
                worst_drift,
                abs(vals.k - first.k),
                abs(vals.K - first.K),
                abs(vals.L - first.L),
            )
            worst_l = max(worst_l, abs(vals.L))

    worst_res = 0.0
    for _ in range(count):
        c = rng.uniform(-2.0, 2.0)
        z = c + rng.choice((-1.0, 1.0)) * rng.uniform(0.3, 2.0)
        jet = xxix_pole_family(c, z)
        worst_res = max(worst_res, abs(residual2(EquationKind.XXIX, Params(), jet)))

    return [
        PropertyResult("L vanishes on jets satisfying the xxix equation", worst_l < 1e-8, worst_l, 1e-8),
        PropertyResult("(k, K, L) constant along integrated xxix trajectories", worst_drift < 1e-7, worst_drift, 1e-7),
        PropertyResult("pole family 1/(c - z) has zero xxix residual", worst_res < 1e-10, worst_res, 1e-10),
    ]


def suite_sqrt(seed: int, count: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    worst_res = 0.0
    worst_round = 0.0
    for _ in range(count):
        for _attempt in range(200):
            t0 = rng.uniform(-1.0, 1.0)
            f0 = rng.choice((-1.0, 1.0)) * rng.uniform(0.2, 1.2)
            f1 = rng.uniform(-0.8, 0.8)
            span = rng.choice((-1.0, 1.0)) * rng.uniform(0.3, 1.0)
            traj = integrate(
                EquationKind.SQRT_PIV0,
                Params(),
                InitialData.raw(t0, f0, f1, 0.0),
                span,
                _VERIFY_TOL,
            )
            if traj.status is TrajectoryStatus.COMPLETED and traj.max_abs_w() <= 3.0:
                break
        else:
            raise RuntimeError("could not draw a bounded sqrt-piv0 run")
        pushed0 = square_push(traj.nodes[0].jet.z, traj.nodes[0].jet.w, traj.nodes[0].jet.w1)
        for node in traj.nodes:
            pushed = square_push(node.jet.z, node.jet.w, node.jet.w1)
            worst_res = max(worst_res, abs(residual2(EquationKind.PIV0, Params(), pushed)))

        lifted = integrate(
            EquationKind.PIV0,
            Params(),
            InitialData.raw(t0, pushed0.w, pushed0.w1, pushed0.w2),
            span,
            _VERIFY_TOL,
        )
        if lifted.status is TrajectoryStatus.COMPLETED:
            for node in traj.nodes:
                w_here = dense_eval(lifted, node.jet.z).w
                worst_round = max(worst_round, abs(w_here - node.jet.w ** 2))

    return [
        PropertyResult("squared sqrt-piv0 samples satisfy the piv0 residual", worst_res < 1e-8, worst_res, 1e-8),
        PropertyResult("piv0 run matches the square of the sqrt-piv0 run", worst_round < 1e-7, worst_round, 1e-7),
    ]


_SUITES = {
    "identities": suite_identities,
    "constraint": suite_constraint,
    "closed-forms": suite_closed_forms,
    "xxix-integrals": suite_xxix_integrals,
    "sqrt": suite_sqrt,
}


def run_suite(suite: str, seed: int, count: int | None = None) -> list[PropertyResult]:
    if suite not in _SUITES:
        raise ValueError(f"suite: unknown suite {suite!r}; expected one of {', '.join(SUITE_NAMES)}")
    n = count if count is not None else DEFAULT_COUNTS[suite]
    if n <= 0:
        raise ValueError(f"count: must be positive, got {n}")
    results = _SUITES[suite](seed, n)
    for r in results:
        logger.info("%s", r.line())
    return results
