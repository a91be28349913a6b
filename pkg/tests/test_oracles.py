import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from painleve4 import (
    DiscriminantViolation,
    EquationKind,
    InitialData,
    Jet2,
    Jet3,
    MultipleZeros,
    NegativeW,
    Params,
    SingularInput,
    WrongKind,
    dense_eval,
    eval_quadratic,
    fit_quadratic,
    integrate,
    locate_zeros,
    residual2,
    sqrt_lift,
    square_push,
    xxix_integrals,
    xxix_pole_family,
    xxxii_u_integral,
)

K = EquationKind


class TestQuadratics:
    def test_fit_xxxii_hand_values(self):
        q = fit_quadratic(K.XXXII, Jet2(0.0, 1.0, 1.0))
        assert (q.a, q.b, q.c) == (0.0, 1.0, 1.0)
        assert q.discriminant == 1.0
        q = fit_quadratic(K.XXXII, Jet2(0.0, 2.0, 3.0))
        assert (q.a, q.b, q.c) == (1.0, 3.0, 2.0)
        assert q.discriminant == 1.0

    def test_fit_xvii_hand_values(self):
        q = fit_quadratic(K.XVII, Jet2(0.0, 1.0, 2.0))
        assert (q.a, q.b, q.c) == (1.0, 2.0, 1.0)
        assert q.discriminant == 0.0

    def test_fit_rejects_w_zero(self):
        with pytest.raises(SingularInput):
            fit_quadratic(K.XXXII, Jet2(0.0, 0.0, 1.0))

    def test_fit_rejects_other_kinds(self):
        with pytest.raises(WrongKind):
            fit_quadratic(K.PIV, Jet2(0.0, 1.0, 1.0))

    def test_ill_conditioned_jet_trips_discriminant_gate(self):
        # cancellation at scale b^2 ~ 1e9 dwarfs the 1e-10 gate
        with pytest.raises(DiscriminantViolation):
            fit_quadratic(K.XXXII, Jet2(5.0, 1e-3, 10.0))

    @given(
        z0=st.floats(min_value=-2.0, max_value=2.0),
        w0=st.floats(min_value=0.1, max_value=3.0),
        w1=st.floats(min_value=-3.0, max_value=3.0),
        sign=st.sampled_from([-1.0, 1.0]),
    )
    @settings(max_examples=150)
    def test_fitted_discriminant_holds(self, z0, w0, w1, sign):
        q32 = fit_quadratic(K.XXXII, Jet2(z0, sign * w0, w1))
        assert abs(q32.discriminant - 1.0) < 1e-12
        q17 = fit_quadratic(K.XVII, Jet2(z0, sign * w0, w1))
        assert abs(q17.discriminant) < 1e-12

    def test_eval_quadratic(self):
        q = fit_quadratic(K.XXXII, Jet2(0.0, 2.0, 3.0))
        j = eval_quadratic(q, 0.0)
        assert (j.z, j.w, j.w1, j.w2) == (0.0, 2.0, 3.0, 2.0)
        q = fit_quadratic(K.XXXII, Jet2(0.0, 1.0, 1.0))
        j = eval_quadratic(q, 5.0)
        assert (j.z, j.w, j.w1, j.w2) == (5.0, 6.0, 1.0, 0.0)

    def test_eval_quadratic_at_root(self):
        # w = z^2 - 1/4 at its positive root
        from painleve4 import QuadraticSolution

        q = QuadraticSolution(1.0, 0.0, -0.25, K.XXXII)
        j = eval_quadratic(q, 0.5)
        assert (j.w, j.w1, j.w2) == (0.0, 1.0, 2.0)


class TestXXIXIntegrals:
    def test_hand_values(self):
        v = xxix_integrals(Jet3(0.0, 1.0, 1.0, 2.0))
        assert (v.k, v.K, v.L) == (0.0, 0.0, 0.0)
        v = xxix_integrals(Jet3(0.0, 1.0, 2.0, 2.0))
        assert (v.k, v.K, v.L) == (0.0, 0.0, 3.0)
        v = xxix_integrals(Jet3(0.0, 1.0, 0.0, 3.0))
        assert (v.k, v.K, v.L) == (1.0, 2.0, -3.0)

    def test_pole_family_jets(self):
        j = xxix_pole_family(1.0, 0.0)
        assert (j.z, j.w, j.w1, j.w2) == (0.0, 1.0, 1.0, 2.0)
        j = xxix_pole_family(1.0, 0.5)
        assert (j.z, j.w, j.w1, j.w2) == (0.5, 2.0, 4.0, 16.0)

    def test_pole_family_singular_at_pole(self):
        with pytest.raises(SingularInput):
            xxix_pole_family(1.0, 1.0)

    @given(c=st.floats(min_value=-2, max_value=2), dz=st.floats(min_value=0.3, max_value=2.0), side=st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=100)
    def test_pole_family_solves_xxix(self, c, dz, side):
        j = xxix_pole_family(c, c + side * dz)
        assert abs(residual2(K.XXIX, Params(), j)) < 1e-10
        v = xxix_integrals(j)
        scale = 1.0 + abs(j.w2) + abs(j.w) ** 4
        assert abs(v.k) < 1e-12 * scale
        assert abs(v.L) < 1e-12 * scale


class TestUIntegral:
    def test_hand_values(self):
        # w = z^2 + z at z = 1: K = (9 - 1)/8 = 1 = leading coefficient
        assert xxxii_u_integral(Jet2(1.0, 2.0, 3.0)) == 1.0
        assert xxxii_u_integral(Jet2(0.0, 1.0, 1.0)) == 0.0

    def test_sign_flip_is_exactly_invariant(self):
        j = Jet2(0.7, 2.3, -1.9)
        assert xxxii_u_integral(j, +1) == xxxii_u_integral(j, -1)

    def test_rejects_nonpositive_w(self):
        with pytest.raises(SingularInput):
            xxxii_u_integral(Jet2(0.0, 0.0, 1.0))
        with pytest.raises(SingularInput):
            xxxii_u_integral(Jet2(0.0, -1.0, 1.0))

    def test_constant_along_trajectory_and_equals_a(self):
        q = fit_quadratic(K.XXXII, Jet2(0.0, 2.0, 3.0))
        t = integrate(K.XXXII, Params(), InitialData.nonzero(0.0, 2.0, 3.0), 4.0)
        ks = [xxxii_u_integral(n.jet.to_jet2()) for n in t.nodes if n.jet.w > 0]
        assert len(ks) == len(t.nodes)
        assert max(abs(k - q.a) for k in ks) < 1e-8


@pytest.fixture(scope="module")
def tangency_run():
    p = Params()
    back = integrate(K.PIV0, p, InitialData.raw(0.0, 0.0, 0.0, 2.0), -0.6)
    j = back.nodes[-1].jet
    traj = integrate(K.PIV0, p, InitialData.raw(j.z, j.w, j.w1, j.w2), 1.2)
    return traj, locate_zeros(traj)[0]


class TestSqrtTransform:
    def test_square_push_hand_values(self):
        j = square_push(0.0, 2.0, 3.0)
        assert (j.z, j.w, j.w1, j.w2) == (0.0, 4.0, 12.0, 114.0)
        # cross-check: rhs2(piv0) at (0, 4, 12) is 144/8 + 1.5*64 = 114
        from painleve4 import rhs2

        assert rhs2(K.PIV0, Params(), Jet2(0.0, 4.0, 12.0)) == 114.0

    def test_square_push_at_f_zero(self):
        for sigma in (0.5, -2.0):
            j = square_push(1.0, 0.0, sigma)
            assert (j.w, j.w1, j.w2) == (0.0, 0.0, 2.0 * sigma * sigma)

    @given(
        t=st.floats(min_value=-2, max_value=2),
        f=st.floats(min_value=-2, max_value=2),
        fdot=st.floats(min_value=-2, max_value=2),
    )
    @settings(max_examples=200)
    def test_square_push_residual_is_roundoff(self, t, f, fdot):
        j = square_push(t, f, fdot)
        scale = 1.0 + abs(2 * j.w * j.w2) + j.w1 * j.w1 + 3 * abs(j.w) ** 4 + abs(8 * j.z * j.w ** 3) + 4 * j.z * j.z * j.w * j.w
        assert abs(residual2(K.PIV0, Params(), j)) < 1e-13 * scale

    def test_lift_of_zero_solution_is_zero(self):
        t = integrate(K.PIV0, Params(), InitialData.raw(0.0, 0.0, 0.0, 0.0), 1.0)
        lift = sqrt_lift(t, None, (0.0, 1.0))
        assert all(sm.f == 0.0 and sm.fdot == 0.0 for sm in lift.samples)

    def test_lift_slope_limit_at_zero(self, tangency_run):
        traj, event = tangency_run
        lift = sqrt_lift(traj, event, (-0.5, 0.5))
        at_zero = [sm for sm in lift.samples if sm.f == 0.0]
        assert len(at_zero) == 1
        # w''(a) = 2, so the square root passes through with slope 1
        assert abs(at_zero[0].fdot - 1.0) < 1e-6
        assert lift.fdot_jump < 1e-7

    def test_lift_sign_rule(self, tangency_run):
        traj, event = tangency_run
        lift = sqrt_lift(traj, event, (-0.5, 0.5))
        for sm in lift.samples:
            if sm.t < event.a:
                assert sm.f <= 0.0
            if sm.t > event.a:
                assert sm.f >= 0.0

    def test_round_trip_squares_back(self, tangency_run):
        traj, event = tangency_run
        lift = sqrt_lift(traj, event, (-0.5, 0.5))
        worst = 0.0
        for sm in lift.samples:
            w_true = dense_eval(traj, sm.t).w
            worst = max(worst, abs(sm.f * sm.f - w_true))
        assert worst < 1e-9

    def test_missing_event_claim_raises(self, tangency_run):
        traj, _ = tangency_run
        with pytest.raises(MultipleZeros):
            sqrt_lift(traj, None, (-0.5, 0.5))

    def test_negative_w_raises(self):
        t = integrate(K.PIV0, Params(), InitialData.nonzero(0.0, -0.5, 0.0), 0.5)
        with pytest.raises(NegativeW):
            sqrt_lift(t, None, (0.0, 0.4))

    def test_wrong_kind_raises(self):
        t = integrate(K.XXXII, Params(), InitialData.nonzero(0.0, 2.0, 3.0), 1.0)
        with pytest.raises(WrongKind):
            sqrt_lift(t, None, (0.0, 1.0))

    def test_lift_residual_against_sqrt_equation(self, tangency_run):
        # f'' recovered from the w-jet must satisfy 4 f'' = f (3f^2+2t)(f^2+2t)
        traj, event = tangency_run
        lift = sqrt_lift(traj, event, (-0.5, 0.5))
        worst = 0.0
        checked = 0
        for sm in lift.samples:
            if abs(sm.f) < 0.05:
                continue  # the 1/f reconstruction amplifies dense-output noise
            checked += 1
            jet = dense_eval(traj, sm.t)
            fdd = (jet.w2 - 2.0 * sm.fdot * sm.fdot) / (2.0 * sm.f)
            res = 4.0 * fdd - sm.f * (3.0 * sm.f ** 2 + 2.0 * sm.t) * (sm.f ** 2 + 2.0 * sm.t)
            worst = max(worst, abs(res))
        assert checked > 10
        assert worst < 1e-7
