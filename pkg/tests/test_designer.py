import math
from unittest import TestCase

import numpy as np
import pytest

from stratscat.designer import (
    DesignMode,
    DesignSpec,
    FunctionQ,
    ParabolicQ,
    SinusoidalQ,
    TabulatedQ,
    alpha_from_q,
    approximate_sinusoidal_profile,
    beta_from_q,
    designed_amplitudes,
    left_reflection_bound,
    parabolic_delta,
    parabolic_design,
    passivity_violations,
    phase_shift,
    pt_symmetry_check,
    sinusoidal_design,
    synthesize,
    time_reverse,
)
from stratscat.exceptions import ProfileError, QMinusOne
from stratscat.profiles import HomogeneousSlab
from stratscat.riccati import riccati_amplitudes, solve_riccati


class PhaseShiftTests(TestCase):
    def test_unit_kappa_ell(self):
        assert abs(phase_shift(1.0) - 0.13918) < 1e-5

    def test_small_kappa_ell(self):
        assert abs(phase_shift(0.1) - 0.01 / 6) < 0.05 * 0.01 / 6

    def test_large_kappa_ell(self):
        assert abs(phase_shift(50.0) - 1) < 0.02

    def test_monotone(self):
        values = [phase_shift(k) for k in np.geomspace(0.01, 50, 40)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_closed_form_delta(self):
        kappa, ell = 2.0, 1.5

        def q(xs):
            return kappa ** 2 * xs * (ell - xs)

        def dq(xs):
            return kappa ** 2 * (ell - 2 * xs)

        numeric = FunctionQ(0.0, ell, q, dq)
        for x in (0.3, 0.75, 1.5):
            assert abs(numeric.delta(x) - parabolic_delta(kappa, ell, x)) < 1e-10

    def test_parabolic_q_uses_closed_form(self):
        q = ParabolicQ(2.0, 1.5, a=1.0)
        assert q.delta(2.5) == parabolic_delta(2.0, 1.5, 1.5)


class QFamilyTests(TestCase):
    def test_parabolic(self):
        q = ParabolicQ(2.0, 1.0)
        assert q(0.5) == 1.0
        assert q.derivative(0.5) == 0
        assert q(np.array([0.0, 1.0])).tolist() == [0, 0]

    def test_sinusoidal(self):
        q = SinusoidalQ(0.5j, 2, 1.0)
        assert q.k_n == 2 * math.pi
        assert abs(q(0.5)) < 1e-15
        assert abs(q(0.25) - 0.5j) < 1e-15

    def test_tabulated(self):
        xs = np.linspace(0.0, 1.0, 201)
        q = TabulatedQ(xs, xs * (1 - xs))
        assert abs(q(0.5) - 0.25) < 1e-12
        assert abs(q.derivative(0.25) - 0.5) < 1e-6

    def test_tabulated_needs_samples(self):
        with pytest.raises(ProfileError):
            TabulatedQ([0.0, 1.0], [0.0, 0.0])

    def test_bad_parameters(self):
        with pytest.raises(ProfileError):
            ParabolicQ(0.0, 1.0)
        with pytest.raises(ProfileError):
            SinusoidalQ(0.1, 0, 1.0)


class DesignSpecTests(TestCase):
    def test_q_must_vanish_at_ends(self):
        q = FunctionQ(0.0, 1.0, lambda xs: 1 + xs, lambda xs: 1.0)
        with pytest.raises(ProfileError):
            DesignSpec(q, 1.0, math.pi)

    def test_nonmagnetic_design_is_te(self):
        with pytest.raises(ValueError):
            DesignSpec(ParabolicQ(1.0, 1.0), 1.0, math.pi, polarization="TM")

    def test_target_context(self):
        spec = parabolic_design(1.0, 2.0, 3.0, math.radians(150))
        assert spec.mode == DesignMode.TE_NONMAGNETIC
        assert abs(spec.big_k_star - 3.0 * math.cos(math.radians(30))) < 1e-12


def _right_reflection(spec, profile=None):
    if profile is None:
        profile = synthesize(spec)
    return riccati_amplitudes(profile, spec.context)


@pytest.mark.parametrize("kappa_ell", [0.5, 1.0, 3.0])
def test_parabolic_design_is_right_reflectionless(kappa_ell):
    spec = parabolic_design(kappa_ell, 1.0, 5.0, math.pi)
    found = _right_reflection(spec)
    assert abs(found.r_right) < 1e-7


@pytest.mark.parametrize("z", [0.05, 0.3 + 0.1j])
@pytest.mark.parametrize("n", [1, 2])
def test_sinusoidal_design_is_right_reflectionless(z, n):
    spec = sinusoidal_design(z, n, 1.0, math.pi)
    assert abs(_right_reflection(spec).r_right) < 1e-7


def test_oblique_design():
    spec = parabolic_design(1.0, 1.0, 4.0, math.radians(200))
    assert abs(_right_reflection(spec).r_right) < 1e-7


def test_left_reflection_survives():
    spec = parabolic_design(1.0, 1.0, 5.0, math.pi)
    assert abs(_right_reflection(spec).r_left) > 1e-3


class DesignedAmplitudeTests(TestCase):
    def setUp(self):
        super(DesignedAmplitudeTests, self).setUp()
        self.spec = parabolic_design(1.0, 1.0, 5.0, math.pi)
        self.solved = _right_reflection(self.spec)

    def test_matches_riccati(self):
        closed = designed_amplitudes(self.spec)
        assert abs(closed.t - self.solved.t) < 1e-7
        assert abs(closed.r_left - self.solved.r_left) < 1e-6
        assert abs(closed.phi - phase_shift(1.0)) < 1e-12

    def test_unit_transmission_for_real_q(self):
        assert abs(abs(designed_amplitudes(self.spec).t) - 1) < 1e-12
        assert abs(abs(self.solved.t) - 1) < 1e-8

    def test_pt_unitarity(self):
        t_sq = abs(self.solved.t) ** 2
        product = abs(self.solved.r_left * self.solved.r_right)
        assert abs(t_sq - 1) - product < 1e-8

    def test_solve_modes_only(self):
        spec = DesignSpec(
            ParabolicQ(1.0, 1.0), 5.0, math.pi, mode=DesignMode.SOLVE_FOR_BETA
        )
        with pytest.raises(ValueError):
            designed_amplitudes(spec)


def test_left_reflection_bound():
    for k_star_ell in np.geomspace(0.1, 50, 10):
        for kappa_ell in np.geomspace(0.01, 50, 10):
            spec = parabolic_design(kappa_ell, 1.0, k_star_ell, math.pi)
            r_left = abs(designed_amplitudes(spec).r_left)
            assert r_left <= left_reflection_bound(k_star_ell, kappa_ell)


def test_time_reversal_swaps_sides():
    spec = parabolic_design(1.0, 1.0, 5.0, math.pi)
    reversed_medium = time_reverse(synthesize(spec))
    found = riccati_amplitudes(reversed_medium, spec.context)
    assert abs(found.r_left) < 1e-7
    assert abs(found.r_right) > 1e-3


def test_solve_for_beta_tm():
    spec = DesignSpec(
        ParabolicQ(1.0, 1.0),
        3.0,
        math.radians(150),
        mode=DesignMode.SOLVE_FOR_BETA,
        polarization="TM",
        given=1.5,
    )
    profile = synthesize(spec)
    assert np.allclose(profile.eps_hat(np.linspace(0, 1, 5)), 1.5)
    assert abs(_right_reflection(spec, profile).r_right) < 1e-7


def test_solve_for_alpha():
    q = SinusoidalQ(0.05, 1, 1.0)
    spec = DesignSpec(q, math.pi / 2, math.pi, mode=DesignMode.SOLVE_FOR_ALPHA)
    profile = synthesize(spec)
    assert np.allclose(profile.eps_hat(np.linspace(0, 1, 5)), 1.0)
    assert abs(_right_reflection(spec, profile).r_right) < 1e-7


def test_solve_for_alpha_branch():
    spec = DesignSpec(
        SinusoidalQ(0.05, 1, 1.0), 2.0, math.pi, mode=DesignMode.SOLVE_FOR_ALPHA
    )
    with pytest.raises(ValueError):
        alpha_from_q(spec, branch=2)
    fixed = alpha_from_q(spec, branch=1)
    assert abs(fixed.mu_hat(0.5) - synthesize(spec).mu_hat(0.5)) < 1e-12


def test_q_minus_one():
    spec = sinusoidal_design(-1.0, 1, 1.0, math.pi)
    with pytest.raises(QMinusOne) as excinfo:
        synthesize(spec)
    assert abs(excinfo.value.x - 0.5) < 1e-12


def test_approximate_sinusoidal_profile():
    spec = sinusoidal_design(0.01, 1, 1.0, math.pi)
    exact = synthesize(spec)
    approx = approximate_sinusoidal_profile(spec)
    xs = np.linspace(0.0, 1.0, 101)
    assert np.max(np.abs(exact.eps_hat(xs) - approx.eps_hat(xs))) < 20 * 0.01 ** 2


def test_pt_symmetry_check():
    assert pt_symmetry_check(parabolic_design(1.0, 1.0, 2.0, math.pi))
    assert pt_symmetry_check(sinusoidal_design(0.3, 1, 1.0, math.pi))
    assert not pt_symmetry_check(sinusoidal_design(0.3 + 0.1j, 1, 1.0, math.pi))
    assert not pt_symmetry_check(sinusoidal_design(0.3, 2, 1.0, math.pi))


def test_passivity_violations():
    assert passivity_violations(HomogeneousSlab(2.0), "TE").size == 0
    assert passivity_violations(HomogeneousSlab(-1.0), "TE", n_nodes=10).size == 11
    assert passivity_violations(HomogeneousSlab(-1.0), "TM", n_nodes=10).size == 11


def test_designed_profile_sample():
    profile = synthesize(parabolic_design(1.0, 1.0, 2.0, math.pi))
    xs, eps, mu = profile.sample(8)
    assert xs.tolist() == np.linspace(0, 1, 9).tolist()
    assert abs(eps[0] - profile.eps_hat(0.0)) < 1e-15
    assert (mu == 1).all()


class RoundTripTests(TestCase):
    def setUp(self):
        super(RoundTripTests, self).setUp()
        self.xs = np.linspace(0.02, 0.98, 49)

    def test_alpha_gives_back_beta(self):
        beta = 1.8 + 0.1j
        spec = DesignSpec(
            SinusoidalQ(0.2 + 0.05j, 1, 1.0),
            2.0,
            math.radians(160),
            mode=DesignMode.SOLVE_FOR_ALPHA,
            given=beta,
        )
        for branch in (1, -1):
            alpha_profile = alpha_from_q(spec, beta=beta, branch=branch)
            recovered = beta_from_q(spec, alpha=alpha_profile.mu_hat)
            assert np.allclose(recovered.mu_hat(self.xs), alpha_profile.mu_hat(self.xs))
            error = np.max(np.abs(recovered.eps_hat(self.xs) - beta))
            assert error < 1e-8 * abs(beta)

    def check_q_is_recovered(self, spec):
        traj = solve_riccati(synthesize(spec), spec.context)
        found = traj.at(self.xs)[0]
        assert np.max(np.abs(found - spec.q(self.xs))) < 1e-6

    def test_nonmagnetic_q_is_recovered(self):
        self.check_q_is_recovered(parabolic_design(1.0, 1.0, 5.0, math.pi))

    def test_oblique_q_is_recovered(self):
        self.check_q_is_recovered(
            sinusoidal_design(0.3 + 0.1j, 2, 1.0, math.radians(200))
        )

    def test_solve_for_beta_q_is_recovered(self):
        self.check_q_is_recovered(
            DesignSpec(
                ParabolicQ(1.0, 1.0),
                3.0,
                math.radians(150),
                mode=DesignMode.SOLVE_FOR_BETA,
                polarization="TM",
                given=1.5,
            )
        )

    def test_solve_for_alpha_q_is_recovered(self):
        self.check_q_is_recovered(
            DesignSpec(
                SinusoidalQ(0.05, 1, 1.0),
                math.pi / 2,
                math.pi,
                mode=DesignMode.SOLVE_FOR_ALPHA,
            )
        )
