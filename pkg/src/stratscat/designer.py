"""
Inverse design of media that do not reflect right-incident waves at a chosen
wavenumber and incidence angle.

Any differentiable Q with Q(a) = Q(a+ell) = 0 is taken as the solution of the
Riccati equation; the equation is then solved for one of the material
functions, which makes the right reflection amplitude R_r = exp(-2iK(a+ell))
Q(a+ell) vanish exactly.
"""
import logging
import math
from collections import namedtuple
from enum import Enum

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import Polarization, WaveContext, split_alpha_beta
from .exceptions import BranchAmbiguity, ProfileError, QEqualsOne, QMinusOne
from .integrate import integrate_segments, panel_quadrature
from .profiles import FunctionProfile, MediumProfile
from .settings import solver_settings

logger = logging.getLogger(__name__)


class QFamily(object):
    """
    A differentiable complex Q on [a, a+ell]. Subclasses implement ``_q`` and
    ``_dq``; ``delta`` integrates 1/(Q+1) numerically unless overridden.
    """

    def __init__(self, a, ell):
        ell = float(ell)
        if not ell > 0:
            raise ProfileError("Slab thickness must be positive, got {!r}".format(ell))
        self.a = float(a)
        self.ell = ell
        self._delta_solution = None

    @property
    def b(self):
        return self.a + self.ell

    def __call__(self, x):
        return self._q(np.asarray(x, dtype=float)) + 0j

    def derivative(self, x):
        return self._dq(np.asarray(x, dtype=float)) + 0j

    def delta(self, x):
        """
        int_a^x dx' / (Q(x') + 1)
        """
        if self._delta_solution is None:
            self._delta_solution = integrate_segments(
                lambda x, y: np.array([1 / (self(x) + 1)]),
                np.zeros(1, dtype=complex),
                [self.a, self.b],
                rtol=1e-12,
                atol=1e-14,
            )
        out = self._delta_solution(x)[0]
        if np.ndim(x) == 0:
            return complex(out)
        return out


class ParabolicQ(QFamily):
    """
    Q = kappa^2 (x-a)(ell-(x-a)): real and symmetric about the midpoint.
    """

    def __init__(self, kappa, ell, a=0.0):
        super(ParabolicQ, self).__init__(a, ell)
        kappa = float(kappa)
        if not kappa > 0:
            raise ProfileError("kappa must be positive, got {!r}".format(kappa))
        self.kappa = kappa

    def _q(self, xs):
        u = xs - self.a
        return self.kappa ** 2 * u * (self.ell - u)

    def _dq(self, xs):
        return self.kappa ** 2 * (self.ell - 2 * (xs - self.a))

    def delta(self, x):
        out = parabolic_delta(self.kappa, self.ell, np.asarray(x, dtype=float) - self.a)
        if np.ndim(x) == 0:
            return complex(out)
        return out + 0j


class SinusoidalQ(QFamily):
    """
    Q = z sin(K_n (x-a)) with K_n = pi n / ell.
    """

    def __init__(self, z, n, ell, a=0.0):
        super(SinusoidalQ, self).__init__(a, ell)
        n = int(n)
        if n < 1:
            raise ProfileError("n must be a positive integer, got {!r}".format(n))
        self.z = complex(z)
        self.n = n
        self.k_n = math.pi * n / self.ell

    def _q(self, xs):
        return self.z * np.sin(self.k_n * (xs - self.a))

    def _dq(self, xs):
        return self.z * self.k_n * np.cos(self.k_n * (xs - self.a))


class TabulatedQ(QFamily):
    """
    Samples of Q interpolated with PCHIP on real and imaginary parts; the
    derivative interpolates second-order finite differences of the samples.
    """

    def __init__(self, xs, values):
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=complex)
        if xs.ndim != 1 or xs.size < 3 or values.shape != xs.shape:
            raise ProfileError("A tabulated Q needs at least three samples")
        if (np.diff(xs) <= 0).any():
            raise ProfileError("Sample positions must be strictly increasing")
        super(TabulatedQ, self).__init__(xs[0], xs[-1] - xs[0])
        slopes = np.gradient(values, xs, edge_order=2)
        self.q_real = PchipInterpolator(xs, values.real)
        self.q_imag = PchipInterpolator(xs, values.imag)
        self.dq_real = PchipInterpolator(xs, slopes.real)
        self.dq_imag = PchipInterpolator(xs, slopes.imag)

    def _q(self, xs):
        return self.q_real(xs) + 1j * self.q_imag(xs)

    def _dq(self, xs):
        return self.dq_real(xs) + 1j * self.dq_imag(xs)


class FunctionQ(QFamily):
    def __init__(self, a, ell, q, dq):
        super(FunctionQ, self).__init__(a, ell)
        self.q_func = q
        self.dq_func = dq

    def _q(self, xs):
        return np.asarray(self.q_func(xs), dtype=complex) * np.ones(xs.shape)

    def _dq(self, xs):
        return np.asarray(self.dq_func(xs), dtype=complex) * np.ones(xs.shape)


class DesignMode(str, Enum):
    SOLVE_FOR_BETA = "solve_for_beta"
    SOLVE_FOR_ALPHA = "solve_for_alpha"
    TE_NONMAGNETIC = "te_nonmagnetic"


class DesignSpec(
    namedtuple(
        "DesignSpec", ["q", "k_star", "theta_star", "mode", "polarization", "given"]
    )
):
    """
    A Q family plus the target wavenumber and angle (radians; right incidence
    is 90 to 270 degrees). ``given`` is the known one of alpha/beta for the
    solve modes, a number or a vectorized callable.
    """

    __slots__ = ()

    def __new__(
        cls,
        q,
        k_star,
        theta_star,
        mode=DesignMode.TE_NONMAGNETIC,
        polarization=Polarization.TE,
        given=1.0,
    ):
        mode = DesignMode(mode)
        polarization = Polarization(polarization)
        if mode == DesignMode.TE_NONMAGNETIC and polarization != Polarization.TE:
            raise ValueError("The nonmagnetic design is for TE waves")
        ends = np.abs(q(np.array([q.a, q.b])))
        if ends.max() > 1e-10:
            raise ProfileError("Q must vanish at both ends of the slab")
        # validates k_star and rejects grazing angles
        WaveContext(k_star, theta_star, polarization)
        return super(DesignSpec, cls).__new__(
            cls, q, float(k_star), float(theta_star), mode, polarization, given
        )

    @property
    def context(self):
        return WaveContext(self.k_star, self.theta_star, self.polarization)

    @property
    def big_k_star(self):
        return self.context.big_k


def _given_values(given, xs):
    if callable(given):
        return np.asarray(given(xs), dtype=complex) * np.ones(xs.shape)
    return np.full(xs.shape, complex(given))


def _check_q(spec, xs, q):
    bad = np.abs(q + 1) < solver_settings.Q_POLE
    if bad.any():
        raise QMinusOne(float(xs[bad][0]))


def _verification_grid(spec):
    return np.linspace(spec.q.a, spec.q.b, solver_settings.DESIGN_NODES + 1)


class DesignedProfile(MediumProfile):
    """
    A synthesized medium evaluated in closed form from its Q family.
    """

    def __init__(self, spec, eps, mu):
        super(DesignedProfile, self).__init__(spec.q.a, spec.q.ell)
        self.spec = spec
        self.eps_func = eps
        self.mu_func = mu

    def _eps(self, xs):
        return self.eps_func(xs)

    def _mu(self, xs):
        return self.mu_func(xs)

    def sample(self, n_nodes=None):
        """
        (xs, eps_hat, mu_hat) on ``n_nodes`` + 1 equally spaced points of the
        support.
        """
        if n_nodes is None:
            n_nodes = solver_settings.DESIGN_NODES
        xs = np.linspace(self.a, self.b, int(n_nodes) + 1)
        return xs, self.eps_hat(xs), self.mu_hat(xs)


def _beta_values(spec, xs, alpha):
    ctx = spec.context
    q = spec.q(xs)
    dq = spec.q.derivative(xs)
    ratio = (q - 1) / (q + 1)
    return ctx.sin ** 2 / alpha + ctx.cos ** 2 * (
        ratio ** 2 * alpha - 2j * dq / (spec.k_star * abs(ctx.cos) * (q + 1) ** 2)
    )


def _as_profile(spec, alpha_func, beta_func):
    if spec.polarization == Polarization.TE:
        return DesignedProfile(spec, eps=beta_func, mu=alpha_func)
    return DesignedProfile(spec, eps=alpha_func, mu=beta_func)


def beta_from_q(spec, alpha=None):
    """
    Solve the design equation for beta (eps_hat for TE, mu_hat for TM) with
    alpha given.
    """
    if alpha is None:
        alpha = spec.given
    grid = _verification_grid(spec)
    _check_q(spec, grid, spec.q(grid))
    if (_given_values(alpha, grid) == 0).any():
        raise ProfileError("alpha must not vanish")

    def alpha_func(xs):
        return _given_values(alpha, xs)

    def beta_func(xs):
        return _beta_values(spec, xs, _given_values(alpha, xs))

    return _as_profile(spec, alpha_func, beta_func)


def _alpha_roots(spec, xs, beta):
    ctx = spec.context
    q = spec.q(xs)
    dq = spec.q.derivative(xs)
    xi = (2j * abs(ctx.cos) * dq + spec.k_star * beta * (q + 1) ** 2) / (
        2 * spec.k_star * ctx.cos ** 2 * (q - 1) ** 2
    )
    zeta = math.tan(spec.theta_star) * (q + 1) / (q - 1)
    root = np.sqrt(xi * xi - zeta * zeta)
    return xi + root, xi - root


def _track_branch(plus, minus):
    """
    +1/-1 per node: start on the root nearest vacuum, then follow whichever
    root continues the previous value.
    """
    signs = np.empty(plus.shape, dtype=int)
    near_plus = abs(plus[0] - 1)
    near_minus = abs(minus[0] - 1)
    if abs(near_plus - near_minus) < 1e-12:
        raise BranchAmbiguity("Both roots are equally close to vacuum at x=a")
    signs[0] = 1 if near_plus < near_minus else -1
    previous = plus[0] if signs[0] > 0 else minus[0]
    for i in range(1, plus.size):
        signs[i] = 1 if abs(plus[i] - previous) <= abs(minus[i] - previous) else -1
        previous = plus[i] if signs[i] > 0 else minus[i]

    end_plus = abs(plus[-1] - 1)
    end_minus = abs(minus[-1] - 1)
    if (end_plus < end_minus) != (signs[-1] > 0) and abs(end_plus - end_minus) > 1e-12:
        raise BranchAmbiguity(
            "No continuous branch of alpha joins vacuum at both ends of the slab"
        )
    return signs


def alpha_from_q(spec, beta=None, branch=None):
    """
    Solve the design equation for alpha = xi +- sqrt(xi^2 - zeta^2) with beta
    given. ``branch`` fixes the sign; by default the root is tracked
    continuously from the left edge.
    """
    if beta is None:
        beta = spec.given
    grid = _verification_grid(spec)
    q = spec.q(grid)
    _check_q(spec, grid, q)
    bad = np.abs(q - 1) < solver_settings.Q_POLE
    if bad.any():
        raise QEqualsOne(float(grid[bad][0]))

    if branch is None:
        plus, minus = _alpha_roots(spec, grid, _given_values(beta, grid))
        signs = _track_branch(plus, minus)
        step = grid[1] - grid[0]

        def pick(xs):
            idx = np.clip(np.rint((xs - grid[0]) / step).astype(int), 0, grid.size - 1)
            return signs[idx]

    else:
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1, got {!r}".format(branch))

        def pick(xs):
            return np.full(xs.shape, branch)

    def alpha_func(xs):
        plus, minus = _alpha_roots(spec, xs, _given_values(beta, xs))
        return np.where(pick(xs) > 0, plus, minus)

    def beta_func(xs):
        return _given_values(beta, xs)

    return _as_profile(spec, alpha_func, beta_func)


def te_nonmagnetic_profile(spec):
    """
    eps_hat = 1 - 2 cos^2 theta* (i Q'/K* + 2Q) / (Q+1)^2 inside the slab.
    """
    big_k = spec.big_k_star
    cos_sq = spec.context.cos ** 2
    grid = _verification_grid(spec)
    _check_q(spec, grid, spec.q(grid))

    def eps_func(xs):
        q = spec.q(xs)
        dq = spec.q.derivative(xs)
        return 1 - 2 * cos_sq * (1j * dq / big_k + 2 * q) / (q + 1) ** 2

    def mu_func(xs):
        return np.ones(xs.shape, dtype=complex)

    return DesignedProfile(spec, eps=eps_func, mu=mu_func)


def synthesize(spec, branch=None):
    if spec.mode == DesignMode.TE_NONMAGNETIC:
        profile = te_nonmagnetic_profile(spec)
    elif spec.mode == DesignMode.SOLVE_FOR_BETA:
        profile = beta_from_q(spec)
    else:
        profile = alpha_from_q(spec, branch=branch)

    violations = passivity_violations(profile, spec.polarization)
    if violations.size:
        logger.warning(
            "Designed profile has Re(alpha) or Re(beta) <= 0 at %d of the sampled"
            " points, first at x=%r",
            violations.size,
            violations[0],
        )
    return profile


DesignedAmplitudes = namedtuple("DesignedAmplitudes", ["t", "r_left", "phi"])


def designed_amplitudes(spec):
    """
    Transmission and left reflection amplitudes of the TE nonmagnetic design
    at (k*, theta*), and the phase shift phi = 1 - Delta(ell)/ell.
    """
    if spec.mode != DesignMode.TE_NONMAGNETIC:
        raise ValueError("Closed-form amplitudes exist for the nonmagnetic TE design")
    q_family = spec.q
    grid = _verification_grid(spec)
    _check_q(spec, grid, q_family(grid))

    big_k = spec.big_k_star
    a = q_family.a
    delta_end = q_family.delta(q_family.b)
    t = complex(np.exp(2j * big_k * (delta_end - q_family.ell)))

    def integrand(xs):
        q = q_family(xs)
        phase = 2 * q_family.delta(xs) - xs + 2 * a
        return q / (q + 1) * np.exp(2j * big_k * phase)

    panels = max(256, int(8 * big_k * q_family.ell))
    quad_grid = np.linspace(a, q_family.b, panels + 1)
    r_left = -4j * big_k * complex(panel_quadrature(integrand, quad_grid))
    phi = float((1 - delta_end / q_family.ell).real)
    return DesignedAmplitudes(t, r_left, phi)


def parabolic_delta(kappa, ell, x):
    """
    Closed form of int_0^x dx' / (kappa^2 x'(ell-x') + 1).
    """
    x = np.asarray(x, dtype=float)
    s = math.sqrt((kappa * ell) ** 2 + 4)
    denominator = 2 - 4 * kappa * x / (kappa * ell + s)
    out = np.log1p(2 * kappa * s * x / denominator) / (kappa * s)
    if out.ndim == 0:
        return float(out)
    return out


def phase_shift(kappa_ell):
    """
    phi = 1 - Delta(ell)/ell of the parabolic design, a function of kappa*ell.
    """
    return 1 - parabolic_delta(kappa_ell, 1.0, 1.0)


def left_reflection_bound(k_star_ell, kappa_ell):
    return 2.0 / 3.0 * k_star_ell * kappa_ell ** 2


def parabolic_design(kappa, ell, k_star, theta_star, a=0.0):
    return DesignSpec(ParabolicQ(kappa, ell, a=a), k_star, theta_star)


def sinusoidal_design(z, n, ell, theta_star, k_star=None, a=0.0):
    """
    Q = z sin(K_n x). Without ``k_star`` the design targets K* = K_n / 2,
    where the permittivity has a single-sided Fourier spectrum.
    """
    q = SinusoidalQ(z, n, ell, a=a)
    if k_star is None:
        k_star = q.k_n / (2 * abs(math.cos(theta_star)))
    return DesignSpec(q, k_star, theta_star)


def approximate_sinusoidal_profile(spec):
    """
    First order in z of the single-sided sinusoidal design:
    eps_hat ~ 1 - 4iz cos^2 theta* exp(-iK_n x).
    """
    q = spec.q
    if not isinstance(q, SinusoidalQ):
        raise ValueError("The approximate profile needs a sinusoidal Q")
    cos_sq = spec.context.cos ** 2

    def eps(xs):
        return 1 - 4j * q.z * cos_sq * np.exp(-1j * q.k_n * (xs - q.a))

    return FunctionProfile(q.a, q.ell, eps=eps)


def pt_symmetry_check(spec):
    """
    True when Q(a+b-x)* = Q(x): the design is invariant under reflection
    about the slab midpoint combined with complex conjugation.
    """
    q = spec.q
    grid = _verification_grid(spec)
    mirrored = np.conj(q(q.a + q.b - grid))
    return bool(np.max(np.abs(mirrored - q(grid))) <= 1e-10)


def time_reverse(profile):
    return profile.conjugate()


def passivity_violations(profile, polarization, n_nodes=None):
    """
    Sample points where Re(alpha) <= 0 or Re(beta) <= 0.
    """
    if n_nodes is None:
        n_nodes = solver_settings.DESIGN_NODES
    xs = np.linspace(profile.a, profile.b, int(n_nodes) + 1)
    ctx = WaveContext(1.0, 0.0, polarization)
    alpha, beta = split_alpha_beta(profile.eps_hat(xs), profile.mu_hat(xs), ctx)
    return xs[(alpha.real <= 0) | (beta.real <= 0)]
