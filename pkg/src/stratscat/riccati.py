"""
Scattering amplitudes from a single Riccati initial-value problem.

Q(x) = exp(2iKx) R_r(x) is the right reflection amplitude of the medium cut
off at x. It obeys

    Q' = iK (m_minus Q^2 + 2 m_plus Q + m_minus),    Q(a) = 0,

and the transmission and left reflection amplitudes of the truncated medium
follow from it by quadrature:

    log T(x) = iK int_a^x (m_minus Q + m_plus - 1)
    R_l(x)   = iK int_a^x exp(2iKx') m_minus T^2
"""
import logging

import numpy as np

from .core import coefficient_arrays, normal_wavenumber
from .exceptions import IntegrationFailure, SpectralSingularity
from .integrate import integrate_segments, panel_quadrature
from .settings import solver_settings
from .slabstack import Amplitudes, matrix_from_amplitudes

logger = logging.getLogger(__name__)


class Trajectory(object):
    """
    Q, T and R_l of the truncated media at the accepted steps ``xs``. Any
    x in [a, a+ell] can be evaluated through the dense solution with ``at``.
    """

    def __init__(self, solution, big_k):
        self.solution = solution
        self.big_k = big_k
        self.xs = solution.ts
        self.q = solution.ys[0]
        self.t = np.exp(solution.ys[1])
        self.rl = solution.ys[2]

    @property
    def x_stop(self):
        return self.xs[-1]

    @property
    def r_right(self):
        return np.exp(-2j * self.big_k * self.xs) * self.q

    def at(self, x):
        """
        (Q, T, R_l) at ``x``, scalars or arrays.
        """
        q, log_t, rl = self.solution(x)
        return q, np.exp(log_t), rl


def solve_riccati(profile, ctx, rtol=None, atol=None):
    if rtol is None:
        rtol = solver_settings.RTOL
    if atol is None:
        atol = solver_settings.ATOL
    if not rtol > 0 or not atol > 0:
        raise ValueError("Tolerances must be positive")

    big_k = normal_wavenumber(ctx)
    limit = solver_settings.BLOWUP_Q

    def rhs(x, y):
        coeffs = coefficient_arrays(profile, x, ctx)
        m_plus = coeffs.m_plus[0]
        m_minus = coeffs.m_minus[0]
        q = y[0]
        return 1j * big_k * np.array(
            [
                m_minus * q * q + 2 * m_plus * q + m_minus,
                m_minus * q + m_plus - 1,
                np.exp(2j * big_k * x + 2 * y[1]) * m_minus,
            ]
        )

    def blow_up(x, y):
        return abs(y[0]) - limit

    blow_up.terminal = True
    blow_up.direction = 1

    try:
        solution = integrate_segments(
            rhs,
            np.zeros(3, dtype=complex),
            profile.breakpoints(),
            rtol=rtol,
            atol=atol,
            max_step=solver_settings.MAX_STEP_FACTOR / big_k,
            events=blow_up,
        )
    except IntegrationFailure as exc:
        raise SpectralSingularity(x_blow=exc.x, detail=str(exc))

    if solution.event_x is not None:
        logger.info("Riccati solution blew up at x=%r", solution.event_x)
        raise SpectralSingularity(
            x_blow=solution.event_x,
            detail="(|Q| exceeded {:g})".format(limit),
        )
    return Trajectory(solution, big_k)


def final_amplitudes(traj, ctx):
    big_k = normal_wavenumber(ctx)
    return Amplitudes(
        r_left=complex(traj.rl[-1]),
        r_right=complex(np.exp(-2j * big_k * traj.x_stop) * traj.q[-1]),
        t=complex(traj.t[-1]),
    )


def _quadrature(func, traj):
    return complex(panel_quadrature(func, traj.xs))


def left_reflection_fourier(profile, traj, ctx):
    """
    R_l as iK times the Fourier integral of m_minus T^2 at -2K, evaluated by
    Gauss-Legendre panels on the accepted-step grid.
    """
    big_k = normal_wavenumber(ctx)

    def integrand(xs):
        m_minus = coefficient_arrays(profile, xs, ctx).m_minus
        t = traj.at(xs)[1]
        return np.exp(2j * big_k * xs) * m_minus * t * t

    return 1j * big_k * _quadrature(integrand, traj)


def transmission_from_reflection(profile, traj, ctx):
    """
    T from the right reflection amplitude, exp(iK int (exp(2iKx) m_minus R_r
    + m_plus - 1)).
    """
    big_k = normal_wavenumber(ctx)

    def integrand(xs):
        coeffs = coefficient_arrays(profile, xs, ctx)
        r_right = np.exp(-2j * big_k * xs) * traj.at(xs)[0]
        return (
            np.exp(2j * big_k * xs) * coeffs.m_minus * r_right + coeffs.m_plus - 1
        )

    return complex(np.exp(1j * big_k * _quadrature(integrand, traj)))


def transfer_from_trajectory(traj, x):
    """
    Transfer matrix of the medium truncated at ``x``.
    """
    q, t, rl = (complex(v) for v in traj.at(float(x)))
    r_right = np.exp(-2j * traj.big_k * x) * q
    return matrix_from_amplitudes(Amplitudes(rl, complex(r_right), t))


def born_left_reflection(profile, ctx):
    """
    Weak-contrast left reflection amplitude iK int exp(2iKx) m_minus dx,
    i.e. the exact formula with T replaced by 1.
    """
    big_k = normal_wavenumber(ctx)
    points = profile.breakpoints()
    panels = max(64, int(np.ceil(4 * big_k * profile.ell)))
    grid = np.unique(
        np.concatenate(
            [np.linspace(lo, hi, panels + 1) for lo, hi in zip(points[:-1], points[1:])]
        )
    )

    def integrand(xs):
        return np.exp(2j * big_k * xs) * coefficient_arrays(profile, xs, ctx).m_minus

    return 1j * big_k * complex(panel_quadrature(integrand, grid))


def riccati_amplitudes(profile, ctx, rtol=None, atol=None):
    return final_amplitudes(solve_riccati(profile, ctx, rtol=rtol, atol=atol), ctx)
