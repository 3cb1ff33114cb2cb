"""
Linear second-order reduction of the Riccati problem.

With X(x) = chi0 exp(-iK int_a^x m_minus Q) the Riccati equation becomes

    X'' = (d/dx log m_minus + 2iK m_plus) X' + K^2 m_minus^2 X,
    X(a) = chi0, X'(a) = 0,

which is singular wherever m_minus vanishes. ``dissect_and_solve`` cuts the
support around those zeros and composes the pieces.
"""
import logging
from collections import namedtuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .core import coefficient_arrays, mminus_derivative, normal_wavenumber
from .exceptions import MMinusVanishes, SpectralSingularity
from .integrate import PiecewiseSolution, integrate_segments, panel_quadrature
from .profiles import WindowedProfile
from .riccati import riccati_amplitudes
from .settings import solver_settings
from .slabstack import (
    Amplitudes,
    TransferMatrix2,
    amplitudes_from_matrix,
    compose,
    matrix_from_amplitudes,
)

logger = logging.getLogger(__name__)

XState = namedtuple("XState", ["x", "chi", "dchi", "eta"])

# half width of the window solved by the Riccati method around each zero,
# relative to the slab thickness
GAP_FRACTION = 0.01


def _scan_grid(profile):
    points = profile.breakpoints()
    per_piece = max(8, solver_settings.SCAN_NODES // (len(points) - 1))
    return [
        np.linspace(lo, hi, per_piece + 1)
        for lo, hi in zip(points[:-1], points[1:])
    ]


def _m_minus(profile, ctx, xs):
    return coefficient_arrays(profile, xs, ctx).m_minus


def _peak_mminus(profile, ctx):
    return max(
        float(np.max(np.abs(_m_minus(profile, ctx, xs))))
        for xs in _scan_grid(profile)
    )


def find_mminus_zeros(profile, ctx):
    """
    Zeros of m_minus on [a, a+ell] and whether m_minus vanishes throughout.

    Real m_minus is bracketed by sign changes and refined with brentq;
    complex m_minus by bounded minimization of |m_minus| around local minima
    of the scan.
    """
    pieces = _scan_grid(profile)
    values = [_m_minus(profile, ctx, xs) for xs in pieces]
    scale = max(float(np.max(np.abs(v))) for v in values)
    if scale == 0:
        return [], True
    threshold = solver_settings.MMINUS_ZERO * scale

    zeros = []
    for xs, ms in zip(pieces, values):
        mags = np.abs(ms)
        real = np.max(np.abs(ms.imag)) <= 1e-14 * scale
        for i in range(len(xs)):
            if mags[i] < threshold:
                zeros.append(float(xs[i]))
        for i in range(len(xs) - 1):
            if mags[i] < threshold or mags[i + 1] < threshold:
                continue
            if real:
                if np.sign(ms[i].real) == np.sign(ms[i + 1].real):
                    continue
                root = brentq(
                    lambda x: _m_minus(profile, ctx, x)[0].real,
                    xs[i],
                    xs[i + 1],
                    xtol=1e-14 * profile.ell,
                )
            else:
                lo = max(i - 1, 0)
                hi = min(i + 1, len(xs) - 1)
                if not (mags[i] <= mags[lo] and mags[i] <= mags[hi] and 0 < i):
                    continue
                found = minimize_scalar(
                    lambda x: abs(_m_minus(profile, ctx, x)[0]),
                    bounds=(xs[lo], xs[hi]),
                    method="bounded",
                    options={"xatol": 1e-14 * profile.ell},
                )
                root = float(found.x)
            if abs(_m_minus(profile, ctx, root)[0]) < threshold:
                zeros.append(float(root))

    zeros = sorted(set(zeros))
    logger.debug("m_minus has %d zero(s) on [%r, %r]", len(zeros), profile.a, profile.b)
    return zeros, False


class XTrajectory(object):
    """
    X, X' and eta at the accepted steps of the linear IVP.
    """

    def __init__(self, profile, solution, big_k, m_minus_stop):
        self.profile = profile
        self.solution = solution
        self.big_k = big_k
        self.m_minus_stop = m_minus_stop
        self.xs = solution.ts
        self.chi = solution.ys[0]
        self.dchi = solution.ys[1]
        self.eta = np.exp(solution.ys[2])

    def states(self):
        for row in zip(self.xs, self.chi, self.dchi, self.eta):
            yield XState(*row)

    def at(self, x):
        chi, dchi, log_eta = self.solution(x)
        return chi, dchi, np.exp(log_eta)


def _stitch(solutions):
    pieces = []
    ts = [solutions[0].ts[:1]]
    ys = [solutions[0].ys[:, :1]]
    nfev = 0
    for sol in solutions:
        pieces.extend(sol.pieces)
        ts.append(sol.ts[1:])
        ys.append(sol.ys[:, 1:])
        nfev += sol.nfev
    return PiecewiseSolution(
        pieces, np.concatenate(ts), np.concatenate(ys, axis=1), nfev=nfev
    )


def solve_linear_x(profile, ctx, rtol=None, atol=None, chi0=1.0):
    """
    Integrate X from X(a) = chi0, X'(a) = 0. The equation is linear, so the
    amplitudes only see X / chi0.
    """
    if rtol is None:
        rtol = solver_settings.RTOL
    if atol is None:
        atol = solver_settings.ATOL
    if not rtol > 0 or not atol > 0:
        raise ValueError("Tolerances must be positive")
    if chi0 == 0:
        raise ValueError("X(a) must be nonzero")

    zeros, null = find_mminus_zeros(profile, ctx)
    if null:
        raise MMinusVanishes(profile.a)
    if zeros:
        raise MMinusVanishes(zeros[0])

    big_k = normal_wavenumber(ctx)

    def rhs(x, y):
        coeffs = coefficient_arrays(profile, x, ctx)
        m_plus = coeffs.m_plus[0]
        m_minus = coeffs.m_minus[0]
        log_derivative = mminus_derivative(profile, x, ctx)[0] / m_minus
        return np.array(
            [
                y[1],
                (log_derivative + 2j * big_k * m_plus) * y[1]
                + big_k ** 2 * m_minus ** 2 * y[0],
                1j * big_k * (m_plus - 1),
            ]
        )

    # X'/m_minus is continuous where m_minus jumps, X' is not
    points = profile.breakpoints()
    state = np.array([chi0, 0, 0], dtype=complex)
    solutions = []
    for lo, hi in zip(points[:-1], points[1:]):
        if solutions:
            before, after = _m_minus(profile, ctx, [lo - 1e-12 * profile.ell, lo])
            state = state.copy()
            state[1] *= after / before
        sol = integrate_segments(
            rhs,
            state,
            [lo, hi],
            rtol=rtol,
            atol=atol,
            max_step=solver_settings.MAX_STEP_FACTOR / big_k,
        )
        solutions.append(sol)
        state = sol.ys[:, -1]

    m_minus_stop = _m_minus(profile, ctx, profile.b)[0]
    return XTrajectory(profile, _stitch(solutions), big_k, m_minus_stop)


def amplitudes_from_x(traj, ctx):
    big_k = normal_wavenumber(ctx)
    x_stop = traj.xs[-1]
    chi = traj.chi[-1] / traj.chi[0]
    if abs(chi) < solver_settings.SINGULAR_M22:
        raise SpectralSingularity(x_blow=float(x_stop), detail="(X vanishes)")

    r_right = (
        1j
        * np.exp(-2j * big_k * x_stop)
        * traj.dchi[-1]
        / (big_k * traj.m_minus_stop * traj.chi[-1])
    )
    t = traj.eta[-1] / chi

    def integrand(xs):
        chi_x, _, eta_x = traj.at(xs)
        m_minus = _m_minus(traj.profile, ctx, xs)
        scaled = eta_x * traj.chi[0] / chi_x
        return np.exp(2j * big_k * xs) * m_minus * scaled ** 2

    r_left = 1j * big_k * panel_quadrature(integrand, traj.xs)
    return Amplitudes(complex(r_left), complex(r_right), complex(t))


def _null_matrix(profile, ctx):
    big_k = normal_wavenumber(ctx)
    grid = np.linspace(profile.a, profile.b, 65)

    def excess(xs):
        return coefficient_arrays(profile, xs, ctx).m_plus - 1

    phase = np.exp(1j * big_k * panel_quadrature(excess, grid))
    return TransferMatrix2(complex(phase), 0j, 0j, complex(1 / phase))


def _windows(profile, zeros):
    gap = GAP_FRACTION * profile.ell
    cuts = []
    for zero in zeros:
        lo = max(profile.a, zero - gap)
        hi = min(profile.b, zero + gap)
        if cuts and lo <= cuts[-1][1]:
            cuts[-1] = (cuts[-1][0], hi)
        else:
            cuts.append((lo, hi))

    windows = []
    position = profile.a
    for lo, hi in cuts:
        if lo > position:
            windows.append((position, lo, False))
        windows.append((lo, hi, True))
        position = hi
    if position < profile.b:
        windows.append((position, profile.b, False))
    return windows


def dissect_and_solve(profile, ctx, rtol=None, atol=None):
    zeros, null = find_mminus_zeros(profile, ctx)
    if null:
        return amplitudes_from_matrix(_null_matrix(profile, ctx))

    scale = _peak_mminus(profile, ctx)
    matrices = []
    for lo, hi, around_zero in _windows(profile, zeros):
        window = WindowedProfile(profile, lo, hi)
        if around_zero:
            logger.warning(
                "m_minus vanishes in [%r, %r], solving that window by Riccati", lo, hi
            )
            amplitudes = riccati_amplitudes(window, ctx, rtol=rtol, atol=atol)
            matrices.append(matrix_from_amplitudes(amplitudes))
            continue
        peak = _peak_mminus(window, ctx)
        if peak < solver_settings.MMINUS_ZERO * scale:
            matrices.append(_null_matrix(window, ctx))
            continue
        traj = solve_linear_x(window, ctx, rtol=rtol, atol=atol)
        matrices.append(matrix_from_amplitudes(amplitudes_from_x(traj, ctx)))

    return amplitudes_from_matrix(compose(matrices[::-1]))
