"""
Independent oracles and cross-method validation.
"""
import logging
import math
from collections import OrderedDict, namedtuple
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np
from scipy.optimize import root

from .core import Polarization, coefficient_arrays, normal_wavenumber
from .evolution import evolve_transfer
from .exceptions import StratScatError
from .integrate import integrate_segments
from .linearx import dissect_and_solve
from .profiles import BumpProfile
from .riccati import final_amplitudes, left_reflection_fourier, solve_riccati
from .settings import solver_settings
from .slabstack import (
    Amplitudes,
    TransferMatrix2,
    amplitudes_from_matrix,
    layer_stack_matrix,
    slab_matrix,
    slice_and_multiply,
)
from .utils import loglog_slope, sorted_methods

logger = logging.getLogger(__name__)


def _tolerances(rtol, atol):
    if rtol is None:
        rtol = solver_settings.RTOL
    if atol is None:
        atol = solver_settings.ATOL
    return rtol, atol


def _wave_rhs(profile, ctx, big_k):
    """
    psi' = alpha w, w' = -K^2 n_tilde^2 psi / alpha, with w = psi'/alpha
    continuous across jumps of the medium.
    """

    def rhs(x, y):
        coeffs = coefficient_arrays(profile, x, ctx)
        alpha = coeffs.alpha[0]
        return np.array(
            [alpha * y[1], -(big_k ** 2) * coeffs.nt_sq[0] * y[0] / alpha]
        )

    return rhs


def _plane_wave_coefficients(psi, w, x, big_k):
    """
    (A, B) with psi = A exp(iKx) + B exp(-iKx) in vacuum.
    """
    a = 0.5 * np.exp(-1j * big_k * x) * (psi + w / (1j * big_k))
    b = 0.5 * np.exp(1j * big_k * x) * (psi - w / (1j * big_k))
    return a, b


DirectShots = namedtuple("DirectShots", ["r_left", "t_left", "r_right", "t_right"])


def direct_shots(profile, ctx, rtol=None, atol=None):
    """
    Solve the wave equation for left and right incidence separately. Left
    incidence shoots backwards from a pure transmitted wave at the right edge,
    right incidence forwards from the left edge.
    """
    rtol, atol = _tolerances(rtol, atol)
    big_k = normal_wavenumber(ctx)
    rhs = _wave_rhs(profile, ctx, big_k)
    points = profile.breakpoints()
    max_step = solver_settings.MAX_STEP_FACTOR / big_k
    a, b = profile.a, profile.b

    start = np.exp(1j * big_k * b)
    backward = integrate_segments(
        rhs,
        np.array([start, 1j * big_k * start]),
        points,
        rtol=rtol,
        atol=atol,
        max_step=max_step,
        reverse=True,
    )
    amp_in, amp_back = _plane_wave_coefficients(*backward.ys[:, -1], a, big_k)

    start = np.exp(-1j * big_k * a)
    forward = integrate_segments(
        rhs,
        np.array([start, -1j * big_k * start]),
        points,
        rtol=rtol,
        atol=atol,
        max_step=max_step,
    )
    amp_out, amp_in_right = _plane_wave_coefficients(*forward.ys[:, -1], b, big_k)

    return DirectShots(
        r_left=complex(amp_back / amp_in),
        t_left=complex(1 / amp_in),
        r_right=complex(amp_out / amp_in_right),
        t_right=complex(1 / amp_in_right),
    )


def helmholtz_direct(profile, ctx, rtol=None, atol=None):
    shots = direct_shots(profile, ctx, rtol=rtol, atol=atol)
    return Amplitudes(shots.r_left, shots.r_right, shots.t_left)


def reciprocity_residual(profile, ctx, rtol=None, atol=None):
    shots = direct_shots(profile, ctx, rtol=rtol, atol=atol)
    return abs(shots.t_left - shots.t_right)


def psi_two_component(profile, ctx, rtol=None, atol=None):
    """
    Propagate the two-component wave function
    Psi = (exp(-iKx)(psi + w/iK), exp(iKx)(psi - w/iK)) / 2 from the left
    edge for the two unit initial vectors; the results are the columns of
    the transfer matrix.
    """
    rtol, atol = _tolerances(rtol, atol)
    big_k = normal_wavenumber(ctx)
    wave_rhs = _wave_rhs(profile, ctx, big_k)

    def rhs(x, y):
        out = np.empty(4, dtype=complex)
        up = np.exp(1j * big_k * x)
        for col in (0, 2):
            psi1, psi2 = y[col], y[col + 1]
            psi = up * psi1 + psi2 / up
            w = 1j * big_k * (up * psi1 - psi2 / up)
            dpsi, dw = wave_rhs(x, np.array([psi, w]))
            out[col] = -1j * big_k * psi1 + 0.5 / up * (dpsi + dw / (1j * big_k))
            out[col + 1] = 1j * big_k * psi2 + 0.5 * up * (dpsi - dw / (1j * big_k))
        return out

    solution = integrate_segments(
        rhs,
        np.array([1, 0, 0, 1], dtype=complex),
        profile.breakpoints(),
        rtol=rtol,
        atol=atol,
        max_step=solver_settings.MAX_STEP_FACTOR / big_k,
    )
    col1 = solution.ys[0:2, -1]
    col2 = solution.ys[2:4, -1]
    return TransferMatrix2(col1[0], col2[0], col1[1], col2[1])


MethodResult = namedtuple(
    "MethodResult", ["method", "amplitudes", "det_drift", "error"]
)


def _det_drift(matrix):
    return abs(matrix.det - 1)


def _run_riccati(profile, ctx, rtol, atol, n_slices):
    traj = solve_riccati(profile, ctx, rtol=rtol, atol=atol)
    return final_amplitudes(traj, ctx), None


def _run_evolution(profile, ctx, rtol, atol, n_slices):
    result = evolve_transfer(profile, ctx, rtol=rtol, atol=atol)
    return amplitudes_from_matrix(result.matrix), result.det_drift


def _run_slabstack(profile, ctx, rtol, atol, n_slices):
    if profile.layers() is not None:
        matrix = layer_stack_matrix(profile, ctx)
    else:
        matrix = slice_and_multiply(profile, ctx, n_slices)
    return amplitudes_from_matrix(matrix), _det_drift(matrix)


def _run_linearx(profile, ctx, rtol, atol, n_slices):
    return dissect_and_solve(profile, ctx, rtol=rtol, atol=atol), None


def _run_helmholtz(profile, ctx, rtol, atol, n_slices):
    return helmholtz_direct(profile, ctx, rtol=rtol, atol=atol), None


def _run_psi(profile, ctx, rtol, atol, n_slices):
    matrix = psi_two_component(profile, ctx, rtol=rtol, atol=atol)
    return amplitudes_from_matrix(matrix), _det_drift(matrix)


METHODS = OrderedDict(
    [
        ("riccati", _run_riccati),
        ("evolution", _run_evolution),
        ("slabstack", _run_slabstack),
        ("linearx", _run_linearx),
        ("helmholtz", _run_helmholtz),
        ("psi", _run_psi),
    ]
)


def run_method(method, profile, ctx, rtol=None, atol=None, n_slices=None):
    """
    Amplitudes and measured determinant drift (None when the method has no
    transfer matrix) of one solver.
    """
    try:
        runner = METHODS[method]
    except KeyError:
        raise ValueError(
            "Unknown method {!r}, expected one of {}".format(
                method, ", ".join(METHODS)
            )
        )
    rtol, atol = _tolerances(rtol, atol)
    if n_slices is None:
        n_slices = solver_settings.N_SLICES
    return runner(profile, ctx, rtol, atol, n_slices)


def _scaled_deviation(first, second):
    scale = max([1.0] + [abs(v) for v in first] + [abs(v) for v in second])
    return first.max_deviation(second) / scale


class ValidationReport(object):
    """
    Per-method results, symmetric pairwise deviations and invariant residuals
    of one cross-validation run.
    """

    def __init__(self, results, residuals, tolerance, seed=None):
        self.results = results
        self.residuals = residuals
        self.tolerance = tolerance
        self.seed = seed
        self.deviations = {}
        ok = [r for r in results.values() if r.error is None]
        for first, second in combinations(ok, 2):
            value = _scaled_deviation(first.amplitudes, second.amplitudes)
            self.deviations[frozenset((first.method, second.method))] = value

    @property
    def methods(self):
        return list(self.results)

    def deviation(self, first, second):
        if first == second:
            return 0.0
        return self.deviations.get(frozenset((first, second)))

    @property
    def max_deviation(self):
        return max(self.deviations.values(), default=0.0)

    @property
    def errors(self):
        return {m: r.error for m, r in self.results.items() if r.error is not None}

    @property
    def passed(self):
        if self.errors:
            return False
        if self.max_deviation >= self.tolerance:
            return False
        return all(v < self.tolerance for v in self.residuals.values() if v is not None)

    def deviation_rows(self):
        for first, second in combinations(self.methods, 2):
            yield first, second, self.deviation(first, second)


def is_pt_symmetric(profile, n_nodes=None):
    """
    True when eps_hat(a+b-x)* = eps_hat(x) and likewise mu_hat.
    """
    if n_nodes is None:
        n_nodes = solver_settings.SCAN_NODES
    xs = np.linspace(profile.a, profile.b, int(n_nodes) + 1)
    mirrored = profile.a + profile.b - xs
    for func in (profile.eps_hat, profile.mu_hat):
        if np.max(np.abs(np.conj(func(mirrored)) - func(xs))) > 1e-10:
            return False
    return True


def _unitarity_residual(amplitudes):
    t_sq = abs(amplitudes.t) ** 2
    product = abs(amplitudes.r_left * amplitudes.r_right)
    return min(abs(t_sq + product - 1), abs(t_sq - product - 1))


def cross_validate(
    profile,
    ctx,
    methods=None,
    rtol=None,
    atol=None,
    n_slices=None,
    tolerance=None,
    threads=None,
    seed=None,
):
    if methods is None:
        methods = list(METHODS)
    methods = sorted_methods(set(methods))
    if len(methods) < 2:
        raise ValueError("Cross-validation needs at least two methods")
    if tolerance is None:
        tolerance = solver_settings.PASS_TOLERANCE
    rtol, atol = _tolerances(rtol, atol)

    def attempt(method):
        try:
            amplitudes, drift = run_method(
                method, profile, ctx, rtol=rtol, atol=atol, n_slices=n_slices
            )
        except StratScatError as exc:
            logger.info("Method %s failed: %s", method, exc)
            return MethodResult(method, None, None, exc)
        return MethodResult(method, amplitudes, drift, None)

    with ThreadPoolExecutor(max_workers=threads) as executor:
        results = OrderedDict(
            (r.method, r) for r in executor.map(attempt, methods)
        )

    residuals = OrderedDict()
    try:
        residuals["reciprocity"] = reciprocity_residual(profile, ctx, rtol, atol)
    except StratScatError:
        residuals["reciprocity"] = None
    try:
        traj = solve_riccati(profile, ctx, rtol=rtol, atol=atol)
        fourier = left_reflection_fourier(profile, traj, ctx)
        residuals["fourier"] = abs(fourier - complex(traj.rl[-1]))
    except StratScatError:
        residuals["fourier"] = None
    if is_pt_symmetric(profile):
        reference = next(
            (r.amplitudes for r in results.values() if r.error is None), None
        )
        if reference is not None:
            residuals["unitarity"] = _unitarity_residual(reference)

    report = ValidationReport(results, residuals, tolerance, seed=seed)
    logger.info(
        "Cross-validated %d methods, max deviation %.3g, %s",
        len(methods),
        report.max_deviation,
        "passed" if report.passed else "failed",
    )
    return report


ConvergenceStudy = namedtuple("ConvergenceStudy", ["rows", "slope", "reference"])


def convergence_study(profile, ctx, n_list):
    """
    Error of slice_and_multiply for each slice count against the most
    trusted reference: the exact layer product for piecewise-constant
    profiles, a tight Riccati solve otherwise.
    """
    n_list = [int(n) for n in n_list]
    if not n_list or n_list != sorted(n_list):
        raise ValueError("Slice counts must be given in ascending order")

    if profile.layers() is not None:
        reference = amplitudes_from_matrix(layer_stack_matrix(profile, ctx))
    else:
        reference = final_amplitudes(
            solve_riccati(profile, ctx, rtol=1e-12, atol=1e-14), ctx
        )

    rows = []
    for n in n_list:
        approx = amplitudes_from_matrix(slice_and_multiply(profile, ctx, n))
        rows.append((n, approx.max_deviation(reference)))

    errors = np.array([e for _, e in rows])
    slope = None
    if len(rows) > 1 and errors.min() > 1e-13:
        slope = loglog_slope([n for n, _ in rows], errors)
    return ConvergenceStudy(rows, slope, reference)


def random_profile(seed, a=0.0, ell=1.0, magnetic=False, lossy=True):
    """
    3 to 6 windowed Gaussian bumps with |eps_hat - 1| <= 1.5 (and mu_hat when
    ``magnetic``); imaginary parts are non-negative so the medium is passive.
    """
    rng = np.random.default_rng(seed)

    def bumps():
        count = rng.integers(3, 7)
        real = rng.uniform(-0.08, 0.24, size=count)
        imag = rng.uniform(0.0, 0.03, size=count) if lossy else np.zeros(count)
        centers = a + ell * rng.uniform(0.2, 0.8, size=count)
        widths = ell * rng.uniform(0.08, 0.25, size=count)
        return [
            (complex(re, im), c, w) for re, im, c, w in zip(real, imag, centers, widths)
        ]

    eps_bumps = bumps()
    mu_bumps = bumps() if magnetic else ()
    return BumpProfile(a, ell, eps_bumps=eps_bumps, mu_bumps=mu_bumps)


SingularPoint = namedtuple("SingularPoint", ["k", "eps_hat", "m22"])


def locate_spectral_singularity(eps_real, ell, ctx, k_guess=None, mode=4):
    """
    Wavenumber and gain (negative Im eps_hat) at which a homogeneous slab of
    real permittivity part ``eps_real`` on [0, ell] has M22 = 0.

    The initial guess takes the ``mode``-th Fabry-Perot resonance and the
    gain that balances the mirror losses, then both are refined by a 2D
    root search on Re/Im M22.
    """
    sin_sq = ctx.sin ** 2
    cos_abs = abs(ctx.cos)
    n_real = math.sqrt((eps_real - sin_sq) / ctx.cos ** 2)
    alpha = eps_real if ctx.polarization == Polarization.TM else 1.0
    # Fresnel ratio (n~ + alpha)/(n~ - alpha) of the slab faces
    ratio = abs((n_real + alpha) / (n_real - alpha))
    big_k = mode * math.pi / (n_real * ell) if k_guess is None else k_guess * cos_abs
    n_imag = -math.log(ratio) / (big_k * ell)
    eps_imag = ctx.cos ** 2 * 2 * n_real * n_imag

    def residual(params):
        k, imag = params
        if not k > 0:
            return [1e3, 1e3]
        m22 = slab_matrix(
            complex(eps_real, imag), 1.0, 0.0, ell, ctx.with_k(k)
        ).m22
        return [m22.real, m22.imag]

    found = root(residual, [big_k / cos_abs, eps_imag], method="hybr", tol=1e-14)
    k, imag = found.x
    eps_hat = complex(eps_real, imag)
    m22 = slab_matrix(eps_hat, 1.0, 0.0, ell, ctx.with_k(k)).m22
    logger.debug(
        "Spectral singularity search converged=%s at k=%r eps=%r",
        found.success,
        k,
        eps_hat,
    )
    return SingularPoint(float(k), eps_hat, abs(m22))

