"""
The four CLI commands as functions from a RunConfig to result tables.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from itertools import product

from .core import WaveContext
from .designer import (
    DesignMode,
    designed_amplitudes,
    left_reflection_bound,
    parabolic_design,
    passivity_violations,
    phase_shift,
    pt_symmetry_check,
)
from .output import Table, amplitude_cells, amplitude_columns
from .riccati import riccati_amplitudes
from .xcheck import cross_validate, run_method

logger = logging.getLogger(__name__)

SCATTER_COLUMNS = (
    ["k", "theta_deg", "method", "rtol", "atol"]
    + amplitude_columns()
    + ["det_drift"]
)

DEVIATION_COLUMNS = [
    "k",
    "theta_deg",
    "method",
    "other_method",
    "deviation",
    "tolerance",
    "passed",
]

SUMMARY_COLUMNS = [
    "k",
    "theta_deg",
    "methods",
    "max_deviation",
    "tolerance",
    "passed",
    "seed",
]

PROFILE_COLUMNS = ["x", "re_eps_hat", "im_eps_hat", "re_mu_hat", "im_mu_hat"]


def _map_ordered(func, items, threads):
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def _error_text(error):
    if error is None:
        return None
    return "{}: {}".format(type(error).__name__, error)


def _sweep_points(config):
    return list(product(config.wavenumbers(), config.angles_deg()))


def scatter(config):
    profile = config.build_profile()
    points = _sweep_points(config)
    logger.info(
        "Scattering off %r at %d point(s) with %s",
        profile,
        len(points),
        ", ".join(config.methods),
    )

    def solve(point):
        k, theta_deg = point
        ctx = WaveContext.from_degrees(k, theta_deg, config.polarization)
        rows = []
        for method in config.methods:
            amplitudes, drift = run_method(
                method,
                profile,
                ctx,
                rtol=config.rtol,
                atol=config.atol,
                n_slices=config.n_slices,
            )
            rows.append(
                [k, theta_deg, method, config.rtol, config.atol]
                + amplitude_cells(amplitudes)
                + [drift]
            )
        return rows

    chunks = _map_ordered(solve, points, config.threads)
    rows = [row for chunk in chunks for row in chunk]
    return [Table("scatter", SCATTER_COLUMNS, rows)]


def xcheck(config):
    profile = config.build_profile()
    methods_rows = []
    deviation_rows = []
    residual_rows = []
    summary_rows = []
    for k, theta_deg in _sweep_points(config):
        ctx = WaveContext.from_degrees(k, theta_deg, config.polarization)
        report = cross_validate(
            profile,
            ctx,
            methods=config.methods,
            rtol=config.rtol,
            atol=config.atol,
            n_slices=config.n_slices,
            tolerance=config.tolerance,
            threads=config.threads,
            seed=config.seed,
        )
        for result in report.results.values():
            methods_rows.append(
                [k, theta_deg, result.method, config.rtol, config.atol]
                + amplitude_cells(result.amplitudes)
                + [result.det_drift, _error_text(result.error)]
            )
        for first, second, value in report.deviation_rows():
            deviation_rows.append(
                [
                    k,
                    theta_deg,
                    first,
                    second,
                    value,
                    report.tolerance,
                    value is not None and value < report.tolerance,
                ]
            )
        for name, value in report.residuals.items():
            residual_rows.append([k, theta_deg, name, value, report.tolerance])
        summary_rows.append(
            [
                k,
                theta_deg,
                ",".join(report.methods),
                report.max_deviation,
                report.tolerance,
                report.passed,
                report.seed,
            ]
        )
    return [
        Table("methods", SCATTER_COLUMNS + ["error"], methods_rows),
        Table("deviations", DEVIATION_COLUMNS, deviation_rows),
        Table(
            "residuals",
            ["k", "theta_deg", "residual", "value", "tolerance"],
            residual_rows,
        ),
        Table("summary", SUMMARY_COLUMNS, summary_rows),
    ]


def design(config):
    spec = config.build_design()
    block = config.design
    profile = config.build_designed_profile(spec)
    xs, eps, mu = profile.sample(block.nodes)
    profile_rows = [
        [x, e.real, e.imag, m.real, m.imag] for x, e, m in zip(xs, eps, mu)
    ]

    closed = None
    if spec.mode == DesignMode.TE_NONMAGNETIC:
        closed = designed_amplitudes(spec)
    phi = float((1 - spec.q.delta(spec.q.b) / spec.q.ell).real)
    verified = riccati_amplitudes(
        profile, spec.context, rtol=config.rtol, atol=config.atol
    )
    logger.info(
        "Designed %s profile, |R_r| = %.3g at the target",
        block.family,
        abs(verified.r_right),
    )

    summary = [
        block.family,
        spec.mode.value,
        spec.polarization.value,
        spec.k_star,
        block.theta_star_deg,
        spec.big_k_star,
        phi,
        None if closed is None else closed.t.real,
        None if closed is None else closed.t.imag,
        None if closed is None else abs(closed.t),
        None if closed is None else closed.r_left.real,
        None if closed is None else closed.r_left.imag,
        None if closed is None else abs(closed.r_left),
        abs(verified.r_right),
        abs(verified.r_left),
        abs(verified.t),
        pt_symmetry_check(spec),
        int(passivity_violations(profile, spec.polarization, block.nodes).size),
        "riccati",
        config.rtol,
        config.atol,
    ]
    summary_columns = [
        "family",
        "mode",
        "polarization",
        "k_star",
        "theta_star_deg",
        "big_k_star",
        "phi",
        "re_t",
        "im_t",
        "abs_t",
        "re_r_left",
        "im_r_left",
        "abs_r_left",
        "verified_abs_r_right",
        "verified_abs_r_left",
        "verified_abs_t",
        "pt_symmetric",
        "passivity_violations",
        "method",
        "rtol",
        "atol",
    ]
    return [
        Table("profile", PROFILE_COLUMNS, profile_rows),
        Table("summary", summary_columns, [summary]),
    ]


def figure(config):
    block = config.figure
    kappa_ells = block.kappa_ell.values()
    theta_star = math.radians(block.theta_star_deg)
    cos_abs = abs(math.cos(theta_star))

    phase_rows = [
        [kappa_ell, phase_shift(kappa_ell), "closed_form", None]
        for kappa_ell in kappa_ells
    ]

    def left_reflection(point):
        k_star_ell, kappa_ell = point
        spec = parabolic_design(kappa_ell, 1.0, k_star_ell / cos_abs, theta_star)
        r_left = abs(designed_amplitudes(spec).r_left)
        bound = left_reflection_bound(k_star_ell, kappa_ell)
        return [
            k_star_ell, kappa_ell, r_left, bound, r_left <= bound, "quadrature", None
        ]

    points = list(product(block.k_star_ell, kappa_ells))
    reflection_rows = _map_ordered(left_reflection, points, config.threads)
    return [
        Table("phase_shift", ["kappa_ell", "phi", "method", "tolerance"], phase_rows),
        Table(
            "left_reflection",
            [
                "k_star_ell",
                "kappa_ell",
                "abs_r_left",
                "bound",
                "within_bound",
                "method",
                "tolerance",
            ],
            reflection_rows,
        ),
    ]


COMMANDS = {"scatter": scatter, "design": design, "xcheck": xcheck, "figure": figure}


def run_command(config):
    return COMMANDS[config.command](config)
