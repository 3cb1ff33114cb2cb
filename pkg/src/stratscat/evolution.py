"""
The transfer matrix as the evolution operator of a traceless, non-Hermitian
2x2 generator: i dM/dx = H(x) M with M(a) = I.
"""
import logging
from collections import namedtuple

import numpy as np

from .core import coefficient_arrays, normal_wavenumber
from .integrate import integrate_segments
from .settings import solver_settings
from .slabstack import TransferMatrix2

logger = logging.getLogger(__name__)


class GeneratorSample(namedtuple("GeneratorSample", ["h11", "h12", "h21", "h22"])):
    __slots__ = ()

    @property
    def trace(self):
        return self.h11 + self.h22

    def as_array(self):
        return np.array([[self.h11, self.h12], [self.h21, self.h22]], dtype=complex)


def generator_arrays(profile, xs, ctx):
    """
    (h11, h12, h21) of the generator at ``xs``; h22 = -h11.
    """
    big_k = normal_wavenumber(ctx)
    coeffs = coefficient_arrays(profile, xs, ctx)
    phase = np.exp(2j * big_k * np.atleast_1d(xs))
    h11 = big_k * (1 - coeffs.m_plus)
    h12 = -big_k * coeffs.m_minus / phase
    h21 = big_k * coeffs.m_minus * phase
    return h11, h12, h21


def hamiltonian_at(profile, x, ctx):
    h11, h12, h21 = (complex(h[0]) for h in generator_arrays(profile, float(x), ctx))
    return GeneratorSample(h11, h12, h21, -h11)


class EvolutionResult(object):
    """
    Final transfer matrix plus the path M(x) at the accepted steps, with
    dense evaluation in between.
    """

    def __init__(self, solution):
        self.solution = solution
        self.xs = solution.ts
        self.matrices = solution.ys.T.reshape(-1, 2, 2)
        self.matrix = TransferMatrix2.from_array(self.matrices[-1])
        dets = np.linalg.det(self.matrices)
        self.det_drift = float(np.max(np.abs(dets - 1)))

    @property
    def nfev(self):
        return self.solution.nfev

    def at(self, x):
        return TransferMatrix2.from_array(self.solution(float(x)).reshape(2, 2))


def evolve_transfer(profile, ctx, rtol=None, atol=None):
    if rtol is None:
        rtol = solver_settings.RTOL
    if atol is None:
        atol = solver_settings.ATOL
    if not rtol > 0 or not atol > 0:
        raise ValueError("Tolerances must be positive")

    big_k = normal_wavenumber(ctx)

    def rhs(x, y):
        h11, h12, h21 = (complex(h[0]) for h in generator_arrays(profile, x, ctx))
        return -1j * np.array(
            [
                h11 * y[0] + h12 * y[2],
                h11 * y[1] + h12 * y[3],
                h21 * y[0] - h11 * y[2],
                h21 * y[1] - h11 * y[3],
            ]
        )

    solution = integrate_segments(
        rhs,
        np.array([1, 0, 0, 1], dtype=complex),
        profile.breakpoints(),
        rtol=rtol,
        atol=atol,
        max_step=solver_settings.MAX_STEP_FACTOR / big_k,
    )
    result = EvolutionResult(solution)
    if result.det_drift > solver_settings.PASS_TOLERANCE:
        logger.warning(
            "Determinant of the evolved transfer matrix drifted by %.3g",
            result.det_drift,
        )
    return result
