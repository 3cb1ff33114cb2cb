"""
Incidence context and the local coefficients every solver consumes.
"""
import math
from collections import namedtuple
from enum import Enum

import numpy as np

from .exceptions import GrazingIncidence, ProfileError, ZeroAlpha
from .settings import solver_settings


class Polarization(str, Enum):
    TE = "TE"
    TM = "TM"


class WaveContext(namedtuple("WaveContext", ["k", "theta", "polarization"])):
    """
    Wavenumber ``k``, incidence angle ``theta`` in radians and polarization.

    Left incidence uses theta in (-90, 90) degrees and right incidence theta
    in (90, 270) degrees; the angle is stored as given.
    """

    __slots__ = ()

    def __new__(cls, k, theta=0.0, polarization=Polarization.TE):
        k = float(k)
        if not k > 0:
            raise ValueError("Wavenumber must be positive, got {!r}".format(k))
        theta = float(theta)
        if abs(math.cos(theta)) < solver_settings.GRAZING_COS:
            raise GrazingIncidence(theta)
        return super(WaveContext, cls).__new__(
            cls, k, theta, Polarization(polarization)
        )

    @classmethod
    def from_degrees(cls, k, theta_deg=0.0, polarization=Polarization.TE):
        return cls(k, math.radians(theta_deg), polarization)

    @property
    def theta_deg(self):
        return math.degrees(self.theta)

    @property
    def cos(self):
        return math.cos(self.theta)

    @property
    def sin(self):
        return math.sin(self.theta)

    @property
    def sec_sq(self):
        return 1.0 / self.cos ** 2

    @property
    def kx(self):
        return self.k * self.cos

    @property
    def ky(self):
        return self.k * self.sin

    @property
    def big_k(self):
        return abs(self.kx)

    def with_k(self, k):
        return WaveContext(k, self.theta, self.polarization)


def normal_wavenumber(ctx):
    if abs(ctx.cos) < solver_settings.GRAZING_COS:
        raise GrazingIncidence(ctx.theta)
    return ctx.big_k


def refractive_index(eps_hat, mu_hat):
    """
    n = sqrt(eps) sqrt(mu) with principal roots, so a double-negative medium
    gets a negative real part.
    """
    eps_hat = np.asarray(eps_hat, dtype=complex)
    mu_hat = np.asarray(mu_hat, dtype=complex)
    n = np.sqrt(eps_hat) * np.sqrt(mu_hat)
    if n.ndim == 0:
        return complex(n)
    return n


def tilde_n(n_sq, ctx, n=None):
    """
    Oblique-incidence index |sec theta| sqrt(n^2 - sin^2 theta).

    The sign follows the real part of ``n`` (principal sqrt of ``n_sq`` when
    not given); when Re n = 0 the root with Im >= 0 is taken.
    """
    n_sq = np.asarray(n_sq, dtype=complex)
    if n is None:
        n = np.sqrt(n_sq)
    n = np.asarray(n, dtype=complex)
    root = np.sqrt(ctx.sec_sq * (n_sq - ctx.sin ** 2))
    flip = np.where(n.real != 0, (n.real < 0) & (root.real > 0), root.imag < 0)
    root = np.where(flip, -root, root)
    if root.ndim == 0:
        return complex(root)
    return root


LocalCoefficients = namedtuple(
    "LocalCoefficients", ["alpha", "beta", "n_tilde", "m_plus", "m_minus", "v"]
)

CoefficientArrays = namedtuple(
    "CoefficientArrays", ["alpha", "beta", "n_sq", "nt_sq", "m_plus", "m_minus"]
)


def split_alpha_beta(eps, mu, ctx):
    if ctx.polarization == Polarization.TE:
        return mu, eps
    return eps, mu


def _check_nonzero(xs, alpha, beta):
    bad = alpha == 0
    if bad.any():
        raise ZeroAlpha(float(np.asarray(xs)[bad][0]))
    bad = beta == 0
    if bad.any():
        raise ProfileError(
            "eps_hat or mu_hat vanishes at x={!r}".format(float(np.asarray(xs)[bad][0]))
        )


def coefficient_arrays(profile, xs, ctx):
    """
    Vectorized alpha, beta, n^2, n_tilde^2 and m_plus/m_minus at ``xs``.

    m_pm is written as (sec^2 (n^2 - 1) +- alpha^2 + 1) / (2 alpha) so vacuum
    gives m_minus = 0 and m_plus = 1 exactly.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    eps = profile.eps_hat(xs)
    mu = profile.mu_hat(xs)
    alpha, beta = split_alpha_beta(eps, mu, ctx)
    _check_nonzero(xs, alpha, beta)

    n_sq = eps * mu
    excess = ctx.sec_sq * (n_sq - 1)
    alpha_sq = alpha * alpha
    m_plus = (excess + alpha_sq + 1) / (2 * alpha)
    m_minus = (excess - alpha_sq + 1) / (2 * alpha)
    return CoefficientArrays(alpha, beta, n_sq, excess + 1, m_plus, m_minus)


def local_coefficients(profile, x, ctx):
    x = float(x)
    coeffs = coefficient_arrays(profile, x, ctx)
    eps = profile.eps_hat(x)
    mu = profile.mu_hat(x)
    n = refractive_index(eps, mu)
    return LocalCoefficients(
        alpha=complex(coeffs.alpha[0]),
        beta=complex(coeffs.beta[0]),
        n_tilde=tilde_n(coeffs.n_sq[0], ctx, n=n),
        m_plus=complex(coeffs.m_plus[0]),
        m_minus=complex(coeffs.m_minus[0]),
        v=ctx.k ** 2 * (1 - complex(coeffs.n_sq[0])),
    )


def optical_potential(profile, x, ctx):
    scalar = np.ndim(x) == 0
    n_sq = profile.eps_hat(x) * profile.mu_hat(x)
    v = ctx.k ** 2 * (1 - n_sq)
    if scalar:
        return complex(v)
    return v


def mminus_derivative(profile, xs, ctx):
    """
    d m_minus / dx from the profile derivatives.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    eps = profile.eps_hat(xs)
    mu = profile.mu_hat(xs)
    deps = profile.deps_hat(xs)
    dmu = profile.dmu_hat(xs)
    alpha, _ = split_alpha_beta(eps, mu, ctx)
    dalpha, _ = split_alpha_beta(deps, dmu, ctx)

    numerator = ctx.sec_sq * (eps * mu - 1) - alpha * alpha + 1
    dnumerator = ctx.sec_sq * (deps * mu + eps * dmu) - 2 * alpha * dalpha
    return (dnumerator * alpha - numerator * dalpha) / (2 * alpha * alpha)
