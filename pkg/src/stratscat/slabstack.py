"""
Closed-form transfer matrices of homogeneous slabs, their ordered products,
and the dictionary between a transfer matrix and the scattering amplitudes.
"""
import cmath
import math
from collections import namedtuple

import numpy as np

from .core import normal_wavenumber, split_alpha_beta
from .exceptions import (
    InvalidPermittivity,
    ProfileError,
    SpectralSingularity,
    ZeroAlpha,
)
from .integrate import panel_quadrature
from .settings import solver_settings


class TransferMatrix2(namedtuple("TransferMatrix2", ["m11", "m12", "m21", "m22"])):
    """
    Maps the left plane-wave coefficients (A-, B-) to the right ones (A+, B+).
    """

    __slots__ = ()

    @classmethod
    def identity(cls):
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array, dtype=complex)
        return cls(
            complex(array[0, 0]),
            complex(array[0, 1]),
            complex(array[1, 0]),
            complex(array[1, 1]),
        )

    def as_array(self):
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def dot(self, other):
        return TransferMatrix2.from_array(self.as_array() @ other.as_array())

    def max_deviation(self, other):
        return float(np.max(np.abs(self.as_array() - other.as_array())))


class Amplitudes(namedtuple("Amplitudes", ["r_left", "r_right", "t"])):
    __slots__ = ()

    @property
    def moduli(self):
        return tuple(abs(v) for v in self)

    @property
    def phases(self):
        return tuple(cmath.phase(v) for v in self)

    def max_deviation(self, other):
        return max(abs(a - b) for a, b in zip(self, other))


def _sinc(m):
    small = np.abs(m) < solver_settings.SERIES_CUTOFF
    safe = np.where(small, 1.0, m)
    return np.where(small, 1 - m * m / 6, np.sin(safe) / safe)


def _slab_entries(eps_hat, mu_hat, x0, ell, ctx):
    """
    Entries of the slab matrices for arrays of layer parameters, shape
    ``(2, 2, n)``.

    With s = K ell sin(m)/m the off-diagonal and diagonal couplings are
    s * m_minus and s * m_plus, which stay finite as n_tilde -> 0.
    """
    eps_hat = np.atleast_1d(np.asarray(eps_hat, dtype=complex))
    mu_hat = np.atleast_1d(np.asarray(mu_hat, dtype=complex))
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    ell = np.atleast_1d(np.asarray(ell, dtype=float))
    alpha, _ = split_alpha_beta(eps_hat, mu_hat, ctx)
    if (alpha == 0).any():
        raise ZeroAlpha()

    big_k = normal_wavenumber(ctx)
    excess = ctx.sec_sq * (eps_hat * mu_hat - 1)
    nt_sq = excess + 1
    m_plus = (excess + alpha * alpha + 1) / (2 * alpha)
    m_minus = (excess - alpha * alpha + 1) / (2 * alpha)

    kl = big_k * ell
    m = kl * np.sqrt(nt_sq)
    s = kl * _sinc(m)
    cos_m = np.cos(m)
    far = np.exp(1j * big_k * (2 * x0 + ell))
    near = np.exp(1j * kl)

    return np.array(
        [
            [(cos_m + 1j * m_plus * s) / near, 1j * m_minus * s / far],
            [-1j * m_minus * s * far, (cos_m - 1j * m_plus * s) * near],
        ]
    )


def slab_matrix(eps_hat, mu_hat, x0, ell, ctx):
    if ell < 0:
        raise ValueError("Slab thickness must be non-negative, got {!r}".format(ell))
    entries = _slab_entries(eps_hat, mu_hat, x0, ell, ctx)
    return TransferMatrix2.from_array(entries[:, :, 0])


def _tree_product(stack):
    """
    stack[0] @ stack[1] @ ... @ stack[-1] for an array of shape (n, 2, 2),
    reduced pairwise.
    """
    while stack.shape[0] > 1:
        odd = stack[-1:] if stack.shape[0] % 2 else stack[:0]
        pairs = stack[0 : stack.shape[0] - odd.shape[0]]
        stack = np.concatenate([pairs[0::2] @ pairs[1::2], odd])
    return stack[0]


def compose(ms):
    """
    Ordered product ms[0] @ ms[1] @ ...; the last matrix belongs to the
    leftmost piece of the medium.
    """
    ms = list(ms)
    if not ms:
        raise ValueError("compose() needs at least one matrix")
    stack = np.array([m.as_array() for m in ms])
    return TransferMatrix2.from_array(_tree_product(stack))


def slice_and_multiply(profile, ctx, n_slices=None):
    """
    Replace the profile by ``n_slices`` homogeneous slabs sampled at their
    midpoints and multiply their matrices.
    """
    if n_slices is None:
        n_slices = solver_settings.N_SLICES
    n_slices = int(n_slices)
    if n_slices < 1:
        raise ValueError("n_slices must be at least 1, got {!r}".format(n_slices))

    edges = np.linspace(profile.a, profile.b, n_slices + 1)
    widths = np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    entries = _slab_entries(
        profile.eps_hat(mids), profile.mu_hat(mids), edges[:-1], widths, ctx
    )
    # rightmost slice first
    stack = np.moveaxis(entries, -1, 0)[::-1]
    return TransferMatrix2.from_array(_tree_product(stack))


def layer_stack_matrix(stack, ctx):
    """
    Exact transfer matrix of a piecewise-constant profile.
    """
    layers = stack.layers()
    if layers is None:
        raise ProfileError("{!r} is not piecewise constant".format(stack))
    x0s, widths, eps, mu = (np.array(col) for col in zip(*layers))
    entries = _slab_entries(eps, mu, x0s, widths, ctx)
    return TransferMatrix2.from_array(
        _tree_product(np.moveaxis(entries, -1, 0)[::-1])
    )


def amplitudes_from_matrix(m):
    if abs(m.m22) < solver_settings.SINGULAR_M22:
        raise SpectralSingularity(m22=m.m22)
    return Amplitudes(
        r_left=-m.m21 / m.m22,
        r_right=m.m12 / m.m22,
        t=1 / m.m22,
    )


def matrix_from_amplitudes(amplitudes):
    r_left, r_right, t = amplitudes
    if t == 0:
        raise ValueError("Transfer matrix is undefined for T = 0")
    return TransferMatrix2(
        t - r_left * r_right / t,
        r_right / t,
        -r_left / t,
        1 / t,
    )


def brewster_angle(eps_hat):
    """
    TM Brewster angle arctan(sqrt(eps_hat)) of a nonmagnetic medium, radians.
    """
    eps_hat = complex(eps_hat)
    if eps_hat.imag != 0 or eps_hat.real <= 0:
        raise InvalidPermittivity(
            "Brewster angle needs a positive real permittivity, got {!r}".format(
                eps_hat
            )
        )
    return math.atan(math.sqrt(eps_hat.real))


def _support_grid(profile, n_nodes):
    points = profile.breakpoints()
    per_piece = max(2, n_nodes // (len(points) - 1))
    pieces = [
        np.linspace(lo, hi, per_piece + 1)[:-1]
        for lo, hi in zip(points[:-1], points[1:])
    ]
    return np.concatenate(pieces + [points[-1:]])


def reflectionless_angle(profile, ctx):
    """
    The incidence angle (radians, in [0, 90) degrees) at which m_minus
    vanishes identically, i.e. cos^2 theta equals the constant real ratio
    (n^2 - 1) / (alpha^2 - 1) in (0, 1].
    """
    xs = _support_grid(profile, solver_settings.SCAN_NODES)
    eps = profile.eps_hat(xs)
    mu = profile.mu_hat(xs)
    alpha, _ = split_alpha_beta(eps, mu, ctx)
    numerator = eps * mu - 1
    denominator = alpha * alpha - 1

    vacuum = (np.abs(numerator) < 1e-14) & (np.abs(denominator) < 1e-14)
    if vacuum.all():
        raise ProfileError("Vacuum is reflectionless at every angle")
    if (np.abs(denominator[~vacuum]) < 1e-14).any():
        raise ProfileError(
            "alpha^2 = 1 where n^2 != 1: no angle makes the medium reflectionless"
        )
    ratio = numerator[~vacuum] / denominator[~vacuum]
    c = ratio[0]
    if np.max(np.abs(ratio - c)) > 1e-9 * max(1.0, abs(c)) or abs(c.imag) > 1e-12:
        raise ProfileError(
            "(n^2 - 1) / (alpha^2 - 1) is not a real constant on the slab"
        )
    c = c.real
    if not 0 < c <= 1:
        raise ProfileError(
            "(n^2 - 1) / (alpha^2 - 1) = {!r} lies outside (0, 1]".format(c)
        )
    return math.acos(math.sqrt(c))


def diagonal_reflectionless_matrix(profile, ctx):
    """
    diag(e^{i k rho}, e^{-i k rho}) with rho = cos(theta*) int (alpha - 1) dx,
    the transfer matrix at the reflectionless angle of ``profile``.
    """
    theta_star = reflectionless_angle(profile, ctx)

    def excess_alpha(xs):
        eps = profile.eps_hat(xs)
        mu = profile.mu_hat(xs)
        return split_alpha_beta(eps, mu, ctx)[0] - 1

    grid = _support_grid(profile, 256)
    rho = math.cos(theta_star) * panel_quadrature(excess_alpha, grid)
    phase = cmath.exp(1j * ctx.k * rho)
    return TransferMatrix2(phase, 0j, 0j, 1 / phase)

