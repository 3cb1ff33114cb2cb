"""
Permittivity/permeability profiles with compact support [a, a+ell].

Outside the support every profile is vacuum (eps_hat = mu_hat = 1). Profiles
are immutable and evaluate vectorized over numpy arrays.
"""
import numpy as np
from scipy.interpolate import PchipInterpolator

from .exceptions import ProfileError


def _evaluate(func, x, fill):
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.full(xs.shape, fill, dtype=complex)
    mask = func.__self__.support_mask(xs)
    if mask.any():
        out[mask] = func(xs[mask])
    if scalar:
        return out[0]
    return out


class MediumProfile(object):
    """
    Base class: subclasses implement ``_eps`` and optionally ``_mu``, ``_deps``,
    ``_dmu`` and ``interior_breakpoints`` for points inside the support.
    """

    def __init__(self, a, ell):
        ell = float(ell)
        if not ell > 0:
            raise ProfileError("Slab thickness must be positive, got {!r}".format(ell))
        self.a = float(a)
        self.ell = ell

    @property
    def b(self):
        return self.a + self.ell

    def support_mask(self, xs):
        return (xs >= self.a) & (xs <= self.b)

    def eps_hat(self, x):
        return _evaluate(self._eps, x, 1.0)

    def mu_hat(self, x):
        return _evaluate(self._mu, x, 1.0)

    def deps_hat(self, x):
        return _evaluate(self._deps, x, 0.0)

    def dmu_hat(self, x):
        return _evaluate(self._dmu, x, 0.0)

    def _mu(self, xs):
        return np.ones(xs.shape, dtype=complex)

    def _deps(self, xs):
        return self._central_difference(self._eps, xs)

    def _dmu(self, xs):
        return self._central_difference(self._mu, xs)

    def _central_difference(self, func, xs):
        h = 1e-6 * self.ell
        hi = np.minimum(xs + h, self.b)
        lo = np.maximum(xs - h, self.a)
        return (func(hi) - func(lo)) / (hi - lo)

    def interior_breakpoints(self):
        return []

    def breakpoints(self):
        inner = [x for x in self.interior_breakpoints() if self.a < x < self.b]
        return np.array([self.a] + sorted(inner) + [self.b])

    def layers(self):
        """
        The exact (x0, thickness, eps_hat, mu_hat) layers of a piecewise
        constant profile, or None when the profile varies continuously.
        """
        return None

    def conjugate(self):
        return ConjugateProfile(self)


class HomogeneousSlab(MediumProfile):
    def __init__(self, eps_hat, mu_hat=1.0, a=0.0, ell=1.0):
        super(HomogeneousSlab, self).__init__(a, ell)
        self.eps_value = complex(eps_hat)
        self.mu_value = complex(mu_hat)

    def __repr__(self):
        return "HomogeneousSlab(eps_hat={!r}, mu_hat={!r}, a={!r}, ell={!r})".format(
            self.eps_value, self.mu_value, self.a, self.ell
        )

    def _eps(self, xs):
        return np.full(xs.shape, self.eps_value, dtype=complex)

    def _mu(self, xs):
        return np.full(xs.shape, self.mu_value, dtype=complex)

    def _deps(self, xs):
        return np.zeros(xs.shape, dtype=complex)

    def _dmu(self, xs):
        return np.zeros(xs.shape, dtype=complex)

    def layers(self):
        return [(self.a, self.ell, self.eps_value, self.mu_value)]


class LinearRamp(MediumProfile):
    """
    eps_hat (and mu_hat) varying linearly from the start to the stop value
    across the support.
    """

    def __init__(self, eps_start, eps_stop, mu_start=1.0, mu_stop=1.0, a=0.0, ell=1.0):
        super(LinearRamp, self).__init__(a, ell)
        self.eps_start = complex(eps_start)
        self.eps_stop = complex(eps_stop)
        self.mu_start = complex(mu_start)
        self.mu_stop = complex(mu_stop)

    def _fraction(self, xs):
        return (xs - self.a) / self.ell

    def _eps(self, xs):
        return self.eps_start + (self.eps_stop - self.eps_start) * self._fraction(xs)

    def _mu(self, xs):
        return self.mu_start + (self.mu_stop - self.mu_start) * self._fraction(xs)

    def _deps(self, xs):
        slope = (self.eps_stop - self.eps_start) / self.ell
        return np.full(xs.shape, slope, dtype=complex)

    def _dmu(self, xs):
        slope = (self.mu_stop - self.mu_start) / self.ell
        return np.full(xs.shape, slope, dtype=complex)


class LayerStack(MediumProfile):
    """
    Piecewise-constant stack of homogeneous layers laid out from ``a``.
    """

    def __init__(self, thicknesses, eps_hats, mu_hats=None, a=0.0):
        thicknesses = np.asarray(thicknesses, dtype=float)
        if thicknesses.ndim != 1 or thicknesses.size == 0:
            raise ProfileError("A layer stack needs at least one layer")
        if (thicknesses <= 0).any():
            raise ProfileError("Layer thicknesses must be positive")
        eps_hats = np.asarray(eps_hats, dtype=complex)
        if mu_hats is None:
            mu_hats = np.ones(thicknesses.shape, dtype=complex)
        mu_hats = np.asarray(mu_hats, dtype=complex)
        if eps_hats.shape != thicknesses.shape or mu_hats.shape != thicknesses.shape:
            raise ProfileError("Layer parameters must have one value per layer")

        super(LayerStack, self).__init__(a, thicknesses.sum())
        self.thicknesses = thicknesses
        self.eps_values = eps_hats
        self.mu_values = mu_hats
        self.edges = self.a + np.concatenate([[0.0], np.cumsum(thicknesses)])

    def _index(self, xs):
        idx = np.searchsorted(self.edges, xs, side="right") - 1
        return np.clip(idx, 0, self.thicknesses.size - 1)

    def _eps(self, xs):
        return self.eps_values[self._index(xs)]

    def _mu(self, xs):
        return self.mu_values[self._index(xs)]

    def _deps(self, xs):
        return np.zeros(xs.shape, dtype=complex)

    def _dmu(self, xs):
        return np.zeros(xs.shape, dtype=complex)

    def interior_breakpoints(self):
        return list(self.edges[1:-1])

    def layers(self):
        return [
            (x0, d, eps, mu)
            for x0, d, eps, mu in zip(
                self.edges[:-1], self.thicknesses, self.eps_values, self.mu_values
            )
        ]


class _ComplexPchip(object):
    def __init__(self, xs, values):
        self.real = PchipInterpolator(xs, values.real)
        self.imag = PchipInterpolator(xs, values.imag)
        self.dreal = self.real.derivative()
        self.dimag = self.imag.derivative()

    def __call__(self, xs):
        return self.real(xs) + 1j * self.imag(xs)

    def derivative(self, xs):
        return self.dreal(xs) + 1j * self.dimag(xs)


class TabulatedProfile(MediumProfile):
    """
    Samples interpolated with monotone piecewise-cubic (PCHIP) interpolants
    on the real and imaginary parts. Endpoint samples must be vacuum.
    """

    def __init__(self, xs, eps_samples, mu_samples=None):
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 1 or xs.size < 2:
            raise ProfileError("A tabulated profile needs at least two samples")
        if (np.diff(xs) <= 0).any():
            raise ProfileError("Sample positions must be strictly increasing")
        eps_samples = np.asarray(eps_samples, dtype=complex)
        if mu_samples is None:
            mu_samples = np.ones(xs.shape, dtype=complex)
        mu_samples = np.asarray(mu_samples, dtype=complex)
        for name, samples in (("eps_hat", eps_samples), ("mu_hat", mu_samples)):
            if samples.shape != xs.shape:
                raise ProfileError("{} needs one sample per position".format(name))
            if abs(samples[0] - 1) > 1e-12 or abs(samples[-1] - 1) > 1e-12:
                raise ProfileError(
                    "{} samples must equal 1 at both ends of the table".format(name)
                )

        super(TabulatedProfile, self).__init__(xs[0], xs[-1] - xs[0])
        self.xs = xs
        self.eps_samples = eps_samples
        self.mu_samples = mu_samples
        self.eps_interp = _ComplexPchip(xs, eps_samples)
        self.mu_interp = _ComplexPchip(xs, mu_samples)

    def _eps(self, xs):
        return self.eps_interp(xs)

    def _mu(self, xs):
        return self.mu_interp(xs)

    def _deps(self, xs):
        return self.eps_interp.derivative(xs)

    def _dmu(self, xs):
        return self.mu_interp.derivative(xs)


def load_profile_table(file_name, a=None):
    """
    Read a whitespace separated table with columns ``x, Re eps, Im eps`` and
    optionally ``Re mu, Im mu``. With ``a`` the positions are shifted so the
    table starts there.
    """
    data = np.loadtxt(file_name, ndmin=2)
    if data.shape[1] not in (3, 5):
        raise ProfileError(
            "Profile table {} must have 3 or 5 columns, found {}".format(
                file_name, data.shape[1]
            )
        )
    eps = data[:, 1] + 1j * data[:, 2]
    mu = None
    if data.shape[1] == 5:
        mu = data[:, 3] + 1j * data[:, 4]
    xs = data[:, 0]
    if a is not None:
        xs = xs - xs[0] + a
    return TabulatedProfile(xs, eps, mu)


class FunctionProfile(MediumProfile):
    """
    User supplied vectorized callables for eps_hat and mu_hat inside the
    support, with optional derivative callables.
    """

    def __init__(self, a, ell, eps=None, mu=None, deps=None, dmu=None, breaks=()):
        super(FunctionProfile, self).__init__(a, ell)
        self.eps_func = eps
        self.mu_func = mu
        self.deps_func = deps
        self.dmu_func = dmu
        self.breaks = list(breaks)

    def _call(self, func, xs, default):
        if func is None:
            return np.full(xs.shape, default, dtype=complex)
        return np.asarray(func(xs), dtype=complex) * np.ones(xs.shape)

    def _eps(self, xs):
        return self._call(self.eps_func, xs, 1.0)

    def _mu(self, xs):
        return self._call(self.mu_func, xs, 1.0)

    def _deps(self, xs):
        if self.deps_func is None:
            if self.eps_func is None:
                return np.zeros(xs.shape, dtype=complex)
            return super(FunctionProfile, self)._deps(xs)
        return self._call(self.deps_func, xs, 0.0)

    def _dmu(self, xs):
        if self.dmu_func is None:
            if self.mu_func is None:
                return np.zeros(xs.shape, dtype=complex)
            return super(FunctionProfile, self)._dmu(xs)
        return self._call(self.dmu_func, xs, 0.0)

    def interior_breakpoints(self):
        return self.breaks


class BumpProfile(MediumProfile):
    """
    Sum of Gaussian bumps, each ``(amplitude, center, width)``, multiplied by
    the window sin^2(pi (x-a)/ell) so the profile joins vacuum smoothly.
    """

    def __init__(self, a, ell, eps_bumps=(), mu_bumps=()):
        super(BumpProfile, self).__init__(a, ell)
        self.eps_bumps = [tuple(b) for b in eps_bumps]
        self.mu_bumps = [tuple(b) for b in mu_bumps]

    def _window(self, xs):
        phase = np.pi * (xs - self.a) / self.ell
        return np.sin(phase) ** 2, np.pi / self.ell * np.sin(2 * phase)

    def _sum(self, bumps, xs):
        total = np.zeros(xs.shape, dtype=complex)
        dtotal = np.zeros(xs.shape, dtype=complex)
        for amplitude, center, width in bumps:
            g = amplitude * np.exp(-(((xs - center) / width) ** 2))
            total += g
            dtotal += -2 * (xs - center) / width ** 2 * g
        window, dwindow = self._window(xs)
        return 1 + window * total, dwindow * total + window * dtotal

    def _eps(self, xs):
        return self._sum(self.eps_bumps, xs)[0]

    def _mu(self, xs):
        return self._sum(self.mu_bumps, xs)[0]

    def _deps(self, xs):
        return self._sum(self.eps_bumps, xs)[1]

    def _dmu(self, xs):
        return self._sum(self.mu_bumps, xs)[1]


class WindowedProfile(MediumProfile):
    """
    ``parent`` restricted to [lo, hi] with vacuum elsewhere: one slice of a
    dissected medium.
    """

    def __init__(self, parent, lo, hi):
        lo = max(float(lo), parent.a)
        hi = min(float(hi), parent.b)
        super(WindowedProfile, self).__init__(lo, hi - lo)
        self.parent = parent

    def _eps(self, xs):
        return self.parent._eps(xs)

    def _mu(self, xs):
        return self.parent._mu(xs)

    def _deps(self, xs):
        return self.parent._deps(xs)

    def _dmu(self, xs):
        return self.parent._dmu(xs)

    def interior_breakpoints(self):
        return list(self.parent.breakpoints())

    def layers(self):
        parent_layers = self.parent.layers()
        if parent_layers is None:
            return None
        out = []
        for x0, d, eps, mu in parent_layers:
            lo = max(x0, self.a)
            hi = min(x0 + d, self.b)
            if hi > lo:
                out.append((lo, hi - lo, eps, mu))
        return out


class ConjugateProfile(MediumProfile):
    """
    The time-reversed medium: eps_hat -> eps_hat*, mu_hat -> mu_hat*.
    """

    def __init__(self, parent):
        super(ConjugateProfile, self).__init__(parent.a, parent.ell)
        self.parent = parent

    def _eps(self, xs):
        return np.conj(self.parent._eps(xs))

    def _mu(self, xs):
        return np.conj(self.parent._mu(xs))

    def _deps(self, xs):
        return np.conj(self.parent._deps(xs))

    def _dmu(self, xs):
        return np.conj(self.parent._dmu(xs))

    def interior_breakpoints(self):
        return self.parent.interior_breakpoints()

    def layers(self):
        parent_layers = self.parent.layers()
        if parent_layers is None:
            return None
        return [(x0, d, np.conj(eps), np.conj(mu)) for x0, d, eps, mu in parent_layers]

    def conjugate(self):
        return self.parent
