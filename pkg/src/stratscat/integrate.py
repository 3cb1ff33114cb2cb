"""
Thin layer over scipy's adaptive DOP853 integrator that steps across the
smooth pieces of a profile one at a time and keeps their dense output.
"""
import logging

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp

from .exceptions import IntegrationFailure

logger = logging.getLogger(__name__)


class PiecewiseSolution(object):
    """
    Dense solution of an ODE integrated over consecutive segments.

    ``ts`` is the grid of accepted steps (in integration order) and ``ys``
    the state at those steps, shape ``(n_state, len(ts))``. ``event_x`` is
    set when a terminal event stopped the integration early.
    """

    def __init__(self, pieces, ts, ys, event_x=None, nfev=0):
        self.pieces = pieces
        self.ts = ts
        self.ys = ys
        self.event_x = event_x
        self.nfev = nfev

    @property
    def n_state(self):
        return self.ys.shape[0]

    @property
    def x_start(self):
        return self.ts[0]

    @property
    def x_stop(self):
        return self.ts[-1]

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.full((self.n_state, xs.size), np.nan, dtype=complex)
        for lo, hi, dense in self.pieces:
            mask = (xs >= lo) & (xs <= hi) & np.isnan(out[0])
            if mask.any():
                out[:, mask] = dense(xs[mask])
        if scalar:
            return out[:, 0]
        return out


def _clamped(rhs, start, stop):
    # stage evaluations must stay on this side of the breakpoints
    lo, hi = sorted((start, stop))
    pad = 1e-12 * (hi - lo)
    lo, hi = lo + pad, hi - pad

    def segment_rhs(x, y):
        return rhs(min(max(x, lo), hi), y)

    return segment_rhs


def integrate_segments(
    rhs,
    y0,
    breakpoints,
    rtol,
    atol,
    max_step=np.inf,
    events=None,
    reverse=False,
):
    """
    Integrate ``y' = rhs(x, y)`` across ``breakpoints`` (ascending), restarting
    the integrator at each one so jumps in the coefficients never fall inside
    a step. With ``reverse`` the integration runs from the last breakpoint to
    the first.
    """
    points = np.asarray(breakpoints, dtype=float)
    if reverse:
        points = points[::-1]

    y = np.asarray(y0, dtype=complex)
    pieces = []
    ts = [points[0]]
    ys = [y.copy()]
    event_x = None
    nfev = 0

    for start, stop in zip(points[:-1], points[1:]):
        if start == stop:
            continue
        sol = solve_ivp(
            _clamped(rhs, start, stop),
            (start, stop),
            y,
            method="DOP853",
            rtol=rtol,
            atol=atol,
            max_step=max_step,
            dense_output=True,
            events=events,
        )
        nfev += sol.nfev
        if sol.status == -1:
            raise IntegrationFailure(sol.message, x=float(sol.t[-1]))

        lo, hi = sorted((start, float(sol.t[-1])))
        pieces.append((lo, hi, sol.sol))
        ts.extend(sol.t[1:])
        ys.extend(sol.y[:, 1:].T)
        y = sol.y[:, -1]

        if sol.status == 1:
            hits = [t for t in sol.t_events if len(t)]
            event_x = float(hits[0][0])
            break

    logger.debug(
        "Integrated %d segment(s) with %d accepted steps and %d evaluations",
        len(pieces),
        len(ts) - 1,
        nfev,
    )
    return PiecewiseSolution(
        pieces, np.asarray(ts), np.asarray(ys).T, event_x=event_x, nfev=nfev
    )


def panel_quadrature(func, grid, order=8, cumulative=False):
    """
    Integrate the vectorized complex ``func`` over ``grid`` with a
    Gauss-Legendre rule of ``order`` nodes on every panel. With
    ``cumulative`` the running integral at each grid point is returned.
    """
    grid = np.asarray(grid, dtype=float)
    nodes, weights = leggauss(order)
    lo = grid[:-1, None]
    hi = grid[1:, None]
    half = 0.5 * (hi - lo)
    xs = 0.5 * (hi + lo) + half * nodes[None, :]
    values = np.asarray(func(xs.ravel()), dtype=complex).reshape(xs.shape)
    panels = (half[:, 0]) * (values @ weights)
    if cumulative:
        return np.concatenate([[0.0], np.cumsum(panels)])
    return panels.sum()
