"""Invariant laws of the switched process on an extinction face.

On the face ``y = 0`` the abundance x follows the switched logistic
``dx/dt = alpha_i x (1 - a_i x)``. Its stationary law is either a point mass
(equal carrying capacities) or has densities ``h0, h1`` on the interval
between ``p0 = 1/a0`` and ``p1 = 1/a1``:

    h1(x) = C p1 |x-p1|^(g1-1) |p0-x|^g0     / (alpha1 x^(1+g0+g1))
    h0(x) = C p0 |x-p1|^g1     |p0-x|^(g0-1) / (alpha0 x^(1+g0+g1))

with ``g_i = lambda_i / alpha_i``.

Integrals are evaluated in the coordinate ``u = p0 (x - p1) / (x (p0 - p1))``,
which maps the support onto (0, 1) with ``1/x = (1-u)/p1 + u/p0`` linear in
``u``. In that coordinate the factor ``x^-(1+g0+g1)`` disappears and

    h1(x) dx = (K/alpha1) u^(g1-1) (1-u)^g0     du
    h0(x) dx = (K/alpha0) u^g1     (1-u)^(g0-1) du,

so each regime's conditional law is a Beta law and Gauss-Jacobi rules stay
accurate even when ``g_i`` is in the millions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import betainc, betaln

from .envmodel import EnvironmentPair, SwitchRates
from .errors import DiracMeasure, InputError, NormalizationFailure
from .quadrature import DEFAULT_RTOL, QuadResult, integrate_singular

DIRAC_RTOL = 1e-12
MASS_TOL = 1e-6


@dataclass(frozen=True)
class DiracBoundary:
    face: str
    p: float
    nu1: float
    lambda0: float
    lambda1: float

    kind = "dirac"

    @property
    def p_lo(self) -> float:
        return self.p

    @property
    def p_hi(self) -> float:
        return self.p


@dataclass(frozen=True)
class ContinuousBoundary:
    face: str
    p0: float
    p1: float
    alpha0: float
    alpha1: float
    lambda0: float
    lambda1: float
    gamma0: float
    gamma1: float
    log_K: float
    log_norm_C: float
    mass0: float
    mass1: float
    achieved: float

    kind = "continuous"

    @property
    def p_lo(self) -> float:
        return min(self.p0, self.p1)

    @property
    def p_hi(self) -> float:
        return max(self.p0, self.p1)

    @property
    def norm_C(self) -> float:
        """Normalization constant of the densities (may overflow for huge rates)."""
        return math.exp(self.log_norm_C)

    @property
    def marginal_C(self) -> float:
        """Constant in ``marginal = marginal_C * theta(x) * (p1/alpha1 |x-p0| + p0/alpha0 |p1-x|)``."""
        return self.norm_C

    def to_u(self, x):
        return self.p0 * (x - self.p1) / (x * (self.p0 - self.p1))

    def to_x(self, u):
        return 1.0 / ((1.0 - u) / self.p1 + u / self.p0)


BoundaryMeasure = Union[DiracBoundary, ContinuousBoundary]


def _face_parameters(pair: EnvironmentPair, face: str) -> EnvironmentPair:
    if face == "y":
        return pair
    if face == "x":
        return pair.swapped()
    raise InputError(f"face must be 'x' or 'y', got {face!r}")


def boundary_measure(pair: EnvironmentPair, rates: SwitchRates, face: str = "y",
                     rel_tol: float = DEFAULT_RTOL) -> BoundaryMeasure:
    """Stationary law on the face where species ``face`` is absent.

    ``face='y'`` gives the law of x on ``y = 0``; ``face='x'`` gives the law
    of y on ``x = 0`` (computed on the species-swapped pair).
    """
    eff = _face_parameters(pair, face)
    e0, e1 = eff.env0, eff.env1
    lam0, lam1 = rates.lambda0, rates.lambda1
    p0, p1 = e0.p, e1.p
    if abs(p0 - p1) <= DIRAC_RTOL * max(p0, p1):
        return DiracBoundary(face, p0, lam0 / (lam0 + lam1), lam0, lam1)

    a0, a1 = e0.alpha, e1.alpha
    g0, g1 = lam0 / a0, lam1 / a1
    g = g0 + g1
    norm = integrate_singular(lambda u: (1.0 - u) / a1 + u / a0, 0.0, 1.0, g1 - 1.0, g0 - 1.0,
                              rel_tol=rel_tol, normalized=True)
    log_K = -betaln(g1, g0) - math.log(norm.value)
    log_C = log_K - g * math.log(abs(p0 - p1)) + g1 * math.log(p0) + g0 * math.log(p1)

    # Regime masses from their own Beta laws, checked against the chain's
    # stationary weights rather than imposed. B(g1, g0+1) / B(g1, g0) = g0/g
    # avoids differencing two huge betaln values.
    mass1 = (g0 / g) / (a1 * norm.value)
    mass0 = (g1 / g) / (a0 * norm.value)
    want1 = lam0 / (lam0 + lam1)
    if abs(mass1 - want1) > MASS_TOL or abs(mass0 - (1.0 - want1)) > MASS_TOL:
        raise NormalizationFailure(
            f"regime masses ({mass0}, {mass1}) disagree with ({1 - want1}, {want1})")
    return ContinuousBoundary(face, p0, p1, a0, a1, lam0, lam1, g0, g1,
                              float(log_K), float(log_C), mass0, mass1, norm.achieved)


def _log_density(bm: ContinuousBoundary, x, regime: int):
    x = np.asarray(x, dtype=float)
    lx = np.log(x)
    l1 = np.log(np.abs(x - bm.p1))
    l0 = np.log(np.abs(bm.p0 - x))
    g = bm.gamma0 + bm.gamma1
    if regime == 1:
        return (bm.log_norm_C + math.log(bm.p1) - math.log(bm.alpha1)
                + (bm.gamma1 - 1.0) * l1 + bm.gamma0 * l0 - (1.0 + g) * lx)
    return (bm.log_norm_C + math.log(bm.p0) - math.log(bm.alpha0)
            + bm.gamma1 * l1 + (bm.gamma0 - 1.0) * l0 - (1.0 + g) * lx)


def _endpoint_value(bm: ContinuousBoundary, x: float, regime: int) -> float:
    # Local exponent at the endpoint; the other factors are finite there.
    if x == bm.p1:
        expo = bm.gamma1 - 1.0 if regime == 1 else bm.gamma1
        other_at = bm.p1
    else:
        expo = bm.gamma0 - 1.0 if regime == 0 else bm.gamma0
        other_at = bm.p0
    if expo < 0.0:
        return math.inf
    if expo > 0.0:
        return 0.0
    g = bm.gamma0 + bm.gamma1
    dist = abs(bm.p0 - bm.p1)
    if regime == 1:
        logv = (bm.log_norm_C + math.log(bm.p1) - math.log(bm.alpha1)
                + bm.gamma0 * math.log(dist) - (1.0 + g) * math.log(other_at))
    else:
        logv = (bm.log_norm_C + math.log(bm.p0) - math.log(bm.alpha0)
                + bm.gamma1 * math.log(dist) - (1.0 + g) * math.log(other_at))
    return math.exp(logv)


def density(bm: BoundaryMeasure, x, regime: int):
    """Density ``h_regime`` at ``x``; zero off the support.

    At a support endpoint where the density diverges (local exponent below
    zero) the value is ``inf``; see :func:`diverges_at`.
    """
    if isinstance(bm, DiracBoundary):
        raise DiracMeasure("a point-mass boundary law has no density")
    if regime not in (0, 1):
        raise InputError(f"regime must be 0 or 1, got {regime!r}")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    inside = (xs > bm.p_lo) & (xs < bm.p_hi)
    if inside.any():
        out[inside] = np.exp(_log_density(bm, xs[inside], regime))
    for k in np.flatnonzero((xs == bm.p_lo) | (xs == bm.p_hi)):
        out[k] = _endpoint_value(bm, float(xs[k]), regime)
    return float(out[0]) if scalar else out


def diverges_at(bm: ContinuousBoundary, endpoint: float, regime: int) -> bool:
    return math.isinf(_endpoint_value(bm, endpoint, regime))


def marginal_density(bm: ContinuousBoundary, x):
    return density(bm, x, 0) + density(bm, x, 1)


def expect(bm: BoundaryMeasure, g: Callable, rel_tol: float = DEFAULT_RTOL,
           abs_tol: float = 0.0) -> QuadResult:
    """Mean of ``g(x, regime)`` under the boundary law.

    ``g`` is called with a numpy array of abundances and an integer regime.
    """
    if isinstance(bm, DiracBoundary):
        x = np.array([bm.p])
        v = (1.0 - bm.nu1) * float(np.asarray(g(x, 0))[0]) + bm.nu1 * float(np.asarray(g(x, 1))[0])
        return QuadResult(v, 0.0, 0)
    g0, g1 = bm.gamma0, bm.gamma1
    # Conditional laws of u: Beta(g1, g0 + 1) in regime 1, Beta(g1 + 1, g0) in regime 0.
    r1 = integrate_singular(lambda u: g(bm.to_x(u), 1), 0.0, 1.0, g1 - 1.0, g0,
                            rel_tol=rel_tol, abs_tol=abs_tol, normalized=True)
    r0 = integrate_singular(lambda u: g(bm.to_x(u), 0), 0.0, 1.0, g1, g0 - 1.0,
                            rel_tol=rel_tol, abs_tol=abs_tol, normalized=True)
    value = bm.mass1 * r1.value + bm.mass0 * r0.value
    return QuadResult(value, max(r0.achieved, r1.achieved), max(r0.n, r1.n))


def density_table(bm: ContinuousBoundary, n: int = 201):
    """Rows ``(x, h0, h1, marginal)`` on an even grid over the closed support."""
    xs = np.linspace(bm.p_lo, bm.p_hi, n)
    h0 = density(bm, xs, 0)
    h1 = density(bm, xs, 1)
    return np.column_stack([xs, h0, h1, h0 + h1])


def bin_masses(bm: BoundaryMeasure, edges, regime: int | None = None) -> np.ndarray:
    """Exact mass of each bin ``[edges[j], edges[j+1]]``, via regularized incomplete Beta functions.

    With ``regime`` given, only that regime's (unnormalized) share is returned.
    """
    edges = np.asarray(edges, dtype=float)
    if isinstance(bm, DiracBoundary):
        w = {None: 1.0, 0: 1.0 - bm.nu1, 1: bm.nu1}[regime]
        hit = (edges[:-1] <= bm.p) & (bm.p < edges[1:])
        out = np.zeros(edges.size - 1)
        out[hit] = w
        return out
    with np.errstate(divide="ignore"):
        u = np.clip(bm.to_u(np.clip(edges, bm.p_lo, bm.p_hi)), 0.0, 1.0)
    g0, g1 = bm.gamma0, bm.gamma1
    cdf = np.zeros_like(u)
    if regime in (None, 1):
        cdf += bm.mass1 * betainc(g1, g0 + 1.0, u)
    if regime in (None, 0):
        cdf += bm.mass0 * betainc(g1 + 1.0, g0, u)
    return np.abs(np.diff(cdf))
