"""Gauss-Jacobi quadrature on (0, 1) for integrands with endpoint singularities.

The rule for weight ``u**a_exp * (1-u)**b_exp`` is built from the Jacobi
matrix of the (shifted) Jacobi polynomials: nodes are its eigenvalues and the
weights are Christoffel numbers ``1 / sum_j q_j(u_k)**2`` of the orthonormal
polynomials ``q_j``, scaled by the total mass ``Beta(a_exp+1, b_exp+1)``.

Besides absolute weights, every rule carries ``probabilities`` (weights
normalized to sum to one) so that integrals with very large exponents, whose
Beta mass underflows, can be evaluated as expectations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal
from scipy.special import betaln

from .errors import ExponentOutOfRange, NoConvergence

N_START = 32
N_MAX = 4096
DEFAULT_RTOL = 1e-11
# Exponents within this distance of -1 put Gauss nodes within rounding of the
# endpoint; the linear part of f is then integrated exactly and only the
# remainder, which vanishes at both ends, goes through the rule.
DEFLATE_BELOW = 0.05


@dataclass(frozen=True)
class JacobiRule:
    n: int
    a_exp: float
    b_exp: float
    nodes: np.ndarray
    probabilities: np.ndarray
    log_mass: float

    @property
    def mass(self) -> float:
        return math.exp(self.log_mass)

    @property
    def weights(self) -> np.ndarray:
        return self.probabilities * self.mass


def _recurrence(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Monic Jacobi recurrence on [-1, 1] for weight (1-x)^alpha (1+x)^beta.

    Returns diagonal ``a_k`` (k < n) and squared off-diagonal ``b_k`` (1 <= k < n).
    """
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    diag = np.empty(n)
    diag[0] = (beta - alpha) / (ab + 2.0)
    if n > 1:
        kk = k[1:]
        s = 2.0 * kk + ab
        diag[1:] = (beta * beta - alpha * alpha) / (s * (s + 2.0))
    off2 = np.empty(max(n - 1, 0))
    if n > 1:
        # k = 1 written with the (k + alpha + beta) / (2k + alpha + beta - 1) factor cancelled.
        off2[0] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) ** 2 * (3.0 + ab))
        if n > 2:
            kk = k[2:]
            s = 2.0 * kk + ab
            off2[1:] = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0))
    return diag, off2


@lru_cache(maxsize=512)
def jacobi_rule(n: int, a_exp: float, b_exp: float) -> JacobiRule:
    """Gauss rule with ``n`` nodes for the weight ``u**a_exp (1-u)**b_exp`` on (0, 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (a_exp > -1.0 and b_exp > -1.0):
        raise ExponentOutOfRange(f"exponents must exceed -1, got ({a_exp}, {b_exp})")
    # u = (1 + x)/2 puts u**a_exp on the (1 + x) side, i.e. Jacobi beta = a_exp.
    diag, off2 = _recurrence(n, b_exp, a_exp)
    diag_u = 0.5 * (1.0 + diag)
    off_u = 0.5 * np.sqrt(off2)
    if n == 1:
        nodes = diag_u.copy()
    else:
        nodes = eigvalsh_tridiagonal(diag_u, off_u)
    nodes = np.clip(nodes, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))

    # Christoffel numbers from the orthonormal three-term recurrence.
    q_prev = np.zeros(n)
    q = np.ones(n)
    total = np.ones(n)
    for j in range(n - 1):
        q_next = ((nodes - diag_u[j]) * q - (off_u[j - 1] * q_prev if j > 0 else 0.0)) / off_u[j]
        q_prev, q = q, q_next
        total += q * q
    probs = 1.0 / total
    probs /= probs.sum()
    log_mass = float(betaln(a_exp + 1.0, b_exp + 1.0))
    nodes.setflags(write=False)
    probs.setflags(write=False)
    return JacobiRule(n, float(a_exp), float(b_exp), nodes, probs, log_mass)


@dataclass(frozen=True)
class QuadResult:
    value: float
    achieved: float
    n: int


def integrate_singular(f, lo: float, hi: float, exp_lo: float, exp_hi: float,
                       rel_tol: float = DEFAULT_RTOL, abs_tol: float = 0.0,
                       normalized: bool = False, n_start: int = N_START,
                       n_max: int = N_MAX) -> QuadResult:
    """Integrate ``f(x) (x-lo)**exp_lo (hi-x)**exp_hi`` over (lo, hi).

    ``f`` must accept a numpy array of abscissae. The node count doubles from
    ``n_start`` until two successive estimates agree within
    ``max(rel_tol*|value|, abs_tol)``. With ``normalized=True`` the result is
    divided by the weight's total mass, i.e. it is the mean of ``f`` under the
    corresponding Beta law; use this when the exponents are large.

    When an exponent is close to -1, ``f`` is also evaluated at ``lo`` and
    ``hi`` and must be finite there.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    if not (exp_lo > -1.0 and exp_hi > -1.0):
        raise ExponentOutOfRange(f"exponents must exceed -1, got ({exp_lo}, {exp_hi})")
    width = hi - lo
    deflate = min(exp_lo, exp_hi) < -1.0 + DEFLATE_BELOW
    if deflate:
        f_lo, f_hi = (float(v) for v in np.asarray(f(np.array([lo, hi])), dtype=float))
        p, q = exp_lo + 1.0, exp_hi + 1.0
        m = p / (p + q)
        linear_mean = f_lo * (1.0 - m) + f_hi * m
        # E[u(1-u) g] under the weight equals this ratio times E[g] under the raised weight
        ratio = p * q / ((p + q) * (p + q + 1.0))

    def estimate(n):
        if deflate:
            rule = jacobi_rule(n, exp_lo + 1.0, exp_hi + 1.0)
            u = rule.nodes
            vals = np.asarray(f(lo + width * u), dtype=float)
            g = (vals - (f_lo * (1.0 - u) + f_hi * u)) / (u * (1.0 - u))
            mean = linear_mean + ratio * float(np.dot(rule.probabilities, g))
        else:
            rule = jacobi_rule(n, exp_lo, exp_hi)
            vals = np.asarray(f(lo + width * rule.nodes), dtype=float)
            mean = float(np.dot(rule.probabilities, vals))
        if normalized:
            return mean
        log_mass = betaln(exp_lo + 1.0, exp_hi + 1.0)
        return mean * math.exp(log_mass + (1.0 + exp_lo + exp_hi) * math.log(width))

    n = n_start
    prev = estimate(n)
    change = math.inf
    while n < n_max:
        n *= 2
        cur = estimate(n)
        diff = abs(cur - prev)
        change = diff / abs(cur) if cur != 0.0 else (0.0 if diff == 0.0 else math.inf)
        if diff <= max(rel_tol * abs(cur), abs_tol):
            return QuadResult(cur, change, n)
        prev = cur
    raise NoConvergence("Gauss-Jacobi refinement did not converge", best=prev, achieved=change)
