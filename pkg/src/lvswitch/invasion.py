"""Invasion rates, their frequency limits, and sign-based outcome prediction."""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import betaln

from .boundary import ContinuousBoundary, boundary_measure, expect
from .envmodel import EnvironmentPair, SwitchRates, average, interval_I
from .errors import CrossCheckMismatch, EmptyInterval, InputError, LVSwitchError
from .quadrature import DEFAULT_RTOL, integrate_singular

CROSS_CHECK_RTOL = 1e-6
ZERO_BAND_FLOOR = 1e-9


@dataclass(frozen=True)
class InvasionRate:
    value: float
    expectation_value: float
    achieved: float
    branch: str


def _growth_scale(pair: EnvironmentPair) -> float:
    e0, e1 = pair.env0, pair.env1
    pmax = max(e0.p, e1.p)
    return max(e0.beta * (1.0 + e0.c * pmax), e1.beta * (1.0 + e1.c * pmax))


def invasion_rate_y(pair: EnvironmentPair, rates: SwitchRates,
                    rel_tol: float = DEFAULT_RTOL) -> InvasionRate:
    """Growth rate of a rare y averaged over the boundary law of x.

    The main value integrates the signed quadratic ``P`` against ``theta``;
    ``expectation_value`` is the same quantity computed as the mean of
    ``beta_i (1 - c_i x)`` under the boundary law, as an independent check.
    """
    e0, e1 = pair.env0, pair.env1
    lam0, lam1 = rates.lambda0, rates.lambda1
    growth = lambda x, i: pair[i].beta * (1.0 - pair[i].c * x)  # noqa: E731
    bm = boundary_measure(pair, rates, "y", rel_tol=rel_tol)

    if not isinstance(bm, ContinuousBoundary):
        p = bm.p
        direct = (lam1 * e0.beta * (1.0 - e0.c * p) + lam0 * e1.beta * (1.0 - e1.c * p)) / (lam0 + lam1)
        check = expect(bm, growth).value
        return InvasionRate(direct, check, 0.0, "dirac")

    scale = _growth_scale(pair)
    sign = math.copysign(1.0, e1.a - e0.a)

    def P_over_x(u):
        x = bm.to_x(u)
        quad = (e1.beta / e1.alpha * (1.0 - e1.c * x) * (1.0 - e0.a * x)
                - e0.beta / e0.alpha * (1.0 - e0.c * x) * (1.0 - e1.a * x))
        return sign * quad / x

    # theta(x) dx = D^(g-1) p0^-g1 p1^-g0 u^(g1-1) (1-u)^(g0-1) du / x, D = |p0 - p1|.
    g0, g1 = bm.gamma0, bm.gamma1
    res = integrate_singular(P_over_x, 0.0, 1.0, g1 - 1.0, g0 - 1.0, rel_tol=rel_tol,
                             abs_tol=rel_tol * scale / (e0.alpha + e1.alpha), normalized=True)
    p0, p1 = bm.p0, bm.p1
    dist = abs(p0 - p1)
    direct = p0 * p1 / dist * math.exp(bm.log_K + betaln(g1, g0)) * res.value

    chk = expect(bm, growth, rel_tol=rel_tol, abs_tol=rel_tol * scale)
    if abs(direct - chk.value) > CROSS_CHECK_RTOL * max(abs(direct), abs(chk.value)) + 1e-12 * scale:
        raise CrossCheckMismatch(
            f"invasion rate {direct!r} disagrees with boundary expectation {chk.value!r}")
    return InvasionRate(direct, chk.value, max(res.achieved, chk.achieved, bm.achieved), "continuous")


def invasion_rate_x(pair: EnvironmentPair, rates: SwitchRates,
                    rel_tol: float = DEFAULT_RTOL) -> InvasionRate:
    """Growth rate of a rare x; the y-rate of the species-swapped pair."""
    return invasion_rate_y(pair.swapped(), rates, rel_tol=rel_tol)


def frequency_limits(pair: EnvironmentPair, s: float, species: str = "y") -> tuple[float, float]:
    """``(t -> 0 limit, t -> inf limit)`` of the invasion rate at ``lambda = (st, (1-s)t)``."""
    if not 0.0 < s < 1.0:
        raise InputError(f"s must lie in (0, 1), got {s!r}")
    if species == "x":
        pair = pair.swapped()
    elif species != "y":
        raise InputError(f"species must be 'x' or 'y', got {species!r}")
    e0, e1 = pair.env0, pair.env1
    low = (1.0 - s) * e0.beta * (1.0 - e0.c / e0.a) + s * e1.beta * (1.0 - e1.c / e1.a)
    es = average(pair, s)
    high = es.beta * (1.0 - es.c / es.a)
    return low, high


class Outcome(str, enum.Enum):
    EXTINCTION_Y = "ExtinctionY"
    EXTINCTION_X = "ExtinctionX"
    EXTINCTION_EITHER = "ExtinctionEither"
    PERSISTENCE = "Persistence"
    INDETERMINATE = "Indeterminate"


_OUTCOMES = {
    (1, -1): Outcome.EXTINCTION_Y,
    (-1, 1): Outcome.EXTINCTION_X,
    (-1, -1): Outcome.EXTINCTION_EITHER,
    (1, 1): Outcome.PERSISTENCE,
}


def outcome_from_signs(u: int, v: int) -> Outcome:
    return _OUTCOMES.get((u, v), Outcome.INDETERMINATE)


def _sign(value: float, band: float) -> int:
    if abs(value) <= band:
        return 0
    return 1 if value > 0 else -1


@dataclass(frozen=True)
class InvasionReport:
    lambda_x: float
    lambda_y: float
    sign_x: int
    sign_y: int
    outcome: Outcome
    achieved_x: float
    achieved_y: float

    @property
    def signs(self) -> tuple[str, str]:
        sym = {1: "+", -1: "-", 0: "0"}
        return sym[self.sign_x], sym[self.sign_y]

    def to_dict(self) -> dict:
        return {
            "lambda_x": self.lambda_x,
            "lambda_y": self.lambda_y,
            "signs": list(self.signs),
            "outcome": self.outcome.value,
            "achieved_tolerance": {"x": self.achieved_x, "y": self.achieved_y},
        }


def classify_outcome(pair: EnvironmentPair, rates: SwitchRates) -> InvasionReport:
    rx = invasion_rate_x(pair, rates)
    ry = invasion_rate_y(pair, rates)
    u = _sign(rx.value, max(ZERO_BAND_FLOOR, 10.0 * rx.achieved))
    v = _sign(ry.value, max(ZERO_BAND_FLOOR, 10.0 * ry.achieved))
    return InvasionReport(rx.value, ry.value, u, v, outcome_from_signs(u, v), rx.achieved, ry.achieved)


# -- zero set of the y invasion rate -------------------------------------------


@dataclass(frozen=True)
class ZeroSetSample:
    s: float
    t: float | None
    resolved: bool
    crossings: int
    residual: float | None = None
    scan_t: tuple[float, ...] = field(default=(), repr=False)
    scan_values: tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class ZeroSetCurve:
    samples: tuple[ZeroSetSample, ...]
    interval: tuple[float, float]

    @property
    def resolved_range(self) -> tuple[float, float] | None:
        ss = [p.s for p in self.samples if p.resolved]
        return (min(ss), max(ss)) if ss else None


def trace_zero_set(pair: EnvironmentPair, s_samples=None, t_bounds=(1e-3, 1e6),
                   n_scan: int = 40, rel_tol: float = 1e-8) -> ZeroSetCurve:
    """Locate ``t(s)`` with ``Lambda_y(s t, (1-s) t) = 0`` for each sample ``s``.

    A 40-point log-spaced scan brackets the first - to + change, then Brent's
    method refines it in ``log t``. Samples without a sign change in the scan
    range are returned unresolved with the scan attached.
    """
    iv = interval_I(pair)
    if iv.interval is None:
        raise EmptyInterval("interval I is empty; the y invasion rate has no zero")
    lo, hi = iv.interval
    if s_samples is None:
        s_samples = np.linspace(lo, hi, 23)[1:-1]
    log_ts = np.linspace(math.log(t_bounds[0]), math.log(t_bounds[1]), n_scan)

    def lam(s, logt):
        return invasion_rate_y(pair, SwitchRates.from_st(s, math.exp(logt))).value

    samples = []
    for s in s_samples:
        s = float(s)
        vals = np.array([lam(s, lt) for lt in log_ts])
        signs = np.sign(vals)
        changes = np.flatnonzero(signs[:-1] * signs[1:] < 0)
        up = [k for k in changes if vals[k] < 0 < vals[k + 1]]
        scan_t = tuple(np.exp(log_ts).tolist())
        if not up:
            samples.append(ZeroSetSample(s, None, False, len(changes), None, scan_t, tuple(vals.tolist())))
            continue
        # log t to absolute rel_tol is t to relative rel_tol
        k = up[0]
        root = brentq(lambda lt: lam(s, lt), log_ts[k], log_ts[k + 1], xtol=rel_tol, rtol=4 * np.finfo(float).eps)
        t_root = math.exp(root)
        samples.append(ZeroSetSample(s, t_root, True, len(changes), lam(s, root), scan_t,
                                     tuple(vals.tolist())))
    return ZeroSetCurve(tuple(samples), (lo, hi))


# -- sign sweep ---------------------------------------------------------------


@dataclass(frozen=True)
class SweepCell:
    s: float
    t: float
    lambda_x: float
    lambda_y: float
    outcome: str
    error: str | None = None

    @property
    def signs(self) -> tuple[int, int]:
        return int(np.sign(self.lambda_x)), int(np.sign(self.lambda_y))


def _sweep_cell(pair: EnvironmentPair, s: float, t: float) -> SweepCell:
    try:
        rep = classify_outcome(pair, SwitchRates.from_st(s, t))
    except LVSwitchError as exc:
        return SweepCell(s, t, math.nan, math.nan, Outcome.INDETERMINATE.value, f"{type(exc).__name__}: {exc}")
    return SweepCell(s, t, rep.lambda_x, rep.lambda_y, rep.outcome.value)


def sign_sweep(pair: EnvironmentPair, s_grid, t_grid, threads: int | None = None) -> list[SweepCell]:
    """Evaluate both invasion rates on the ``s x t`` grid, rows ordered s-major."""
    points = [(float(s), float(t)) for s in s_grid for t in t_grid]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda st: _sweep_cell(pair, *st), points))
    return [_sweep_cell(pair, s, t) for s, t in points]
