"""Simulation of the randomly switched Lotka-Volterra process.

Interior paths are integrated in log-coordinates with a Dormand-Prince 5(4)
pair between the jump times of the environment chain. Because the chain does
not depend on the abundances, its jump times are drawn first and the flow is
then integrated segment by segment. On an extinction face the logistic flow
is solved exactly (:func:`simulate_boundary`).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from numba import njit
from scipy.stats import binomtest

from .boundary import ContinuousBoundary, boundary_measure
from .envmodel import EnvironmentPair, SwitchRates
from .errors import ExtinctFloor, InputError, IntegratorFailure
from .rng import make_generator, replicate_seed, switching_times


@dataclass(frozen=True)
class SimConfig:
    ode_rel_tol: float = 1e-8
    ode_abs_tol: float = 1e-10
    max_step: float = 1.0
    extinction_log_threshold: float = math.log(1e-9)
    extinction_patience: int = 10
    eta: float = 1e-3
    record_dt: float = 0.1

    def __post_init__(self):
        for name in ("ode_rel_tol", "ode_abs_tol", "max_step", "eta", "record_dt"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")
        if not self.extinction_log_threshold < 0:
            raise InputError("extinction_log_threshold must be negative")
        if self.extinction_patience < 1:
            raise InputError("extinction_patience must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


# -- Dormand-Prince kernel ------------------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                                22 / 525, -1 / 40)


@njit(cache=True, nogil=True)
def _rhs(P, reg, lx, ly, live_x, live_y):
    x = math.exp(lx) if live_x else 0.0
    y = math.exp(ly) if live_y else 0.0
    fx = P[reg, 4] * (1.0 - P[reg, 0] * x - P[reg, 1] * y) if live_x else 0.0
    fy = P[reg, 5] * (1.0 - P[reg, 2] * x - P[reg, 3] * y) if live_y else 0.0
    return fx, fy


@njit(cache=True, nogil=True)
def _integrate(P, lx, ly, reg, jumps, rec_t, rtol, atol, max_step,
               stop_thresh, patience, out_lx, out_ly, out_reg):
    """Returns (records written, status, accepted steps, extinct species, time of declaration).

    status 0 = ok, 1 = step-size underflow. extinct species: 0 none, 1 x, 2 y.
    """
    live_x = not math.isinf(lx)
    live_y = not math.isinf(ly)
    nj = jumps.shape[0]
    nr = rec_t.shape[0]
    t = 0.0
    kj = 0
    kr = 0
    h = min(max_step, 1e-2)
    steps = 0
    below_x = 0
    below_y = 0
    while kr < nr:
        next_jump = jumps[kj] if kj < nj else math.inf
        stop = min(next_jump, rec_t[kr])
        while t < stop:
            hh = min(h, stop - t, max_step)
            last = hh >= stop - t
            k1x, k1y = _rhs(P, reg, lx, ly, live_x, live_y)
            k2x, k2y = _rhs(P, reg, lx + hh * _A21 * k1x, ly + hh * _A21 * k1y, live_x, live_y)
            k3x, k3y = _rhs(P, reg, lx + hh * (_A31 * k1x + _A32 * k2x),
                            ly + hh * (_A31 * k1y + _A32 * k2y), live_x, live_y)
            k4x, k4y = _rhs(P, reg, lx + hh * (_A41 * k1x + _A42 * k2x + _A43 * k3x),
                            ly + hh * (_A41 * k1y + _A42 * k2y + _A43 * k3y), live_x, live_y)
            k5x, k5y = _rhs(P, reg, lx + hh * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x),
                            ly + hh * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y),
                            live_x, live_y)
            k6x, k6y = _rhs(P, reg,
                            lx + hh * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x),
                            ly + hh * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y),
                            live_x, live_y)
            nx = lx + hh * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x) if live_x else lx
            ny = ly + hh * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y) if live_y else ly
            k7x, k7y = _rhs(P, reg, nx, ny, live_x, live_y)
            err = 0.0
            cnt = 0
            if live_x:
                ex = hh * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
                sc = atol + rtol * max(abs(lx), abs(nx))
                err += (ex / sc) ** 2
                cnt += 1
            if live_y:
                ey = hh * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
                sc = atol + rtol * max(abs(ly), abs(ny))
                err += (ey / sc) ** 2
                cnt += 1
            err = math.sqrt(err / cnt) if cnt > 0 else 0.0
            if err <= 1.0:
                t = stop if last else t + hh
                lx = nx
                ly = ny
                steps += 1
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
                if last and hh < h:
                    h = max(h, hh * fac)
                else:
                    h = hh * fac
            else:
                h = hh * max(0.2, 0.9 * err ** -0.25)
                if h < 1e-14 * (1.0 + abs(t)):
                    return kr, 1, steps, 0, t
        if stop == next_jump:
            reg = 1 - reg
            kj += 1
        if stop == rec_t[kr]:
            out_lx[kr] = lx
            out_ly[kr] = ly
            out_reg[kr] = reg
            kr += 1
            if patience > 0:
                below_x = below_x + 1 if lx < stop_thresh else 0
                below_y = below_y + 1 if ly < stop_thresh else 0
                if below_x >= patience:
                    return kr, 0, steps, 1, t
                if below_y >= patience:
                    return kr, 0, steps, 2, t
    return kr, 0, steps, 0, t


# -- interior simulation ---------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    log_x: np.ndarray
    log_y: np.ndarray
    regime: np.ndarray
    jump_times: np.ndarray
    seed: int
    config: SimConfig
    horizon: float
    steps: int
    extinct: str | None = None
    extinct_time: float | None = None

    @property
    def x(self) -> np.ndarray:
        return np.exp(self.log_x)

    @property
    def y(self) -> np.ndarray:
        return np.exp(self.log_y)

    @property
    def n_jumps(self) -> int:
        return int(self.jump_times.size)

    def window(self, start: float, end: float | None = None) -> np.ndarray:
        end = self.t[-1] if end is None else end
        return (self.t >= start) & (self.t <= end)


def _record_times(horizon: float, dt: float) -> np.ndarray:
    n = int(math.floor(horizon / dt + 1e-9))
    rec = np.arange(n + 1) * dt
    if horizon - rec[-1] > 1e-9 * dt:
        rec = np.append(rec, horizon)
    return rec


def _log0(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


def simulate(pair: EnvironmentPair, rates: SwitchRates, x0: float, y0: float, regime0: int = 0,
             horizon: float = 100.0, seed: int = 0, cfg: SimConfig | None = None,
             stop_on_extinction: bool = False) -> Trajectory:
    """Simulate ``(X_t, Y_t, I_t)`` on ``[0, horizon]``, recording every ``cfg.record_dt``.

    A zero initial abundance starts the path on the corresponding extinction
    face (log-abundance ``-inf``), where that species stays for all time. With
    ``stop_on_extinction`` the run ends once a log-abundance has stayed below
    ``cfg.extinction_log_threshold`` for ``cfg.extinction_patience`` records.
    """
    cfg = cfg or SimConfig()
    if not (x0 >= 0 and y0 >= 0 and (x0 > 0 or y0 > 0)):
        raise InputError("initial abundances must be nonnegative and not both zero")
    if regime0 not in (0, 1):
        raise InputError("regime0 must be 0 or 1")
    if not horizon > 0:
        raise InputError("horizon must be positive")
    rng = make_generator(seed)
    jumps = switching_times(rates.lambda0, rates.lambda1, regime0, horizon, rng)
    rec_t = _record_times(horizon, cfg.record_dt)
    n = rec_t.size
    out_lx = np.empty(n)
    out_ly = np.empty(n)
    out_reg = np.empty(n, dtype=np.int64)
    kr, status, steps, ext, t_end = _integrate(
        pair.stacked(), _log0(x0), _log0(y0), regime0, jumps, rec_t,
        cfg.ode_rel_tol, cfg.ode_abs_tol, cfg.max_step, cfg.extinction_log_threshold,
        cfg.extinction_patience if stop_on_extinction else 0, out_lx, out_ly, out_reg)
    traj = Trajectory(rec_t[:kr], out_lx[:kr], out_ly[:kr], out_reg[:kr],
                      jumps[jumps <= (rec_t[kr - 1] if kr else 0.0)], seed, cfg, horizon, steps,
                      {1: "x", 2: "y"}.get(ext), t_end if ext else None)
    if status != 0:
        raise IntegratorFailure(f"step size underflow at t={t_end}", partial=traj)
    return traj


# -- exact boundary simulation ----------------------------------------------------


@dataclass(frozen=True)
class BoundaryPath:
    """Switched logistic path: segment ``k`` runs from ``starts[k]`` in regime ``regimes[k]``."""

    starts: np.ndarray
    regimes: np.ndarray
    x_start: np.ndarray
    horizon: float
    alpha: tuple[float, float]
    p: tuple[float, float]
    seed: int
    face: str = "y"

    @property
    def durations(self) -> np.ndarray:
        return np.diff(np.append(self.starts, self.horizon))

    @property
    def x_end(self) -> np.ndarray:
        al = np.asarray(self.alpha)[self.regimes]
        p = np.asarray(self.p)[self.regimes]
        return _logistic(self.x_start, p, al, self.durations)

    def sample(self, times) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        k = np.searchsorted(self.starts, times, side="right") - 1
        al = np.asarray(self.alpha)[self.regimes[k]]
        p = np.asarray(self.p)[self.regimes[k]]
        return _logistic(self.x_start[k], p, al, times - self.starts[k])

    def occupation(self, edges) -> np.ndarray:
        """Exact fraction of ``[0, horizon]`` spent in each bin ``[edges[j], edges[j+1])``."""
        edges = np.asarray(edges, dtype=float)
        out = _occupation_kernel(self.x_start, self.x_end, self.durations,
                                 np.asarray(self.alpha)[self.regimes],
                                 np.asarray(self.p)[self.regimes], edges)
        return out / self.horizon

    def time_integral(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-regime total time and exact integral of ``x dt``."""
        al = np.asarray(self.alpha)[self.regimes]
        a = 1.0 / np.asarray(self.p)[self.regimes]
        tau = self.durations
        # d log x / dt = alpha (1 - a x)  =>  int x dt = (tau - log(x_end/x_start)/alpha) / a
        ix = (tau - np.log(self.x_end / self.x_start) / al) / a
        time = np.array([tau[self.regimes == i].sum() for i in (0, 1)])
        integ = np.array([ix[self.regimes == i].sum() for i in (0, 1)])
        return time, integ


def _logistic(x0, p, alpha, t):
    return x0 * p / (x0 + (p - x0) * np.exp(-alpha * t))


@njit(cache=True)
def _crossing_time(x0, p, alpha, v, horizon):
    # time for the logistic from x0 to reach level v; levels at or beyond p are never reached
    den = x0 * (p - v)
    num = v * (p - x0)
    if den == 0.0 or num / den <= 0.0:
        return horizon
    return math.log(num / den) / alpha


@njit(cache=True)
def _occupation_kernel(xs, xe, tau, alpha, p, edges):
    nb = edges.shape[0] - 1
    out = np.zeros(nb)
    for k in range(xs.shape[0]):
        x0, x1, T, al, pk = xs[k], xe[k], tau[k], alpha[k], p[k]
        if T <= 0.0:
            continue
        lo, hi = min(x0, x1), max(x0, x1)
        j_lo = np.searchsorted(edges, lo, side="right") - 1
        j_hi = np.searchsorted(edges, hi, side="right") - 1
        if j_lo == j_hi or x0 == pk:
            if 0 <= j_lo < nb:
                out[j_lo] += T
            continue
        prev = 0.0
        if x1 > x0:
            for j in range(j_lo, j_hi):
                v = edges[j + 1]
                tc = _crossing_time(x0, pk, al, v, T)
                tc = min(max(tc, prev), T)
                if 0 <= j < nb:
                    out[j] += tc - prev
                prev = tc
            if 0 <= j_hi < nb:
                out[j_hi] += T - prev
        else:
            for j in range(j_hi, j_lo, -1):
                v = edges[j]
                tc = _crossing_time(x0, pk, al, v, T)
                tc = min(max(tc, prev), T)
                if 0 <= j < nb:
                    out[j] += tc - prev
                prev = tc
            if 0 <= j_lo < nb:
                out[j_lo] += T - prev
    return out


def simulate_boundary(pair: EnvironmentPair, rates: SwitchRates, x0: float, horizon: float,
                      seed: int = 0, regime0: int = 0, face: str = "y") -> BoundaryPath:
    """Switched logistic on an extinction face, solved in closed form between jumps.

    With ``face='y'`` the path is X on ``y = 0``; ``face='x'`` gives Y on ``x = 0``.
    Uses the same switching path as :func:`simulate` for equal seeds.
    """
    if not x0 > 0:
        raise InputError("x0 must be positive")
    eff = pair if face == "y" else pair.swapped()
    rng = make_generator(seed)
    jumps = switching_times(rates.lambda0, rates.lambda1, regime0, horizon, rng)
    jumps = jumps[jumps < horizon]
    starts = np.concatenate([[0.0], jumps])
    regimes = (regime0 + np.arange(starts.size)) % 2
    alpha = (eff.env0.alpha, eff.env1.alpha)
    p = (eff.env0.p, eff.env1.p)
    al = np.asarray(alpha)[regimes]
    pp = np.asarray(p)[regimes]
    tau = np.diff(np.append(starts, horizon))
    x_start = np.empty(starts.size)
    x = float(x0)
    for k in range(starts.size):
        x_start[k] = x
        x = x * pp[k] / (x + (pp[k] - x) * math.exp(-al[k] * tau[k]))
    return BoundaryPath(starts, regimes, x_start, float(horizon), alpha, p, seed, face)


def boundary_time_average(path: BoundaryPath, pair: EnvironmentPair) -> float:
    """Time average of the rare species' growth rate ``beta_i (1 - c_i X)`` along ``path``."""
    eff = pair if path.face == "y" else pair.swapped()
    time, integ = path.time_integral()
    total = 0.0
    for i, e in enumerate((eff.env0, eff.env1)):
        total += e.beta * (time[i] - e.c * integ[i])
    return total / path.horizon


# -- occupation measures ------------------------------------------------------------


def _trapezoid_weights(t: np.ndarray) -> np.ndarray:
    w = np.zeros_like(t)
    if t.size < 2:
        return np.ones_like(t)
    dt = np.diff(t)
    w[:-1] += 0.5 * dt
    w[1:] += 0.5 * dt
    return w


@dataclass(frozen=True)
class OccupationHistogram:
    x_edges: np.ndarray
    y_edges: np.ndarray
    mass: np.ndarray  # shape (2, nx, ny): regime, x bin, y bin
    total_time: float

    def marginal_x(self) -> np.ndarray:
        return self.mass.sum(axis=(0, 2))

    def marginal_y(self) -> np.ndarray:
        return self.mass.sum(axis=(0, 1))

    def near_boundary_mass(self, eps: float) -> float:
        """Mass of bins lying entirely inside ``{min(x, y) < eps}``."""
        in_x = self.x_edges[1:] <= eps
        in_y = self.y_edges[1:] <= eps
        sel = in_x[:, None] | in_y[None, :]
        return float(self.mass.sum(axis=0)[sel].sum())

    def rows(self):
        for r in (0, 1):
            for i in range(self.x_edges.size - 1):
                for j in range(self.y_edges.size - 1):
                    yield (r, self.x_edges[i], self.x_edges[i + 1], self.y_edges[j],
                           self.y_edges[j + 1], self.mass[r, i, j])


def default_extent(pair: EnvironmentPair) -> float:
    return 1.2 * max(pair.env0.p, pair.env1.p, pair.env0.p_hat, pair.env1.p_hat)


def occupation_histogram(traj: Trajectory, bins=(60, 60), x_max: float | None = None,
                         y_max: float | None = None, window: tuple[float, float] | None = None,
                         pair: EnvironmentPair | None = None) -> OccupationHistogram:
    """Time-weighted 2-D histogram of the sampled path, one layer per regime.

    Samples beyond the grid are counted in the outermost bins so the masses
    always sum to one.
    """
    if traj.t.size == 0:
        raise InputError("empty trajectory")
    if x_max is None or y_max is None:
        ext = default_extent(pair) if pair is not None else 1.2 * max(traj.x.max(), traj.y.max())
        x_max = ext if x_max is None else x_max
        y_max = ext if y_max is None else y_max
    sel = traj.window(*window) if window else np.ones(traj.t.size, dtype=bool)
    t = traj.t[sel]
    w = _trapezoid_weights(t)
    nx, ny = bins
    x_edges = np.linspace(0.0, x_max, nx + 1)
    y_edges = np.linspace(0.0, y_max, ny + 1)
    ix = np.clip(np.searchsorted(x_edges, traj.x[sel], side="right") - 1, 0, nx - 1)
    iy = np.clip(np.searchsorted(y_edges, traj.y[sel], side="right") - 1, 0, ny - 1)
    mass = np.zeros((2, nx, ny))
    np.add.at(mass, (traj.regime[sel], ix, iy), w)
    total = float(w.sum())
    return OccupationHistogram(x_edges, y_edges, mass / total, float(t[-1] - t[0]))


def near_extinction_fraction(traj: Trajectory, eps: float, species: str | None = None,
                             window: tuple[float, float] | None = None) -> float:
    """Fraction of (recorded) time with ``min(x, y) < eps``, or one species below ``eps``."""
    sel = traj.window(*window) if window else np.ones(traj.t.size, dtype=bool)
    w = _trapezoid_weights(traj.t[sel])
    le = math.log(eps)
    if species == "x":
        hit = traj.log_x[sel] < le
    elif species == "y":
        hit = traj.log_y[sel] < le
    else:
        hit = np.minimum(traj.log_x[sel], traj.log_y[sel]) < le
    return float(w[hit].sum() / w.sum())


# -- Lyapunov slopes ------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeEstimate:
    slope: float
    stderr: float
    t_start: float
    t_end: float
    truncated: bool = False

    def band(self, k: float = 3.0) -> tuple[float, float]:
        return self.slope - k * self.stderr, self.slope + k * self.stderr


def _ols_slope(t: np.ndarray, v: np.ndarray) -> float:
    tc = t - t.mean()
    return float(np.dot(tc, v - v.mean()) / np.dot(tc, tc))


def lyapunov_slope(traj: Trajectory, species: str, discard_fraction: float = 0.5,
                   floor: float | None = None, n_blocks: int = 20, n_boot: int = 200,
                   boot_seed: int = 0) -> SlopeEstimate:
    """Least-squares growth rate of ``log x`` or ``log y`` over the retained window.

    The standard error comes from a block bootstrap of the path increments
    (``n_blocks`` contiguous blocks, resampled with replacement). If ``floor``
    is given and the log-abundance drops below it inside the window, the fit
    is restricted to the part before the first crossing.
    """
    if species not in ("x", "y"):
        raise InputError("species must be 'x' or 'y'")
    logv = traj.log_x if species == "x" else traj.log_y
    t0 = traj.t[0] + discard_fraction * (traj.t[-1] - traj.t[0])
    sel = traj.t >= t0
    t, v = traj.t[sel], logv[sel]
    truncated = False
    if floor is not None:
        hit = np.flatnonzero(v < floor)
        if hit.size:
            t, v = t[:hit[0]], v[:hit[0]]
            truncated = True
    if t.size < 2 * n_blocks or not np.all(np.isfinite(v)):
        raise ExtinctFloor(f"too few usable samples ({t.size}) to fit a slope")
    slope = _ols_slope(t, v)
    inc, dt = np.diff(v), np.diff(t)
    blocks = np.array_split(np.arange(inc.size), n_blocks)
    rng = make_generator(boot_seed)
    boots = np.empty(n_boot)
    for b in range(n_boot):
        pick = rng.integers(0, n_blocks, n_blocks)
        idx = np.concatenate([blocks[k] for k in pick])
        tb = np.concatenate([[t[0]], t[0] + np.cumsum(dt[idx])])
        vb = np.concatenate([[v[0]], v[0] + np.cumsum(inc[idx])])
        boots[b] = _ols_slope(tb, vb)
    return SlopeEstimate(slope, float(boots.std(ddof=1)), float(t[0]), float(t[-1]), truncated)


# -- extinction ensembles --------------------------------------------------------------


@dataclass(frozen=True)
class Proportion:
    estimate: float
    low: float
    high: float


def _proportion(k: int, n: int) -> Proportion:
    ci = binomtest(k, n).proportion_ci(confidence_level=0.95, method="wilson")
    return Proportion(k / n, float(ci.low), float(ci.high))


@dataclass(frozen=True)
class EnsembleReport:
    n_reps: int
    extinct_x: int
    extinct_y: int
    undecided: int
    p_extinct_x: Proportion
    p_extinct_y: Proportion
    p_undecided: Proportion
    outcomes: tuple[str, ...] = field(repr=False)
    extinction_times: tuple[float | None, ...] = field(repr=False)
    seed: int = 0

    @property
    def decided_fraction(self) -> float:
        return (self.extinct_x + self.extinct_y) / self.n_reps

    def to_dict(self) -> dict:
        return {
            "n_reps": self.n_reps,
            "seed": self.seed,
            "counts": {"x": self.extinct_x, "y": self.extinct_y, "undecided": self.undecided},
            "p_extinct_x": asdict(self.p_extinct_x),
            "p_extinct_y": asdict(self.p_extinct_y),
            "p_undecided": asdict(self.p_undecided),
            "outcomes": list(self.outcomes),
        }


def extinction_ensemble(pair: EnvironmentPair, rates: SwitchRates, x0: float, y0: float,
                        regime0: int = 0, n_reps: int = 100, horizon: float = 2000.0,
                        seed: int = 0, cfg: SimConfig | None = None,
                        threads: int | None = None) -> EnsembleReport:
    """Monte Carlo frequency of each species' extinction.

    Replicate ``r`` is seeded with ``replicate_seed(seed, r)``; a run is
    classified by the first species whose log-abundance stays below the
    extinction threshold for ``cfg.extinction_patience`` consecutive records.
    """
    if n_reps < 1:
        raise InputError("n_reps must be >= 1")
    cfg = cfg or SimConfig()

    def run(r):
        tr = simulate(pair, rates, x0, y0, regime0, horizon, replicate_seed(seed, r), cfg,
                      stop_on_extinction=True)
        return tr.extinct, tr.extinct_time

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(n_reps)))
    else:
        results = [run(r) for r in range(n_reps)]
    outcomes = tuple(r[0] or "undecided" for r in results)
    kx, ky = outcomes.count("x"), outcomes.count("y")
    ku = n_reps - kx - ky
    return EnsembleReport(n_reps, kx, ky, ku, _proportion(kx, n_reps), _proportion(ky, n_reps),
                          _proportion(ku, n_reps), outcomes, tuple(r[1] for r in results), seed)


def boundary_bin_masses(pair: EnvironmentPair, rates: SwitchRates, edges, face: str = "y") -> np.ndarray:
    """Closed-form mass of each bin under the boundary law (convenience re-export)."""
    from .boundary import bin_masses

    return bin_masses(boundary_measure(pair, rates, face), edges)


__all__ = [
    "SimConfig", "Trajectory", "simulate", "BoundaryPath", "simulate_boundary",
    "boundary_time_average", "OccupationHistogram", "occupation_histogram",
    "near_extinction_fraction", "SlopeEstimate", "lyapunov_slope", "EnsembleReport",
    "extinction_ensemble", "boundary_bin_masses", "ContinuousBoundary",
]
