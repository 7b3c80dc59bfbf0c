"""Environment parameters, Lotka-Volterra vector fields and their averages.

An environment is the six-tuple ``(a, b, c, d, alpha, beta)`` of the
competitive field

    dx/dt = alpha * x * (1 - a*x - b*y)
    dy/dt = beta  * y * (1 - c*x - d*y)

Two environments and two switching intensities define the switched process
simulated in :mod:`lvswitch.pdmp`.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateEnvironment, InputError, NonPositiveParameter, NotBothFavorable

DEGENERACY_TOL = 1e-12
RATIO_RTOL = 1e-12

_FIELDS = ("a", "b", "c", "d", "alpha", "beta")


@dataclass(frozen=True)
class Environment:
    a: float
    b: float
    c: float
    d: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in _FIELDS:
            value = getattr(self, name)
            try:
                ok = math.isfinite(value) and value > 0
            except TypeError:
                ok = False
            if not ok:
                raise NonPositiveParameter(name, value)
            object.__setattr__(self, name, float(value))

    @property
    def p(self) -> float:
        """Carrying capacity of x alone, ``1/a``."""
        return 1.0 / self.a

    @property
    def p_hat(self) -> float:
        """Carrying capacity of y alone, ``1/d``."""
        return 1.0 / self.d

    @property
    def favorable_to_x(self) -> bool:
        return self.a < self.c and self.b < self.d

    def swapped(self) -> "Environment":
        """Exchange the roles of the two species."""
        return Environment(self.d, self.c, self.b, self.a, self.beta, self.alpha)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Environment":
        missing = [k for k in _FIELDS if k not in data]
        if missing:
            raise InputError(f"environment is missing fields {missing}")
        return cls(**{k: data[k] for k in _FIELDS})


def validate_environment(a, b, c, d, alpha, beta) -> Environment:
    return Environment(a, b, c, d, alpha, beta)


@dataclass(frozen=True)
class EnvironmentPair:
    env0: Environment
    env1: Environment

    @property
    def both_favorable_to_x(self) -> bool:
        return self.env0.favorable_to_x and self.env1.favorable_to_x

    def __getitem__(self, i: int) -> Environment:
        return (self.env0, self.env1)[i]

    def swapped(self) -> "EnvironmentPair":
        return EnvironmentPair(self.env0.swapped(), self.env1.swapped())

    def to_dict(self) -> dict:
        return {"env0": self.env0.to_dict(), "env1": self.env1.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "EnvironmentPair":
        try:
            return cls(Environment.from_dict(data["env0"]), Environment.from_dict(data["env1"]))
        except KeyError as exc:
            raise InputError(f"pair document is missing key {exc}") from None

    def stacked(self) -> np.ndarray:
        """Parameters as a (2, 6) float array, rows ordered as ``_FIELDS``."""
        return np.array([[getattr(e, k) for k in _FIELDS] for e in (self.env0, self.env1)])


def load_pair(path) -> EnvironmentPair:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read environment pair from {path}: {exc}") from None
    return EnvironmentPair.from_dict(data)


@dataclass(frozen=True)
class SwitchRates:
    """Jump intensities out of regime 0 (``lambda0``) and regime 1 (``lambda1``).

    ``s = lambda0 / (lambda0 + lambda1)`` is the long-run fraction of time
    spent in regime 1 and ``t = lambda0 + lambda1`` the switching frequency.
    """

    lambda0: float
    lambda1: float

    def __post_init__(self):
        for name in ("lambda0", "lambda1"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise NonPositiveParameter(name, value)
            object.__setattr__(self, name, float(value))

    @classmethod
    def from_st(cls, s: float, t: float) -> "SwitchRates":
        if not 0.0 < s < 1.0:
            raise InputError(f"s must lie in (0, 1), got {s!r}")
        if not (math.isfinite(t) and t > 0):
            raise NonPositiveParameter("t", t)
        return cls(s * t, (1.0 - s) * t)

    @property
    def s(self) -> float:
        return self.lambda0 / (self.lambda0 + self.lambda1)

    @property
    def t(self) -> float:
        return self.lambda0 + self.lambda1

    def __getitem__(self, i: int) -> float:
        return (self.lambda0, self.lambda1)[i]


def vector_field(env: Environment, x, y):
    dx = env.alpha * x * (1.0 - env.a * x - env.b * y)
    dy = env.beta * y * (1.0 - env.c * x - env.d * y)
    return dx, dy


class RegimeKind(str, enum.Enum):
    FAVORABLE_X = "FavorableX"
    FAVORABLE_Y = "FavorableY"
    COEXISTENCE_SINK = "CoexistenceSink"
    BISTABLE = "Bistable"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    interior_eq: tuple[float, float] | None = None
    boundary_eq_x: tuple[float, float] = field(default=(0.0, 0.0))
    boundary_eq_y: tuple[float, float] = field(default=(0.0, 0.0))


def _interior_equilibrium(env: Environment) -> tuple[float, float]:
    det = env.a * env.d - env.b * env.c
    scale = max(abs(env.a * env.d), abs(env.b * env.c))
    if abs(det) <= 1e-14 * scale:
        raise DegenerateEnvironment("isocline system is singular (ad = bc)")
    return (env.d - env.b) / det, (env.a - env.c) / det


def classify(env: Environment) -> Regime:
    """Single-environment outcome from the signs of ``c - a`` and ``d - b``."""
    if abs(env.c - env.a) < DEGENERACY_TOL or abs(env.d - env.b) < DEGENERACY_TOL:
        raise DegenerateEnvironment(f"a = c or b = d in {env}")
    bx, by = (env.p, 0.0), (0.0, env.p_hat)
    if env.a < env.c and env.b < env.d:
        return Regime(RegimeKind.FAVORABLE_X, None, bx, by)
    if env.a > env.c and env.b > env.d:
        return Regime(RegimeKind.FAVORABLE_Y, None, bx, by)
    kind = RegimeKind.COEXISTENCE_SINK if env.a > env.c else RegimeKind.BISTABLE
    return Regime(kind, _interior_equilibrium(env), bx, by)


def average(pair: EnvironmentPair, s: float) -> Environment:
    """Environment whose field is ``s*F1 + (1-s)*F0``."""
    if not 0.0 <= s <= 1.0:
        raise InputError(f"s must lie in [0, 1], got {s!r}")
    if s == 0.0:
        return pair.env0
    if s == 1.0:
        return pair.env1
    e0, e1 = pair.env0, pair.env1
    w0, w1 = 1.0 - s, s
    alpha = w1 * e1.alpha + w0 * e0.alpha
    beta = w1 * e1.beta + w0 * e0.beta
    return Environment(
        a=(w1 * e1.alpha * e1.a + w0 * e0.alpha * e0.a) / alpha,
        b=(w1 * e1.alpha * e1.b + w0 * e0.alpha * e0.b) / alpha,
        c=(w1 * e1.beta * e1.c + w0 * e0.beta * e0.c) / beta,
        d=(w1 * e1.beta * e1.d + w0 * e0.beta * e0.d) / beta,
        alpha=alpha,
        beta=beta,
    )


def s_to_u(pair: EnvironmentPair, s):
    """``u = s*alpha1 / alpha_s``, the weight of regime 1 in the x-equation."""
    a0, a1 = pair.env0.alpha, pair.env1.alpha
    return s * a1 / (s * a1 + (1.0 - s) * a0)


def u_to_s(pair: EnvironmentPair, u):
    a0, a1 = pair.env0.alpha, pair.env1.alpha
    return u * a0 / ((1.0 - u) * a1 + u * a0)


# -- intervals I and J -------------------------------------------------------


@dataclass(frozen=True)
class QuadraticDiagnostics:
    R: float
    A: float
    B: float
    C: float
    delta: float
    roots_u: tuple[float, ...]
    linear: bool


@dataclass(frozen=True)
class IntervalSet:
    """Set of ``s`` in (0, 1) where the averaged environment flips a sign.

    ``interval`` is the single open interval when the set is one (always the
    case when both environments favor x); ``segments`` lists every piece.
    """

    which: str
    interval: tuple[float, float] | None
    segments: tuple[tuple[float, float], ...]
    diagnostics: QuadraticDiagnostics

    @property
    def empty(self) -> bool:
        return not self.segments

    def contains(self, s: float) -> bool:
        return any(lo < s < hi for lo, hi in self.segments)

    def to_dict(self) -> dict:
        return {
            "interval": list(self.interval) if self.interval else None,
            "segments": [list(seg) for seg in self.segments],
            "diagnostics": asdict(self.diagnostics),
        }


def _quadratic_roots(A: float, B: float, C: float) -> tuple[tuple[float, ...], float, bool]:
    delta = B * B - 4.0 * A * C
    if abs(A) < DEGENERACY_TOL:
        if B == 0.0:
            return (), delta, True
        return (-C / B,), delta, True
    if delta < 0.0:
        return (), delta, False
    sq = math.sqrt(delta)
    q = -0.5 * (B + math.copysign(sq, B))
    if q == 0.0:
        return (0.0,), delta, False
    return tuple(sorted((q / A, C / q))), delta, False


def _interval(pair: EnvironmentPair, which: str) -> IntervalSet:
    e0, e1 = pair.env0, pair.env1
    R = e0.beta * e1.alpha / (e0.alpha * e1.beta)
    if which == "I":
        own0, own1, other0, other1 = e0.a, e1.a, e0.c, e1.c
    else:
        own0, own1, other0, other1 = e0.b, e1.b, e0.d, e1.d
    A = (own1 - own0) * (R - 1.0)
    B = (2.0 * own0 - other0 - own1) * R + (other1 - own0)
    C = (other0 - own0) * R
    roots, delta, linear = _quadratic_roots(A, B, C)
    diag = QuadraticDiagnostics(R, A, B, C, delta, roots, linear)

    # The numerator N(u) = A u^2 + B u + C has the sign of (other_s - own_s);
    # the set of interest is where it is negative.
    def N(u):
        return (A * u + B) * u + C

    cuts = [0.0] + sorted(r for r in roots if 0.0 < r < 1.0) + [1.0]
    segments_u = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi > lo and N(0.5 * (lo + hi)) < 0.0:
            if segments_u and segments_u[-1][1] == lo:
                segments_u[-1] = (segments_u[-1][0], hi)
            else:
                segments_u.append((lo, hi))
    segments = tuple((float(u_to_s(pair, lo)), float(u_to_s(pair, hi))) for lo, hi in segments_u)
    interval = segments[0] if len(segments) == 1 else None
    return IntervalSet(which, interval, segments, diag)


def interval_I(pair: EnvironmentPair) -> IntervalSet:
    """Weights ``s`` for which ``a_s > c_s``."""
    return _interval(pair, "I")


def interval_J(pair: EnvironmentPair) -> IntervalSet:
    """Weights ``s`` for which ``b_s > d_s``."""
    return _interval(pair, "J")


def jointly_favorable(pair: EnvironmentPair) -> bool:
    if not pair.both_favorable_to_x:
        raise NotBothFavorable("jointly_favorable requires both environments favorable to x")
    return interval_I(pair).empty and interval_J(pair).empty


# -- bracket (hypoellipticity) conditions -------------------------------------


@dataclass(frozen=True)
class BracketCheck:
    holds: bool
    rate_ratio: float
    ac_ratio: float
    bd_ratio: float


def _differs(x: float, y: float) -> bool:
    return abs(x - y) > RATIO_RTOL * max(abs(x), abs(y))


def bracket_condition(pair: EnvironmentPair) -> BracketCheck:
    e0, e1 = pair.env0, pair.env1
    rate = e0.beta * e1.alpha / (e0.alpha * e1.beta)
    ac = e0.a * e1.c / (e1.a * e0.c)
    bd = e0.b * e1.d / (e1.b * e0.d)
    return BracketCheck(_differs(rate, ac) or _differs(rate, bd), rate, ac, bd)


def lie_letters(pair: EnvironmentPair) -> dict[str, float]:
    """Coefficients A..L of ``F1 - F0`` and ``F0`` written as polynomials."""
    e0, e1 = pair.env0, pair.env1
    return dict(
        A=e1.alpha - e0.alpha,
        B=e0.alpha * e0.a - e1.alpha * e1.a,
        C=e0.alpha * e0.b - e1.alpha * e1.b,
        D=e1.beta - e0.beta,
        E=e0.beta * e0.d - e1.beta * e1.d,
        F=e0.beta * e0.c - e1.beta * e1.c,
        G=e0.alpha,
        H=-e0.alpha * e0.a,
        I=-e0.alpha * e0.b,
        J=e0.beta,
        K=-e0.beta * e0.d,
        L=-e0.beta * e0.c,
    )


def lie_determinant_coefficients(pair: EnvironmentPair) -> dict[str, float]:
    """Monomial coefficients c_ij of det(F1 - F0, [F1, F0]) = sum c_ij x^i y^j."""
    v = lie_letters(pair)
    A, B, C, D, E, F = (v[k] for k in "ABCDEF")
    G, H, I, J, K, L = (v[k] for k in "GHIJKL")
    return {
        "c41": -B * F * H + B * B * L,
        "c32": -2 * C * F * H - F * F * I + B * F * K + 2 * B * C * L - B * E * L + C * F * L,
        "c23": -C * E * H + B * E * I - C * F * I - 2 * E * F * I + 2 * C * F * K + C * C * L,
        "c14": -E * E * I + C * E * K,
        "c31": -2 * A * F * H + 2 * A * B * L,
        "c22": (B * E * G - C * F * G - C * D * H - A * E * H + B * D * I - A * F * I
                - 2 * D * F * I - B * E * J + C * F * J + B * D * K + A * F * K
                + 2 * A * C * L + C * D * L - A * E * L),
        "c13": -2 * D * E * I + 2 * C * D * K,
        "c21": B * D * G - A * F * G - A * D * H + A * A * L,
        "c12": -D * D * I + C * D * J - A * E * J + A * D * K,
    }
