"""Built-in golden checks run by ``lvswitch validate``. All are deterministic and fast."""
from __future__ import annotations

from dataclasses import dataclass

from .boundary import boundary_measure
from .envmodel import Environment, EnvironmentPair, SwitchRates, interval_I, interval_J
from .fixtures import REGIME_POINTS, I_ENDPOINTS, J_ENDPOINTS_RHO1, reference_pair, weight_to_s
from .invasion import classify_outcome, frequency_limits, invasion_rate_y


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _close(got, want, tol) -> bool:
    return all(abs(g - w) <= tol for g, w in zip(got, want))


def _intervals() -> list[Check]:
    out = []
    i3 = interval_I(reference_pair(3)).interval
    out.append(Check("interval_I_rho3", i3 is not None and _close(i3, I_ENDPOINTS, 1e-10), f"I={i3}"))
    out.append(Check("interval_J_rho3_empty", interval_J(reference_pair(3)).empty, "J empty"))
    i0, j0 = interval_I(reference_pair(0)).interval, interval_J(reference_pair(0)).interval
    out.append(Check("interval_J_eq_I_rho0", j0 is not None and _close(j0, i0, 1e-10), f"J={j0}"))
    j1 = interval_J(reference_pair(1)).interval
    out.append(Check("interval_J_rho1", j1 is not None and _close(j1, J_ENDPOINTS_RHO1, 1e-10), f"J={j1}"))
    return out


def _masses() -> list[Check]:
    pair = reference_pair(3)
    worst = 0.0
    for s in (0.1, 0.5, 0.9):
        for t in (0.1, 10.0):
            r = SwitchRates.from_st(s, t)
            bm = boundary_measure(pair, r)
            worst = max(worst, abs(bm.mass0 - r.lambda1 / r.t), abs(bm.mass1 - r.lambda0 / r.t))
    return [Check("boundary_regime_masses", worst <= 1e-9, f"max error {worst:.3e}")]


def _rates() -> list[Check]:
    out = []
    dirac = EnvironmentPair(Environment(1, 1, 2, 2, 1, 5), Environment(1, 1, 4, 4, 1, 1))
    v = invasion_rate_y(dirac, SwitchRates(1.0, 1.0)).value
    out.append(Check("dirac_rate", abs(v + 4.0) <= 1e-12, f"value={v!r}"))
    pair = reference_pair(3)
    for s in (0.3, 0.5, 0.75):
        low, high = frequency_limits(pair, s)
        hi_v = invasion_rate_y(pair, SwitchRates.from_st(s, 1e6)).value
        lo_v = invasion_rate_y(pair, SwitchRates.from_st(s, 1e-6)).value
        ok = abs(hi_v - high) <= 1e-3 and abs(lo_v - low) <= 1e-3
        out.append(Check(f"frequency_limits_s{s}", ok,
                         f"high {hi_v:.6g} vs {high:.6g}, low {lo_v:.6g} vs {low:.6g}"))
    for rho, u, t, want in REGIME_POINTS:
        rep = classify_outcome(reference_pair(rho), SwitchRates.from_st(weight_to_s(u), t))
        out.append(Check(f"outcome_rho{rho:g}_w{u:g}_t{t:.4g}", rep.outcome.value == want,
                         f"{rep.outcome.value} signs={''.join(rep.signs)}"))
    return out


def run_golden() -> list[Check]:
    return _intervals() + _masses() + _rates()
