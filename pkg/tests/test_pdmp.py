import math

import numpy as np
import pytest
from scipy.stats import kstest

from lvswitch.envmodel import SwitchRates, u_to_s
from lvswitch.errors import ExtinctFloor, InputError, IntegratorFailure
from lvswitch.fixtures import reference_pair
from lvswitch.invasion import invasion_rate_x, invasion_rate_y
from lvswitch.pdmp import (SimConfig, Trajectory, boundary_time_average, extinction_ensemble,
                           lyapunov_slope, near_extinction_fraction, occupation_histogram,
                           simulate, simulate_boundary)
from lvswitch.rng import make_generator, replicate_seed, splitmix64, switching_times

PAIR3 = reference_pair(3)


def test_splitmix_reference_values():
    # first outputs of the reference SplitMix64 stream seeded with 0
    assert splitmix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF
    assert replicate_seed(0, 0) == 0xE220A8397B1DCDAF
    assert replicate_seed(0, 1) == 0x6E789E6AA1B965F4


def test_config_validation():
    with pytest.raises(InputError):
        SimConfig(ode_rel_tol=0)
    with pytest.raises(InputError):
        SimConfig(extinction_log_threshold=1.0)


def test_simulation_is_deterministic():
    r = SwitchRates(3.0, 2.0)
    a = simulate(PAIR3, r, 0.4, 0.3, 0, 100.0, seed=7)
    b = simulate(PAIR3, r, 0.4, 0.3, 0, 100.0, seed=7)
    c = simulate(PAIR3, r, 0.4, 0.3, 0, 100.0, seed=8)
    assert np.array_equal(a.log_x, b.log_x) and np.array_equal(a.jump_times, b.jump_times)
    assert not np.array_equal(a.log_x, c.log_x)


def test_records_and_jumps_are_well_formed():
    tr = simulate(PAIR3, SwitchRates(5.0, 5.0), 0.5, 0.5, 1, 50.0, seed=1)
    assert tr.t[0] == 0.0 and tr.t[-1] == 50.0
    assert np.all(np.diff(tr.jump_times) > 0)
    assert np.all(np.isfinite(tr.log_x)) and np.all(np.isfinite(tr.log_y))
    # regime at each record equals parity of jumps so far
    n_before = np.searchsorted(tr.jump_times, tr.t, side="right")
    assert np.array_equal(tr.regime, (1 + n_before) % 2)


def test_face_dynamics_match_exact_logistic():
    r = SwitchRates(2.0, 3.0)
    tr = simulate(PAIR3, r, 0.6, 0.0, 0, 1000.0, seed=3)
    assert np.all(np.isneginf(tr.log_y))
    exact = simulate_boundary(PAIR3, r, 0.6, 1000.0, seed=3).sample(tr.t)
    assert np.max(np.abs(tr.x - exact)) <= 1e-8


def test_sojourns_are_exponential():
    lam0, lam1 = 2.0, 0.5
    jumps = switching_times(lam0, lam1, 0, 4e4, make_generator(11))
    gaps = np.diff(np.concatenate([[0.0], jumps]))
    g0, g1 = gaps[0::2], gaps[1::2]
    assert g0.size >= 1e4 and g1.size >= 1e4
    assert kstest(g0, "expon", args=(0, 1 / lam0)).pvalue > 1e-3
    assert kstest(g1, "expon", args=(0, 1 / lam1)).pvalue > 1e-3


def test_pinned_environment_converges_to_boundary_equilibrium():
    tr = simulate(PAIR3, SwitchRates(1e-12, 1.0), 0.5, 0.5, 0, 200.0, seed=0)
    assert tr.n_jumps == 0
    assert tr.x[-1] == pytest.approx(1.0, abs=1e-6) and tr.y[-1] < 1e-12


def test_boundary_equilibrium_and_monotone_logistic():
    const = simulate_boundary(PAIR3, SwitchRates(1e-12, 1.0), 1.0, 50.0)
    assert np.all(const.sample(np.linspace(0, 50, 11)) == 1.0)
    path = simulate_boundary(PAIR3, SwitchRates(1e-12, 1.0), 0.05, 50.0)
    xs = path.sample(np.linspace(0, 50, 501))
    assert np.all(np.diff(xs) >= 0) and xs[-1] == pytest.approx(1.0, abs=1e-12)


def test_boundary_occupation_is_exact_for_single_segment():
    path = simulate_boundary(PAIR3, SwitchRates(1e-12, 1.0), 0.1, 3.0)
    edges = np.array([0.0, 0.2, 0.5, 2.0])
    occ = path.occupation(edges)
    # logistic from 0.1 toward 1 at rate 1: reaches v at log(v*0.9/(0.1*(1-v)))
    t02, t05 = math.log(0.2 * 0.9 / (0.1 * 0.8)), math.log(0.5 * 0.9 / (0.1 * 0.5))
    assert occ * 3.0 == pytest.approx([t02, t05 - t02, 3.0 - t05], rel=1e-12)


def test_boundary_time_average_near_rate():
    r = SwitchRates(1.0, 1.0)
    avg = boundary_time_average(simulate_boundary(PAIR3, r, 0.5, 2e4, seed=5), PAIR3)
    assert avg == pytest.approx(invasion_rate_y(PAIR3, r).value, rel=0.05)


def test_constant_trajectory_histogram():
    t = np.linspace(0, 10, 101)
    tr = Trajectory(t, np.full_like(t, math.log(0.35)), np.full_like(t, math.log(0.25)),
                    np.zeros(t.size, dtype=np.int64), np.array([]), 0, SimConfig(), 10.0, 0)
    h = occupation_histogram(tr, bins=(10, 10), x_max=1.0, y_max=1.0)
    assert h.mass[0, 3, 2] == pytest.approx(1.0, abs=1e-12)
    assert h.mass.sum() == pytest.approx(1.0, abs=1e-12)


def test_histogram_masses_sum_to_one():
    tr = simulate(PAIR3, SwitchRates(4.0, 4.0), 0.5, 0.5, 0, 200.0, seed=2)
    h = occupation_histogram(tr, bins=(30, 20), pair=PAIR3, window=(100.0, 200.0))
    assert np.all(h.mass >= 0) and h.mass.sum() == pytest.approx(1.0, abs=1e-12)
    assert len(list(h.rows())) == 2 * 30 * 20


def test_persistence_near_boundary_mass_shrinks():
    r = SwitchRates.from_st(u_to_s(PAIR3, 0.75), 12.0)
    tr = simulate(PAIR3, r, 0.5, 0.5, 0, 3000.0, seed=4)
    m = [near_extinction_fraction(tr, eps, window=(500.0, 3000.0)) for eps in (0.05, 0.02, 0.01)]
    assert m[0] > m[1] > m[2]


def test_slope_of_extinct_species():
    r = SwitchRates.from_st(u_to_s(PAIR3, 0.4), 100.0)
    tr = simulate(PAIR3, r, 0.5, 0.5, 0, 1000.0, seed=9)
    est = lyapunov_slope(tr, "y")
    lam = invasion_rate_y(PAIR3, r).value
    assert est.slope < 0 and est.slope <= lam + 3 * est.stderr
    assert est.slope == pytest.approx(lam, rel=0.3)


def test_slope_of_x_when_x_goes_extinct():
    pair = reference_pair(1)
    r = SwitchRates.from_st(u_to_s(pair, 0.75), 100.0)
    tr = simulate(pair, r, 0.5, 0.5, 0, 1000.0, seed=1)
    est = lyapunov_slope(tr, "x")
    assert est.slope < 0
    assert est.slope == pytest.approx(invasion_rate_x(pair, r).value, rel=0.5)


def test_slope_of_persisting_species_near_zero():
    r = SwitchRates.from_st(u_to_s(PAIR3, 0.75), 12.0)
    tr = simulate(PAIR3, r, 0.5, 0.5, 0, 2000.0, seed=0)
    est = lyapunov_slope(tr, "x")
    lo, hi = est.band(4.0)
    assert lo <= 0.0 <= hi or abs(est.slope) < 1e-3


def test_slope_floor_truncates_and_errors_when_empty():
    r = SwitchRates.from_st(u_to_s(PAIR3, 0.4), 100.0)
    tr = simulate(PAIR3, r, 0.5, 0.5, 0, 400.0, seed=9)
    est = lyapunov_slope(tr, "y", discard_fraction=0.0, floor=-150.0)
    assert est.truncated and est.t_end < 400.0
    with pytest.raises(ExtinctFloor):
        lyapunov_slope(tr, "y", discard_fraction=0.5, floor=-1.0)


def test_integrator_failure_carries_partial_path():
    cfg = SimConfig(ode_rel_tol=1e-300, ode_abs_tol=1e-300)
    with pytest.raises(IntegratorFailure) as info:
        simulate(PAIR3, SwitchRates(1.0, 1.0), 0.5, 0.5, 0, 10.0, seed=0, cfg=cfg)
    assert isinstance(info.value.partial, Trajectory)


def test_ensemble_deterministic_under_threads():
    r = SwitchRates.from_st(u_to_s(reference_pair(0), 0.75), 1 / 0.15)
    a = extinction_ensemble(reference_pair(0), r, 0.5, 0.5, n_reps=12, horizon=800.0, seed=3)
    b = extinction_ensemble(reference_pair(0), r, 0.5, 0.5, n_reps=12, horizon=800.0, seed=3, threads=4)
    assert a.outcomes == b.outcomes and a.extinction_times == b.extinction_times
    assert a.p_extinct_x.low <= a.p_extinct_x.estimate <= a.p_extinct_x.high
    assert a.extinct_x + a.extinct_y + a.undecided == 12


def test_ensemble_extinction_of_y():
    r = SwitchRates.from_st(u_to_s(PAIR3, 0.4), 100.0)
    rep = extinction_ensemble(PAIR3, r, 0.5, 0.5, n_reps=20, horizon=500.0, seed=0)
    assert rep.extinct_y == 20
