import math
from dataclasses import replace

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thinwall import entropy_link as el
from thinwall.errors import DomainError, StepError
from thinwall.evolution import (
    ParamRule,
    ParamSchedule,
    Regime,
    RegimeThresholds,
    SimulationConfig,
    detect_regime,
    run_simulation,
    schedule_eval,
    step_observables,
    transition_times,
)
from thinwall.field_profile import diagnostics

mp.mp.dps = 30

N_AT_2 = 0.367879441171442321596  # e^-1

STATIC = ParamSchedule(ParamRule("constant", 1.0), ParamRule("constant", 2.0), ParamRule("constant", 10.0))


@pytest.fixture(scope="module")
def default_sim():
    return SimulationConfig()


@pytest.fixture(scope="module")
def default_records(default_sim):
    return run_simulation(default_sim)


def test_frozen_values_match_mpmath():
    assert float(mp.e**-1) == pytest.approx(N_AT_2, rel=1e-15)


def test_schedule_initial_condition():
    s = ParamSchedule()
    p = schedule_eval(s, 0.0)
    assert (p.N, p.b, p.L) == (1.0, 2.0, 10.0)


def test_schedule_exponential_decay():
    s = ParamSchedule(N=ParamRule("exponential", 1.0, 0.5))
    assert schedule_eval(s, 2.0).N == pytest.approx(N_AT_2, rel=1e-15)


def test_schedule_rejects_negative_time():
    with pytest.raises(DomainError):
        schedule_eval(ParamSchedule(), -0.1)


def test_rule_validation():
    with pytest.raises(DomainError):
        ParamRule("cubic")
    with pytest.raises(DomainError):
        ParamRule("linear", 1.0, -0.2)


@pytest.mark.parametrize("kind", ["constant", "exponential", "linear"])
def test_schedule_monotone(kind):
    s = ParamSchedule(ParamRule(kind, 1.0, 0.3), ParamRule(kind, 2.0, 0.2), ParamRule(kind, 10.0, 0.1))
    ps = [schedule_eval(s, k / 10) for k in range(101)]
    for a, b in zip(ps, ps[1:]):
        assert b.N <= a.N and b.b >= a.b and b.L >= a.L
        assert b.N >= 0


def test_linear_amplitude_stops_at_zero():
    s = ParamSchedule(N=ParamRule("linear", 1.0, 0.5))
    assert schedule_eval(s, 4.0).N == 0.0


def test_thresholds_validation():
    with pytest.raises(DomainError):
        RegimeThresholds(theta_thin=1.0)
    with pytest.raises(DomainError):
        RegimeThresholds(eps_v=0)


def test_detect_regime_examples():
    th = RegimeThresholds(theta_thin=0.1, theta_entropy=0.05, phi_cc=0.5, eps_v=0.05)
    assert detect_regime(6.0, 0.001, 0.0, 3.0, 0.05, 0.5, th) == Regime.THIN_WALL
    assert detect_regime(6.0, 0.001, 0.05, 3.0, 0.05, 0.5, th) == Regime.BREAKDOWN
    assert detect_regime(0.25, 0.001, 0.0, 0.05, 0.05, 0.5, th) == Regime.COSMOLOGICAL_CONSTANT


def test_detect_regime_latches():
    th = RegimeThresholds(phi_cc=0.5)
    assert detect_regime(6.0, 0.001, 0.0, 3.0, 0.05, 0.5, th, Regime.BREAKDOWN) == Regime.BREAKDOWN
    assert detect_regime(6.0, 0.001, 0.0, 3.0, 0.05, 0.5, th,
                         Regime.COSMOLOGICAL_CONSTANT) == Regime.COSMOLOGICAL_CONSTANT


def test_detect_regime_thinness_trigger():
    th = RegimeThresholds(theta_thin=0.1)
    assert detect_regime(6.0, 0.1, 0.0, 3.0, 0.05, 0.5, th) == Regime.BREAKDOWN


def test_constant_schedules_produce_no_fluctuation():
    cfg = SimulationConfig(schedule=STATIC, t_end=1.0, dt=0.1)
    recs = run_simulation(cfg)
    for r in recs:
        assert r.phi_dot == 0 and r.phi_tilde == 0 and r.delta_s_over_s == 0
        assert r.regime == Regime.THIN_WALL
    assert len({r.V_eff for r in recs if r.t < 9.0}) == 1


def test_constant_schedule_potential_constant_per_branch():
    cfg = SimulationConfig(schedule=STATIC, t_end=20.0, dt=0.5)
    recs = run_simulation(cfg)
    early = {r.V_eff for r in recs if r.t < 9.0}
    late = {r.V_eff for r in recs if r.t > 11.0}
    assert len(early) == 1 and len(late) == 1


def test_default_initial_step_is_thin_wall(default_sim):
    r = step_observables(0.0, default_sim)
    assert r.thinness == 2 / (2 * 10) < default_sim.thresholds.theta_thin
    assert r.regime == Regime.THIN_WALL


def test_zero_horizon_gives_single_record():
    recs = run_simulation(SimulationConfig(t_end=0.0))
    assert len(recs) == 1 and recs[0].t == 0.0


def test_record_count_and_times(default_records, default_sim):
    assert len(default_records) == default_sim.n_steps + 1 == 2001
    ts = [r.t for r in default_records]
    assert all(b > a for a, b in zip(ts, ts[1:]))
    assert ts[-1] == pytest.approx(20.0)


def test_default_regime_sequence(default_records):
    regimes = [r.regime for r in default_records]
    assert all(b >= a for a, b in zip(regimes, regimes[1:]))
    assert set(regimes) == set(Regime)


def test_default_thinness_strictly_decreasing(default_records):
    # b and L both grow, so 2/(bL) falls
    th = [r.thinness for r in default_records]
    assert all(b < a for a, b in zip(th, th[1:]))


def test_entropy_sign_follows_plateau_rate(default_records):
    for r in default_records[1:]:
        assert math.copysign(1, r.delta_s_over_s) == math.copysign(1, r.phi_dot)
        assert r.phi_dot < 0


def test_entropy_nonnegative_when_plateau_grows():
    # constant N with walls sharpening from a soft start: tanh(bL/2) rises
    sched = ParamSchedule(ParamRule("constant", 0.2), ParamRule("exponential", 0.05, 0.3),
                          ParamRule("constant", 10.0))
    recs = run_simulation(SimulationConfig(schedule=sched, t_end=5.0, dt=0.05,
                                           thresholds=RegimeThresholds(theta_thin=0.9, theta_entropy=10)))
    for r in recs:
        assert r.phi_dot > 0 and r.delta_s_over_s >= 0


def test_wall_charge_non_increasing_once_saturated(default_records):
    sat = [r for r in default_records if r.b * r.L >= 20]
    assert all(b.wall_charge <= a.wall_charge for a, b in zip(sat, sat[1:]))


def test_g_deviation_bounds(default_records, default_sim):
    kappa, phi0 = default_sim.calibration.kappa, default_sim.phi0
    for r in default_records:
        dev = abs(r.G - kappa / phi0)
        a = abs(r.phi_tilde)
        exact = kappa * a / (phi0 * (phi0 - a))
        assert dev <= exact * (1 + 1e-12)
        if r.phi_tilde >= 0:
            assert dev <= kappa * a / phi0**2 * (1 + a / phi0) * (1 + 1e-12)


def test_positive_fluctuation_meets_first_order_g_bound():
    sched = ParamSchedule(ParamRule("constant", 0.2), ParamRule("exponential", 0.05, 0.3),
                          ParamRule("constant", 10.0))
    cfg = SimulationConfig(schedule=sched, t_end=5.0, dt=0.05)
    for r in run_simulation(cfg):
        a = r.phi_tilde
        assert abs(r.G - 1 / cfg.phi0) <= a / cfg.phi0**2 * (1 + a / cfg.phi0) * (1 + 1e-12)


def test_late_endpoint(default_records, default_sim):
    last = default_records[-1]
    V0 = default_sim.potential.V0
    assert last.plateau_phi < default_sim.phi_cc
    assert abs(last.V_eff - V0) <= default_sim.thresholds.eps_v * V0
    assert last.regime == Regime.COSMOLOGICAL_CONSTANT


def test_determinism(default_sim, default_records):
    assert run_simulation(default_sim) == default_records


def _continuous_entropy(sim, t):
    # independent path: analytic-rate plateau derivative via mpmath
    def plateau(tt):
        s = sim.schedule
        N = s.N.initial * mp.e ** (-s.N.rate * tt)
        b = s.b.initial * mp.e ** (s.b.rate * tt)
        L = s.L.initial * (1 + s.L.rate * tt)
        return 2 * mp.pi * N * mp.tanh(b * L / 2)

    rate = mp.diff(plateau, t)
    return abs(2 * t * rate / sim.phi0)


def _bisect_onset(sim, lo, hi, steps=60):
    theta = sim.thresholds.theta_entropy
    for _ in range(steps):
        mid = (lo + hi) / 2
        if _continuous_entropy(sim, mid) >= theta:
            hi = mid
        else:
            lo = mid
    return float(hi)


def test_breakdown_onset_matches_refined_oracle(default_sim, default_records):
    onset = transition_times(default_records)[Regime.BREAKDOWN]
    assert onset is not None
    oracle = _bisect_onset(default_sim, 0.0, 2.0)
    assert abs(onset - oracle) <= default_sim.dt
    fine = replace(default_sim, dt=default_sim.dt / 100, t_end=2.0)
    fine_onset = transition_times(run_simulation(fine))[Regime.BREAKDOWN]
    assert abs(onset - fine_onset) <= default_sim.dt


def test_halving_dt_moves_transitions_by_at_most_one_step(default_sim, default_records):
    coarse = transition_times(default_records)
    half = transition_times(run_simulation(replace(default_sim, dt=default_sim.dt / 2)))
    for regime in Regime:
        assert abs(coarse[regime] - half[regime]) <= default_sim.dt


def _onset_with_rate(sim, which, rate):
    rule = getattr(sim.schedule, which)
    cfg = replace(sim, t_end=2.0, schedule=replace(sim.schedule, **{which: replace(rule, rate=rate)}))
    return transition_times(run_simulation(cfg))[Regime.BREAKDOWN]


def test_faster_decay_advances_breakdown(default_sim, default_records):
    base = transition_times(default_records)[Regime.BREAKDOWN]
    assert _onset_with_rate(default_sim, "N", 0.5) < base


def test_faster_steepening_never_delays_breakdown(default_sim, default_records):
    # with tanh(bL/2) saturated the plateau rate hardly depends on b
    base = transition_times(default_records)[Regime.BREAKDOWN]
    assert _onset_with_rate(default_sim, "b", 0.4) <= base


def test_step_interval_mode_scales_fluctuation_with_dt():
    a = step_observables(0.5, SimulationConfig(fluctuation_interval="step", dt=0.01))
    b = step_observables(0.5, SimulationConfig(fluctuation_interval="step", dt=0.02))
    assert b.phi_tilde / a.phi_tilde == pytest.approx(2.0, rel=1e-2)


def test_step_failure_reports_time():
    # phi0 small enough that the fluctuation outgrows the background
    cfg = SimulationConfig(phi0=0.5, t_end=2.0, dt=0.1)
    with pytest.raises(StepError) as info:
        run_simulation(cfg)
    assert info.value.t > 0
    assert isinstance(info.value.cause, DomainError)


def test_config_validation():
    with pytest.raises(DomainError):
        SimulationConfig(dt=0)
    with pytest.raises(DomainError):
        SimulationConfig(t_end=1.005, dt=0.01)
    with pytest.raises(DomainError):
        SimulationConfig(entropy_mode="second-order")
    with pytest.raises(el.CalibrationError):
        SimulationConfig(calibration=el.EntropyCalibration(T=1.0))


def test_phi_cc_default_and_override():
    cfg = SimulationConfig()
    assert cfg.phi_cc == pytest.approx(0.1 * diagnostics(schedule_eval(cfg.schedule, 0)).plateau)
    assert SimulationConfig(thresholds=RegimeThresholds(phi_cc=0.3)).phi_cc == 0.3


@settings(max_examples=15, deadline=None)
@given(lam_n=st.floats(0.0, 1.0), lam_b=st.floats(0.0, 0.5), lam_l=st.floats(0.0, 0.5))
def test_regimes_never_regress(lam_n, lam_b, lam_l):
    sched = ParamSchedule(ParamRule("exponential", 1.0, lam_n), ParamRule("exponential", 2.0, lam_b),
                          ParamRule("linear", 10.0, lam_l))
    recs = run_simulation(SimulationConfig(schedule=sched, t_end=12.0, dt=0.1, phi0=40.0))
    regimes = [r.regime for r in recs]
    assert all(b >= a for a, b in zip(regimes, regimes[1:]))
