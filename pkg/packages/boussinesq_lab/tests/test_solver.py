import math

import numpy as np
import pytest

from boussinesq_lab.diagnostics import energy_balance, energy_functional
from boussinesq_lab.errors import CFLViolationError, GridError, InvalidInputError, NumericalInstabilityError
from boussinesq_lab.linear import max_relative_error, propagate_exact
from boussinesq_lab.models import GridSpec, SimConfig
from boussinesq_lab.nonlinear import (
    NonlinearState,
    Simulation,
    iter_run,
    random_solenoidal,
    run,
    step,
    tendency,
    twin_convergence,
)
from boussinesq_lab.spectral import l2_norm_sq, make_grid


def _cfg(**kw) -> SimConfig:
    base = dict(grid=GridSpec(n1=16, n2=16), dt=0.01, T=0.5, cadence=10)
    base.update(kw)
    return SimConfig(**base)


@pytest.fixture
def init(grid16, rng):
    return random_solenoidal(grid16, 1.0, rng, band=3)


def test_records_follow_the_cadence(init):
    result = run(_cfg(T=0.1, cadence=5), init)
    assert [r.step for r in result.records] == [0, 5, 10]
    assert result.records[-1].t == pytest.approx(0.1)
    assert not result.unstable


def test_final_step_is_always_recorded(init):
    records = [rec for _, rec in iter_run(_cfg(T=0.07, cadence=5), init)]
    assert [r.step for r in records] == [0, 5, 7]


def test_first_record_matches_the_initial_state(init):
    rec = run(_cfg(T=0.01), init).records[0]
    expected = l2_norm_sq(init.u.u1) + l2_norm_sq(init.u.u2) + l2_norm_sq(init.theta)
    assert rec.l2_sq == pytest.approx(expected, rel=1e-12)
    assert rec.int_d2u_l2 == 0.0


def test_state_stays_clean(init):
    result = run(_cfg(T=0.2), init)
    assert result.final.is_clean()


def test_linear_mode_matches_the_exact_propagator(init, params):
    result = run(_cfg(nonlinear=False), init)
    exact = propagate_exact(init.to_linear(), 0.5, params)
    assert max_relative_error(result.final.to_linear(), exact, init.to_linear()) <= 1e-5


def test_energy_identity_holds_for_the_nonlinear_flow(init, params):
    result = run(_cfg(T=1.0), init, detect_growth=False)
    drift = energy_balance(result.records, params)
    assert np.max(np.abs(drift)) <= 1e-6


def test_imex_scheme_also_balances_energy_to_second_order(init, params):
    coarse = run(_cfg(T=0.4, dt=0.02, scheme="imex-cn"), init, detect_growth=False)
    fine = run(_cfg(T=0.4, dt=0.01, scheme="imex-cn"), init, detect_growth=False)
    d0 = abs(energy_balance(coarse.records, params)[-1])
    d1 = abs(energy_balance(fine.records, params)[-1])
    assert d1 < d0


def test_if_rk4_self_convergence_order(init):
    report = twin_convergence(_cfg(T=0.4), init, [0.04, 0.02, 0.01])
    assert report.converging
    assert report.order >= 3.5


def test_imex_self_convergence_order(init):
    report = twin_convergence(_cfg(T=0.4, scheme="imex-cn"), init, [0.04, 0.02, 0.01])
    assert report.order >= 1.8


def test_twin_convergence_input_checks(init):
    with pytest.raises(InvalidInputError):
        twin_convergence(_cfg(T=0.4), init, [0.04, 0.02])
    with pytest.raises(InvalidInputError):
        twin_convergence(_cfg(T=0.4), init, [0.04, 0.03, 0.01])


def test_grid_mismatch(rng):
    other = random_solenoidal(make_grid(8, 8), 1.0, rng, band=2)
    with pytest.raises(GridError):
        Simulation(_cfg(), other)


def test_cfl_violation_suggests_a_step(init):
    big = NonlinearState(init.u * 1e4, init.theta, 0.0)
    with pytest.raises(CFLViolationError) as info:
        Simulation(_cfg(dt=0.1, T=1.0), big)
    assert 0 < info.value.suggested_dt < 0.1
    assert info.value.cfl > 0.5


def test_non_finite_tendency_names_the_field(grid16, init):
    y = init.stacked().copy()
    y[2, 1, 1] = np.nan
    with pytest.raises(NumericalInstabilityError) as info:
        tendency(grid16, y)
    assert info.value.meta["field"] in {"u1", "u2", "theta"}


def test_growth_detection_flags_instead_of_raising(init, monkeypatch):
    import boussinesq_lab.nonlinear.solver as solver

    monkeypatch.setattr(solver, "GROWTH_FACTOR", 1e-6)
    result = run(_cfg(T=0.1, cadence=1), init)
    assert result.unstable
    assert "grew" in result.reason
    # the threshold already trips on the first record
    assert len(result.records) == 1


def test_run_tracks_the_energy_functional(init):
    cfg = _cfg(T=0.3, cadence=3)
    result = run(cfg, init)
    expected = [r.E for r in energy_functional(result.records, cfg.delta, cfg.params)]
    assert result.energies == pytest.approx(expected, rel=1e-12)
    assert result.growth == pytest.approx(max(expected) / expected[0], rel=1e-12)


def test_growth_flag_counts_the_dissipation_integrals(init, monkeypatch):
    import boussinesq_lab.nonlinear.solver as solver

    # The linear flow never raises the H2 norm, but E(t) still gains the
    # dissipation integrals.
    factor = 1.0 + 1e-6
    monkeypatch.setattr(solver, "GROWTH_FACTOR", factor)
    result = run(_cfg(T=0.1, cadence=2, nonlinear=False), init)
    assert result.unstable
    assert "E(t)" in result.reason
    h2 = [r.h2_sq for r in result.records]
    assert max(h2) <= factor * h2[0]
    assert result.energies[-1] > factor * result.energies[0]


def test_keep_every_thins_the_kept_states(init):
    result = run(_cfg(T=0.1, cadence=2), init, keep_states=True, keep_every=2)
    assert [s.t for s in result.snapshots] == pytest.approx([0.0, 0.04, 0.08])
    with pytest.raises(InvalidInputError):
        run(_cfg(T=0.1), init, keep_states=True, keep_every=0)


def test_single_step_advances_time(init):
    out = step(init, _cfg())
    assert out.t == pytest.approx(0.01)
    assert not np.array_equal(out.stacked(), init.stacked())


def test_zero_state_stays_zero(grid16):
    result = run(_cfg(T=0.1), NonlinearState.zeros(grid16))
    assert np.abs(result.final.stacked()).max() == 0.0
    assert math.isclose(result.records[-1].l2_sq, 0.0)
