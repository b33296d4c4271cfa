import math

import pytest

import dealbid as db


def test_binomial_small_case():
    assert db.phi(2, 4, 0.5, db.TailMode.exact) == pytest.approx(0.6875, abs=1e-15)
    assert db.theta(2, 4, 0.5, db.TailMode.exact) == pytest.approx(1.75, abs=1e-15)
    assert db.binomial_pmf(2, 4, 0.5) == pytest.approx(0.375, abs=1e-15)


def test_static_bid_closed_form():
    win = db.WinModel.uniform(0.0, 0.04, 4)
    deal = db.Deal(0, 1000, 10.0, 0.002)
    # (n-1)/n * rho * mu
    assert db.static_optimal_bid(deal, win) == pytest.approx(0.75 * 0.02, abs=1e-8)


def test_marginal_value_after_tipping():
    win = db.WinModel.uniform(0.0, 0.04, 4)
    deal = db.Deal(5, 1000, 10.0, 0.01)
    pos = db.Position(clicks=5, remaining_clicks=0, remaining_visits=100)
    assert db.marginal_value(deal, pos, 0.02, win) == pytest.approx(0.1, rel=1e-12)


def test_next_bid_updates_state():
    win = db.WinModel.uniform(0.0, 0.04, 4)
    deal = db.Deal(20, 5000, 10.0, 0.01)
    state = db.DealState()
    d = db.next_bid(deal, state, win, seed=3)
    assert d.path == "multi_start"
    assert win.bounds().lo <= d.bid <= win.bounds().hi
    assert state.cached_bid == pytest.approx(d.bid)
    assert state.starts_done == 1


def test_sweep_is_deterministic():
    log = db.generate_synthetic_log(5, 2000, 2000, 0.01, 0.02, seed=1)
    win = db.WinModel.uniform(0.0, 0.04, 4)
    a = db.sweep(log, [0, 10], ["rt", "static"], win, seed=9)
    b = db.sweep(log, [0, 10], ["rt", "static"], win, seed=9)
    assert a == b
    assert len(a) == 4
    # m = 0: every strategy bids the static optimum
    assert a[0]["mean_profit"] == a[1]["mean_profit"]


def test_objective_curve_shape():
    win = db.WinModel.uniform(0.0, 0.1, 2)
    deal = db.Deal(25, 3020, 15.0, 0.002)
    pos = db.Position(clicks=20, remaining_clicks=5, remaining_visits=3000)
    rows = db.objective_curve(deal, pos, win, 0.0, 0.1, 101)
    assert len(rows) == 101
    assert rows[0][1] == 0.0
    assert all(math.isfinite(v) for r in rows for v in r)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        db.WinModel.uniform(0.1, 0.0, 4)
    with pytest.raises(ValueError):
        db.Deal(-1, 10, 1.0, 0.1)
    with pytest.raises(ValueError):
        db.AdLog("a", [0, 2])
