import math

import pytest

from alsbr.channel import LinkStatistics
from alsbr.errors import DomainError, NonConvergenceError, NoSignChangeError, SolverError
from alsbr.rates import HopPair, rate_cbr, rate_cubr, rate_relay_hop, rate_source_hop
from alsbr.solver import SolverSpec, alsbr_rate, solve_rho
from alsbr.validation import baseline_hops

L = LinkStatistics.from_means


def test_symmetric_hops_balance_at_unit_threshold():
    link = L(1000.0, 20.0)
    sol = solve_rho(HopPair(link, link))
    assert sol.rho == 1.0
    assert sol.iterations <= 1
    assert sol.rate_source == pytest.approx(sol.rate_relay, abs=1e-12)


@pytest.mark.parametrize("d_sp,d_rp", [(1.0, 10.0), (4.0, 4.64), (12.0, 2.93), (20.0, 10.0), (2.93, 2.93)])
def test_residual_and_hop_rates(d_sp, d_rp):
    _, hops = baseline_hops(d_sp, d_rp)
    sol = solve_rho(hops)
    assert abs(sol.residual) <= 1e-9
    assert rate_source_hop(hops, sol.rho) == pytest.approx(sol.rate_source, abs=1e-15)
    assert rate_relay_hop(hops, sol.rho) == pytest.approx(sol.rate_relay, abs=1e-15)
    assert sol.rate == pytest.approx(min(sol.rate_source, sol.rate_relay))
    assert sol.log2_rho == pytest.approx(math.log2(sol.rho))


def test_threshold_moves_with_the_stronger_hop():
    # a stronger relay hop needs fewer slots, so its selection bar rho* rises above 1
    strong_relay = HopPair(L(100.0, 50.0), L(1000.0, 500.0))
    assert solve_rho(strong_relay).rho > 1.0
    assert solve_rho(strong_relay.exchanged()).rho < 1.0
    assert solve_rho(strong_relay).rho * solve_rho(strong_relay.exchanged()).rho == pytest.approx(1.0, rel=1e-6)


def test_log2_rho_sign_at_far_interferer():
    _, hops = baseline_hops(15.0, 10.0)
    assert solve_rho(hops).log2_rho < 0


@pytest.mark.parametrize("d_sp,d_rp", [(1.0, 10.0), (5.0, 4.64), (3.0, 2.93), (8.0, 10.0)])
def test_adaptive_selection_dominates(d_sp, d_rp):
    _, hops = baseline_hops(d_sp, d_rp)
    r = alsbr_rate(hops)
    assert r >= rate_cubr(hops)
    assert r >= rate_cbr(hops)


def test_deterministic():
    _, hops = baseline_hops(6.0, 4.64)
    assert solve_rho(hops) == solve_rho(hops)


def test_continuity_in_geometry():
    a = solve_rho(baseline_hops(5.0, 4.64)[1])
    b = solve_rho(baseline_hops(5.0 + 1e-6, 4.64)[1])
    assert b.rho == pytest.approx(a.rho, rel=1e-4)
    assert b.rate == pytest.approx(a.rate, rel=1e-6)


def test_bracket_expands():
    hops = HopPair(L(1e6, 1e6), L(1.0, 1.0))
    sol = solve_rho(hops, SolverSpec(bracket=(-1.0, 1.0)))
    assert abs(sol.residual) <= 1e-9


def test_no_sign_change():
    # a relay hop that can never carry data
    dead = LinkStatistics(1e-12, 1.0, 0.0)
    with pytest.raises(NoSignChangeError, match="one sign"):
        solve_rho(HopPair(L(100.0, 10.0), dead))


def test_non_finite_imbalance(monkeypatch):
    import alsbr.solver as solver

    monkeypatch.setattr(solver, "rate_relay_hop", lambda *a: math.nan)
    with pytest.raises(SolverError, match="not finite"):
        solve_rho(HopPair(L(10.0, 1.0), L(10.0, 2.0)))


def test_non_convergence_reported():
    _, hops = baseline_hops(6.0, 4.64)
    with pytest.raises(NonConvergenceError, match="iterations"):
        solve_rho(hops, SolverSpec(max_iterations=1, rate_tolerance=1e-14))


@pytest.mark.parametrize("kwargs", [dict(rate_tolerance=0.0), dict(bracket=(1.0, -1.0)), dict(max_iterations=0)])
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        SolverSpec(**kwargs)
