import math

import pytest

import firmcomp as fc


def test_acceptance_example():
    pop = fc.ConsumerPopulation(1.0, 2.0)
    assert fc.acceptance_probability(fc.Offer(0.5, 1.0), pop) == pytest.approx(0.25)


def test_monopolist_optimum():
    opt = fc.monopolist_optimum(fc.ConsumerPopulation(1.0, 2.0))
    assert (opt.q_star, opt.p_star, opt.x_star) == pytest.approx((0.5, 1.0, 0.125))


def test_numeric_nash_matches_closed_form():
    pop = fc.ConsumerPopulation(2.0, 1.0)
    market = fc.market_at_monopolist(pop, [1.0] * 5)
    eq = fc.find_nash(market, [fc.StrategySpace.full(pop)] * 5)
    ref = fc.nash_symmetric(5, pop)
    assert eq.converged
    assert eq.offers[0].quality == pytest.approx(90 / 322, rel=1e-6)
    assert eq.offers[0].price == pytest.approx(ref.p_nash, rel=1e-6)


def test_simulation_agrees_with_model():
    pop = fc.ConsumerPopulation(1.0, 1.0)
    market = fc.Market([fc.Firm(fc.Offer(0.24, 0.4)), fc.Firm(fc.Offer(0.24, 0.4))], pop)
    exact = fc.per_consumer_profits(market)
    report = fc.simulate(market, 200_000, seed=3)
    for tally, x in zip(report.firms, exact):
        assert abs(tally.profit_estimate - x) < 4 * tally.standard_error
    assert report.total_units <= report.num_consumers


def test_small_firm_limit():
    pop = fc.ConsumerPopulation(2.0, 1.0)
    eq = fc.size_asymmetric_equilibrium(1e-4, pop, fc.SmallFirmMode.both)
    assert eq.offers[0].price == pytest.approx(1 / 3, rel=1e-3)


def test_errors():
    with pytest.raises(ValueError):
        fc.ConsumerPopulation(-1.0, 1.0)
    pop = fc.ConsumerPopulation(1.0, 1.0)
    with pytest.raises(fc.AllWeightsZero):
        fc.selection_probabilities(fc.Market([fc.Firm(fc.Offer(0.2, 1.0))], pop))
    assert math.isclose(fc.gaussian_acceptance_probability(fc.Offer(1.0, 1.0), 0.3), 0.5)
