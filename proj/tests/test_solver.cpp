#include <doctest.h>

#include <cmath>
#include <random>

#include "firmcomp/analytic.hpp"
#include "firmcomp/model.hpp"
#include "firmcomp/solver.hpp"

using namespace firmcomp;
using doctest::Approx;

namespace {

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(b), 1e-12); }

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("strategy spaces") {
    const ConsumerPopulation pop{1.0, 2.0};
    const auto full = solver::StrategySpace::full(pop, 0.8);
    CHECK(full.free_quality);
    CHECK(full.free_price);
    CHECK(full.quality.hi == Approx(2.5));
    CHECK(full.price.hi < 2.0);
    CHECK(full.price.lo > 0.0);
    CHECK_FALSE(solver::StrategySpace::fixed(pop).optimizing());
    CHECK(solver::StrategySpace::price_only(pop).free_price);
    CHECK_FALSE(solver::StrategySpace::price_only(pop).free_quality);

    auto bad = full;
    bad.price.hi = 3.0;
    CHECK_THROWS_AS(bad.validate(pop, 0.8), std::domain_error);
}

TEST_CASE("best response of a monopolist is the closed-form optimum") {
    const ConsumerPopulation pop{1.0, 2.0};
    const Market m{{Firm{{0.1, 1.5}}}, pop};
    const auto br = solver::best_response(0, m, solver::StrategySpace::full(pop));
    CHECK(br.offer.quality == Approx(0.5).epsilon(1e-7));
    CHECK(br.offer.price == Approx(1.0).epsilon(1e-7));
    CHECK(br.profit == Approx(0.125).epsilon(1e-12));
    CHECK(br.status == solver::ResponseStatus::optimal);
    CHECK_FALSE(br.clamped);
}

TEST_CASE("a vanishing firm against a monopolist plays the small-firm optimum") {
    const ConsumerPopulation pop{1.0, 1.0};
    const auto mono = analytic::monopolist_optimum(pop);
    const Market m{{Firm{mono.offer(), 1e-9}, Firm{mono.offer(), 1.0}}, pop};
    const auto br = solver::best_response(0, m, solver::StrategySpace::full(pop));
    CHECK(br.offer.quality == Approx(2.0 / 9.0).epsilon(1e-6));
    CHECK(br.offer.price == Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("price-only response matches a dense 1-D grid") {
    const ConsumerPopulation pop{2.0, 1.0};
    const auto mono = analytic::monopolist_optimum(pop);
    Market m{{Firm{mono.offer()}, Firm{mono.offer()}}, pop};
    const auto br = solver::best_response(1, m, solver::StrategySpace::price_only(pop));
    CHECK(br.offer.quality == mono.q_star);
    double best = -1;
    for (int k = 1; k < 100000; ++k) {
        m.firms[1].offer = {mono.q_star, k / 100000.0};
        best = std::max(best, model::per_consumer_profit(1, m));
    }
    CHECK(br.profit >= best - 1e-12);
    CHECK(br.profit <= best + 1e-8);
    CHECK(br.offer.price > mono.q_star);
    CHECK(br.offer.price < mono.p_star);
}

TEST_CASE("quality is irrelevant to quality-blind consumers, so the lower bound wins") {
    const ConsumerPopulation pop{0.0, 1.0};
    const Market m{{Firm{{0.2, 0.6}}, Firm{{0.1, 0.5}}}, pop};
    const auto br = solver::best_response(0, m, solver::StrategySpace::full(pop));
    CHECK(br.offer.quality == 0.0);
}

TEST_CASE("no profitable point is reported, not thrown") {
    const ConsumerPopulation pop{1.0, 1.0};
    Market m{{Firm{{0.5, 0.3}}, Firm{{0.2, 0.4}}}, pop};
    auto space = solver::StrategySpace::price_only(pop);
    space.price = {0.1, 0.2};
    const auto br = solver::best_response(0, m, space);
    CHECK(br.status == solver::ResponseStatus::no_profitable_point);
    CHECK(br.profit <= 0.0);
}

TEST_CASE("best response beats a 200 x 200 grid on random markets") {
    std::mt19937_64 rng{2024};
    std::uniform_real_distribution<double> u{0.0, 1.0};
    for (int trial = 0; trial < 100; ++trial) {
        const ConsumerPopulation pop{u(rng) * 8, 0.5 + u(rng)};
        const int n = 1 + trial % 4;
        std::vector<Firm> firms;
        for (int i = 0; i < n; ++i) {
            const double p = (0.1 + 0.8 * u(rng)) * pop.p_max;
            firms.emplace_back(Offer{p * (0.2 + 0.7 * u(rng)), p}, 0.2 + u(rng), 0.7 + 0.3 * u(rng));
        }
        Market m{firms, pop};
        const auto space = solver::StrategySpace::full(pop, firms[0].efficiency);
        const auto br = solver::best_response(0, m, space);
        double grid_best = -1e300;
        for (int a = 0; a < 200; ++a)
            for (int b = 0; b < 200; ++b) {
                const double q = space.quality.lo + (space.quality.hi - space.quality.lo) * a / 199.0;
                const double p = space.price.lo + (space.price.hi - space.price.lo) * b / 199.0;
                m.firms[0].offer = {q, p};
                try {
                    grid_best = std::max(grid_best, model::per_consumer_profit(0, m));
                } catch (const AllWeightsZero&) {
                    grid_best = std::max(grid_best, 0.0);
                }
            }
        INFO("trial " << trial);
        CHECK(grid_best <= br.profit + 1e-8);
    }
}

TEST_CASE("find_nash reproduces the closed-form equilibria") {
    for (int n : {2, 3, 5, 10}) {
        for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0, 10.0}) {
            const ConsumerPopulation pop{alpha, 1.0};
            const auto market = solver::market_at_monopolist(pop, std::vector<double>(n, 1.0));
            const auto eq = solver::find_nash(market, std::vector(n, solver::StrategySpace::full(pop)));
            const auto ref = analytic::nash_symmetric(n, pop);
            INFO("n = " << n << ", alpha = " << alpha);
            CHECK(eq.converged);
            CHECK(eq.residual < 1e-6);
            for (int i = 0; i < n; ++i) {
                CHECK(close(eq.offers[i].price, ref.p_nash, 1e-6));
                CHECK(close(eq.profits[i], ref.x_nash, 1e-6));
                if (alpha > 0) CHECK(close(eq.offers[i].quality, ref.q_nash, 1e-6));
                CHECK(close(eq.profit_ratios[i], ref.profit_ratio, 1e-6));
            }
        }
    }
}

TEST_CASE("five firms at alpha = 2") {
    const ConsumerPopulation pop{2.0, 1.0};
    const auto market = solver::market_at_monopolist(pop, std::vector<double>(5, 1.0));
    const auto eq = solver::find_nash(market, std::vector(5, solver::StrategySpace::full(pop)));
    CHECK(eq.offers[0].quality == Approx(90.0 / 322.0).epsilon(1e-6));
    CHECK(eq.offers[0].price == Approx(5.0 / 14.0).epsilon(1e-6));
}

TEST_CASE("a single firm reaches the monopolist optimum in one iteration") {
    const ConsumerPopulation pop{1.0, 2.0};
    const Market m{{Firm{{0.1, 0.3}}}, pop};
    const auto eq = solver::find_nash(m, {solver::StrategySpace::full(pop)});
    CHECK(eq.iterations <= 2);
    CHECK(eq.converged);
    CHECK(eq.offers[0].quality == Approx(0.5).epsilon(1e-7));
    CHECK(eq.offers[0].price == Approx(1.0).epsilon(1e-7));
}

TEST_CASE("unilateral deviations do not pay at an equilibrium") {
    const ConsumerPopulation pop{1.5, 1.0};
    const auto market = solver::market_at_monopolist(pop, {0.3, 0.7}, {0.9, 1.0});
    const std::vector spaces{solver::StrategySpace::full(pop, 0.9), solver::StrategySpace::full(pop, 1.0)};
    const auto eq = solver::find_nash(market, spaces);
    REQUIRE(eq.converged);
    const double d = 1e-4 * pop.p_max;
    for (std::size_t i = 0; i < 2; ++i) {
        for (auto [dq, dp] : {std::pair{d, 0.0}, {-d, 0.0}, {0.0, d}, {0.0, -d}}) {
            auto m = eq.market;
            m.firms[i].offer = {m.firms[i].offer.quality + dq, m.firms[i].offer.price + dp};
            CHECK(model::per_consumer_profit(i, m) <= eq.profits[i] + 1e-9);
        }
    }
}

TEST_CASE("identical firms receive identical offers") {
    const ConsumerPopulation pop{3.0, 1.0};
    const auto market = solver::market_at_monopolist(pop, {1.0, 1.0, 1.0});
    const auto eq = solver::find_nash(market, std::vector(3, solver::StrategySpace::full(pop)));
    for (int i = 1; i < 3; ++i) {
        CHECK(eq.offers[i].quality == Approx(eq.offers[0].quality).epsilon(1e-8));
        CHECK(eq.offers[i].price == Approx(eq.offers[0].price).epsilon(1e-8));
    }
}

TEST_CASE("non-convergence is reported through the result") {
    const ConsumerPopulation pop{2.0, 1.0};
    const auto market = solver::market_at_monopolist(pop, {1.0, 1.0});
    solver::NashOptions options;
    options.max_iterations = 2;
    const auto eq = solver::find_nash(market, std::vector(2, solver::StrategySpace::full(pop)), options);
    CHECK_FALSE(eq.converged);
    CHECK(eq.iterations == 2);
}

TEST_CASE("bad arguments are rejected") {
    const ConsumerPopulation pop{2.0, 1.0};
    const auto market = solver::market_at_monopolist(pop, {1.0, 1.0});
    CHECK_THROWS_AS(solver::find_nash(market, {solver::StrategySpace::full(pop)}), std::invalid_argument);
    solver::NashOptions options;
    options.damping = 0.0;
    CHECK_THROWS_AS(solver::find_nash(market, std::vector(2, solver::StrategySpace::full(pop)), options),
                    std::domain_error);
}

}
