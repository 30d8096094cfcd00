#include <doctest.h>

#include <cmath>
#include <numbers>

#include "firmcomp/analytic.hpp"
#include "firmcomp/model.hpp"

using namespace firmcomp;
using doctest::Approx;

namespace {

double nash_profit(const Offer& own, const Offer& other, int n, const ConsumerPopulation& pop) {
    std::vector<Firm> firms(n, Firm{other});
    firms[0] = Firm{own};
    return model::per_consumer_profit(0, Market{firms, pop});
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("monopolist optimum examples") {
    const auto a = analytic::monopolist_optimum({1.0, 2.0});
    CHECK(a.q_star == Approx(0.5));
    CHECK(a.p_star == Approx(1.0));
    CHECK(a.x_star == Approx(0.125));

    const auto blind = analytic::monopolist_optimum({0.0, 1.0});
    CHECK(blind.q_star == 0.0);
    CHECK(blind.p_star == Approx(0.5));
    CHECK(blind.x_star == Approx(0.25));

    const auto expert = analytic::monopolist_optimum({1e6, 1.0});
    CHECK(expert.q_star == Approx(0.5).epsilon(1e-5));
    CHECK(expert.p_star - expert.q_star < 1e-5);
}

TEST_CASE("monopolist profit equals the profit of the optimal offer") {
    for (double alpha = 0.0; alpha <= 10.0; alpha += 0.25) {
        const ConsumerPopulation pop{alpha, 1.3};
        const auto m = analytic::monopolist_optimum(pop);
        CHECK(m.x_star == Approx(model::monopolist_profit(m.offer(), pop)).epsilon(1e-14));
        CHECK(m.x_star == Approx(pop.p_max / (4 * (alpha + 1)) * std::pow(alpha / (alpha + 1), alpha)).epsilon(1e-14));
    }
}

TEST_CASE("two-firm Nash examples") {
    const auto eq = analytic::nash_symmetric(2, {1.0, 1.0});
    CHECK(eq.q_nash == Approx(0.24));
    CHECK(eq.p_nash == Approx(0.4));
    CHECK(eq.marginal == Approx(0.16));
    CHECK(eq.x_nash == Approx(0.0288));
    CHECK(analytic::quality_ratio(2, 0.0) == Approx(1.2));
    CHECK(analytic::quality_ratio(2, 2.0 / 3.0) == Approx(1.0).epsilon(1e-14));
    CHECK(analytic::quality_ratio(2, 1.0) == Approx(0.96));
    CHECK(analytic::profit_ratio(2, 0.0) == Approx(0.96));
    CHECK_THROWS_AS(analytic::nash_symmetric(1, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("five-firm Nash") {
    const auto eq = analytic::nash_symmetric(5, {2.0, 1.0});
    CHECK(eq.q_nash == Approx(90.0 / 322.0).epsilon(1e-14));
    CHECK(eq.p_nash == Approx(5.0 / 14.0).epsilon(1e-14));
}

TEST_CASE("many-firm limits") {
    const ConsumerPopulation pop{1.0, 1.0};
    CHECK(analytic::nash_quality_many_firms(pop) == Approx(2.0 / 9.0));
    CHECK(analytic::marginal_profit_many_firms(pop) == Approx(1.0 / 9.0));
    CHECK(analytic::marginal_profit_nash(100000, pop) == Approx(1.0 / 9.0).epsilon(1e-4));
    CHECK(analytic::nash_symmetric(100000, pop).q_nash == Approx(2.0 / 9.0).epsilon(1e-4));
    CHECK(analytic::quality_ratio_threshold(1000000) == Approx(0.5).epsilon(1e-6));
    CHECK(analytic::marginal_profit_nash(2, {1e6, 1.0}) < 1e-5);
    CHECK(analytic::profit_ratio_experienced_limit(2) == Approx(16 * std::cbrt(std::numbers::e) / 25).epsilon(1e-14));
    CHECK(analytic::profit_ratio_double_limit() == Approx(4 * std::sqrt(std::numbers::e) / 9).epsilon(1e-14));
    CHECK(std::abs(analytic::profit_ratio(2, 1e4) - 0.893197) < 1e-3);
    CHECK(std::abs(analytic::profit_ratio(1000000, 1e4) - 0.732774) < 1e-3);
}

TEST_CASE("quality ratio crosses one at n / (2n - 1)") {
    for (int n : {2, 3, 5, 10}) {
        const double t = analytic::quality_ratio_threshold(n);
        CHECK(t == Approx(double(n) / (2 * n - 1)));
        CHECK(analytic::quality_ratio(n, t - 1e-9) > 1.0);
        CHECK(analytic::quality_ratio(n, t + 1e-9) < 1.0);
    }
}

TEST_CASE("Nash offers are stationary points of the n-firm profit") {
    const double h = 1e-6;
    for (int n : {2, 3, 5, 10}) {
        for (int k = 0; k <= 100; ++k) {
            const ConsumerPopulation pop{k / 10.0, 1.0};
            const auto eq = analytic::nash_symmetric(n, pop);
            const auto at = eq.offer();
            const double scale = pop.p_max / eq.x_nash;
            const double dq = (nash_profit({at.quality + h, at.price}, at, n, pop) -
                               nash_profit({std::max(at.quality - h, 0.0), at.price}, at, n, pop)) /
                              (at.quality + h - std::max(at.quality - h, 0.0));
            const double dp = (nash_profit({at.quality, at.price + h}, at, n, pop) -
                               nash_profit({at.quality, at.price - h}, at, n, pop)) / (2 * h);
            INFO("n = " << n << ", alpha = " << pop.alpha);
            if (pop.alpha > 0) CHECK(std::abs(dq) * scale < 1e-6);
            CHECK(std::abs(dp) * scale < 1e-6);
            CHECK(0 <= eq.q_nash);
            CHECK(eq.q_nash < eq.p_nash);
            CHECK(eq.p_nash < pop.p_max);
            CHECK(eq.x_nash == Approx(nash_profit(at, at, n, pop)).epsilon(1e-13));
        }
    }
}

TEST_CASE("profit ratio decreases in alpha and in n") {
    for (int k = 0; k < 100; ++k) {
        const double a = k / 10.0;
        for (int n : {2, 3, 5}) {
            CHECK(analytic::profit_ratio(n, a + 0.1) < analytic::profit_ratio(n, a));
        }
        CHECK(analytic::profit_ratio(3, a) < analytic::profit_ratio(2, a));
        CHECK(analytic::profit_ratio(5, a) < analytic::profit_ratio(3, a));
        CHECK(analytic::profit_ratio(10, a) < analytic::profit_ratio(5, a));
    }
}

TEST_CASE("two-firm profit ratio closed form") {
    for (int k = 0; k <= 100; ++k) {
        const double a = k / 10.0;
        const double printed = 16.0 / 25.0 * std::pow((3 + 3 * a) / (2 + 3 * a), 1 + a);
        CHECK(analytic::profit_ratio(2, a) == Approx(printed).epsilon(1e-13));
    }
}

TEST_CASE("closed forms are homogeneous in p_max") {
    for (double alpha : {0.0, 0.7, 3.0}) {
        const ConsumerPopulation one{alpha, 1.0}, two{alpha, 2.0};
        const auto m1 = analytic::monopolist_optimum(one), m2 = analytic::monopolist_optimum(two);
        CHECK(m2.q_star == Approx(2 * m1.q_star));
        CHECK(m2.p_star == Approx(2 * m1.p_star));
        CHECK(m2.x_star == Approx(2 * m1.x_star));
        const auto n1 = analytic::nash_symmetric(3, one), n2 = analytic::nash_symmetric(3, two);
        CHECK(n2.q_nash == Approx(2 * n1.q_nash));
        CHECK(n2.p_nash == Approx(2 * n1.p_nash));
        CHECK(n2.x_nash == Approx(2 * n1.x_nash));
        CHECK(n2.profit_ratio == Approx(n1.profit_ratio));
    }
}

TEST_CASE("small-firm optimum examples") {
    const auto blind = analytic::small_firm_optimum({0.0, 1.0});
    CHECK(blind.beta == 1.0);
    CHECK(blind.xi_s == Approx(32.0 / 27.0));
    const auto half = analytic::small_firm_optimum({0.5, 1.0});
    CHECK(half.q_s == Approx(1.0 / 6.0));
    const auto one = analytic::small_firm_optimum({1.0, 1.0});
    CHECK(one.q_s == Approx(2.0 / 9.0));
    for (double alpha : {0.0, 0.3, 2.0, 8.0}) {
        const auto s = analytic::small_firm_optimum({alpha, 1.5});
        CHECK(s.p_s == Approx(0.5));
        CHECK(s.xi_s > 1.0);
    }
}

TEST_CASE("small-firm optimum beats a grid over the small-firm objective") {
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const ConsumerPopulation pop{alpha, 1.0};
        const auto mono = analytic::monopolist_optimum(pop);
        const double w_mono = model::acceptance_weight(mono.offer(), pop);
        auto objective = [&](double q, double p) {
            const Offer o{q, p};
            return model::acceptance_weight(o, pop) / w_mono * model::acceptance_probability(o, pop) * (p - q);
        };
        const auto s = analytic::small_firm_optimum(pop);
        const double best = objective(s.q_s, s.p_s);
        double grid_best = 0, gq = 0, gp = 0;
        for (int i = 0; i <= 500; ++i)
            for (int j = 1; j < 500; ++j) {
                const double q = i / 500.0, p = j / 500.0;
                if (const double v = objective(q, p); v > grid_best) {
                    grid_best = v;
                    gq = q;
                    gp = p;
                }
            }
        INFO("alpha = " << alpha);
        CHECK(grid_best <= best * (1 + 1e-12));
        CHECK(grid_best >= best * (1 - 1e-3));
        CHECK(std::abs(gp - s.p_s) <= 1e-2);
        if (alpha > 0) CHECK(std::abs(gq - s.q_s) <= 1e-2);
        CHECK(s.xi_s == Approx(best / mono.x_star).epsilon(1e-12));
    }
}

TEST_CASE("farsighted offer interpolates between monopolist and Nash") {
    const ConsumerPopulation pop{1.0, 1.0};
    CHECK(analytic::farsighted_offer(0.0, pop).quality == Approx(0.25));
    CHECK(analytic::farsighted_offer(0.0, pop).price == Approx(0.5));
    CHECK(analytic::farsighted_offer(1.0, pop).quality == Approx(0.24));
    CHECK(analytic::farsighted_offer(1.0, pop).price == Approx(0.4));
    CHECK(analytic::farsighted_offer(0.5, pop).quality == Approx(0.245));
    CHECK(analytic::farsighted_offer(0.5, pop).price == Approx(0.45));
}

}
