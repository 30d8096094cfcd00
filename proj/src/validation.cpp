#include "firmcomp/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "firmcomp/analytic.hpp"
#include "firmcomp/model.hpp"
#include "firmcomp/montecarlo.hpp"
#include "firmcomp/scenarios.hpp"
#include "firmcomp/solver.hpp"

namespace firmcomp::validation {

namespace {

using Clock = std::chrono::steady_clock;

CheckResult timed(std::string name, const std::function<bool(std::ostringstream&)>& body) {
    CheckResult r;
    r.name = std::move(name);
    std::ostringstream detail;
    detail.precision(6);
    const auto start = Clock::now();
    try {
        r.passed = body(detail);
    } catch (const std::exception& e) {
        r.passed = false;
        detail << " exception: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    r.detail = detail.str();
    return r;
}

double relative_error(double value, double reference, double scale) {
    if (reference == 0.0) return std::abs(value) / scale;
    return std::abs(value - reference) / std::abs(reference);
}

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> out;
    const auto count = static_cast<int>(std::llround((hi - lo) / step));
    for (int k = 0; k <= count; ++k) out.push_back(lo + k * step);
    return out;
}

}  // namespace

CheckResult check_nash_closed_form() {
    return timed("closed-form vs numeric Nash", [](std::ostringstream& out) {
        const auto start = Clock::now();
        double worst = 0.0;
        bool all_converged = true;
        for (int n : {2, 3, 5, 10}) {
            for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0, 10.0}) {
                const ConsumerPopulation pop{alpha, 1.0};
                const auto market = solver::market_at_monopolist(pop, std::vector<double>(n, 1.0));
                const auto eq = solver::find_nash(market, std::vector(n, solver::StrategySpace::full(pop)));
                const auto ref = analytic::nash_symmetric(n, pop);
                all_converged = all_converged && eq.converged;
                for (int i = 0; i < n; ++i) {
                    worst = std::max({worst, relative_error(eq.offers[i].quality, ref.q_nash, pop.p_max),
                                      relative_error(eq.offers[i].price, ref.p_nash, pop.p_max),
                                      relative_error(eq.profits[i], ref.x_nash, pop.p_max)});
                }
            }
        }
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        out << "max relative error " << worst << " (tol 1e-06), " << seconds << " s (limit 60 s)";
        return all_converged && worst < 1e-6 && seconds < 60.0;
    });
}

CheckResult check_monopolist_grid() {
    return timed("monopolist grid oracle and corrected X1*", [](std::ostringstream& out) {
        bool ok = true;
        const double step = 1e-3;
        for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
            const ConsumerPopulation pop{alpha, 1.0};
            double best = -1.0, best_q = 0.0, best_p = 0.0;
            for (int k = 0; k <= 1000; ++k) {
                for (int j = 1; j < 1000; ++j) {
                    const double q = k * step, p = j * step;
                    const double x = (1 - p) * std::pow(q / p, alpha) * (p - q);
                    if (x > best) {
                        best = x;
                        best_q = q;
                        best_p = p;
                    }
                }
            }
            const auto opt = analytic::monopolist_optimum(pop);
            const double attained = model::monopolist_profit(opt.offer(), pop);
            const bool here = std::abs(best_q - opt.q_star) <= step && std::abs(best_p - opt.p_star) <= step &&
                              best <= opt.x_star + 1e-12 && opt.x_star - best <= 1e-5 &&
                              std::abs(attained - opt.x_star) <= 1e-15 * opt.x_star;
            const double printed = pop.p_max / (4 * alpha) * std::pow(alpha / (alpha + 1), alpha);
            out << "a=" << alpha << ": grid (" << best_q << "," << best_p << ") max " << best << " vs X1* " << opt.x_star
                << " (uncorrected form " << printed << "); ";
            ok = ok && here;
        }
        double worst = 0.0;
        for (double alpha : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0, 100.0}) {
            const ConsumerPopulation pop{alpha, 1.0};
            const double xi = analytic::nash_symmetric(2, pop).x_nash / (analytic::monopolist_optimum(pop).x_star / 2);
            const double two_firm = 16.0 / 25.0 * std::pow((3 + 3 * alpha) / (2 + 3 * alpha), 1 + alpha);
            worst = std::max(worst, std::abs(xi - two_firm));
        }
        out << "xi2 max deviation " << worst << " (tol 1e-12)";
        return ok && worst <= 1e-12;
    });
}

CheckResult check_profit_ratio_limits() {
    return timed("profit-ratio limits", [](std::ostringstream& out) {
        const double two = analytic::profit_ratio(2, 1e4);
        const double many = analytic::profit_ratio(1000000, 1e4);
        const double two_ref = 16.0 * std::cbrt(std::numbers::e) / 25.0;
        const double many_ref = 4.0 * std::sqrt(std::numbers::e) / 9.0;
        out << "xi_2(1e4)=" << two << " vs " << two_ref << ", xi_1e6(1e4)=" << many << " vs " << many_ref;
        return std::abs(two - two_ref) <= 1e-3 && std::abs(many - many_ref) <= 1e-3;
    });
}

CheckResult check_quality_ratio_threshold() {
    return timed("quality-ratio threshold", [](std::ostringstream& out) {
        bool ok = true;
        for (int n : {2, 3, 5, 10}) {
            // bisection on rho_n(alpha) - 1, independent of the closed-form threshold
            double lo = 0.0, hi = 10.0;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                (analytic::quality_ratio(n, mid) > 1.0 ? lo : hi) = mid;
            }
            const double root = 0.5 * (lo + hi);
            const double expected = static_cast<double>(n) / (2 * n - 1);
            const bool signs = analytic::quality_ratio(n, expected - 1e-9) > 1.0 &&
                               analytic::quality_ratio(n, expected + 1e-9) < 1.0;
            out << "n=" << n << ": root " << root << " vs " << expected << "; ";
            ok = ok && signs && std::abs(root - expected) <= 1e-9 &&
                 std::abs(analytic::quality_ratio_threshold(n) - expected) <= 1e-15;
        }
        return ok;
    });
}

CheckResult check_small_firm_thresholds() {
    return timed("small-firm thresholds", [](std::ostringstream& out) {
        bool ok = true;
        for (auto [alpha, expected] : {std::pair{0.0, 0.30}, std::pair{2.0, 0.279}, std::pair{4.0, 0.275}}) {
            const auto lambda = solver::small_firm_threshold({alpha, 1.0}, solver::SmallFirmMode::both);
            if (!lambda) {
                out << "a=" << alpha << ": no crossing; ";
                ok = false;
                continue;
            }
            out << "a=" << alpha << ": " << *lambda << " vs " << expected << "; ";
            ok = ok && std::abs(*lambda - expected) <= 0.005;
        }
        return ok;
    });
}

CheckResult check_small_firm_limit() {
    return timed("small-firm limit", [](std::ostringstream& out) {
        bool ok = true;
        for (double alpha : {0.0, 0.5, 2.0}) {
            const ConsumerPopulation pop{alpha, 1.0};
            const auto eq = solver::size_asymmetric_equilibrium(1e-4, pop, solver::SmallFirmMode::both);
            const auto ref = analytic::small_firm_optimum(pop);
            const double dq = relative_error(eq.offers[0].quality, ref.q_s, pop.p_max);
            const double dp = relative_error(eq.offers[0].price, ref.p_s, pop.p_max);
            const double dxi = relative_error(eq.profit_ratios[0], ref.xi_s, 1.0);
            out << "a=" << alpha << ": dQ " << dq << " dp " << dp << " dxi " << dxi << "; ";
            ok = ok && eq.converged && dq <= 1e-3 && dp <= 1e-3 && dxi <= 1e-3;
        }
        return ok;
    });
}

CheckResult check_farsighted_optimum() {
    return timed("farsighted optimum", [](std::ostringstream& out) {
        const auto sweep = solver::farsighted_sweep({2.0, 1.0}, grid(0.0, 1.5, 0.005));
        const auto at_star = std::find_if(sweep.rows.begin(), sweep.rows.end(),
                                          [&](const auto& r) { return r.tau == sweep.tau_star; });
        out << "tau*=" << sweep.tau_star << " (refined " << sweep.tau_star_refined << "), xi*=" << at_star->xi_farsighted
            << " vs xi_Nash=" << sweep.xi_nash << ", vs-Nash peak " << sweep.tau_star_vs_nash;
        return std::abs(sweep.tau_star - 0.92) <= 0.01 && std::abs(sweep.tau_star_refined - 0.92) <= 0.01 &&
               at_star->xi_farsighted > sweep.xi_nash && std::abs(sweep.tau_star_vs_nash - 1.0) <= 0.005;
    });
}

CheckResult check_strategy_ordering() {
    return timed("response-strategy ordering", [](std::ostringstream& out) {
        const auto rows = solver::scenario_price_competition({1.0, 1.0}, grid(0.0, 10.0, 0.1));
        constexpr double slack = 1e-9;
        int violations = 0;
        double worst_gap = 0.0;
        bool converged = true;
        std::ostringstream listed;
        listed.precision(3);
        for (const auto& r : rows) {
            converged = converged && r.converged;
            if (!(r.both >= r.price_only - slack && r.price_only >= r.quality_only - slack &&
                  r.quality_only >= r.do_nothing - slack)) {
                ++violations;
                listed << " a=" << r.alpha << " (both-price " << r.both - r.price_only << ", price-quality "
                       << r.price_only - r.quality_only << ", quality-nothing " << r.quality_only - r.do_nothing << ")";
            }
            if (r.alpha <= 1.0 + 1e-12) worst_gap = std::max(worst_gap, (r.both - r.price_only) / r.both);
        }
        out << rows.size() << " alphas, " << violations << " ordering violations, max price-only gap for a<=1 "
            << worst_gap << " (limit 0.02)";
        if (violations > 0) out << "; violations at" << listed.str();
        return converged && violations == 0 && worst_gap < 0.02;
    });
}

CheckResult check_monte_carlo() {
    return timed("Monte Carlo oracle", [](std::ostringstream& out) {
        std::mt19937_64 rng{20130517};
        std::uniform_real_distribution<double> u{0.0, 1.0};
        bool ok = true;
        double worst_z = 0.0;
        double worst_shrink = 10.0;
        for (int m = 0; m < 10; ++m) {
            const ConsumerPopulation pop{5.0 * u(rng), 0.5 + 1.5 * u(rng)};
            const int n = 1 + static_cast<int>(4 * u(rng));
            std::vector<Firm> firms;
            for (int i = 0; i < n; ++i) {
                const double p = (0.2 + 0.6 * u(rng)) * pop.p_max;
                const double q = (0.3 + 0.65 * u(rng)) * p;
                firms.emplace_back(Offer{q, p}, 0.2 + 0.8 * u(rng), 0.7 + 0.3 * u(rng));
            }
            const Market market{firms, pop};
            const auto analytic_profit = model::per_consumer_profits(market);
            const auto big = montecarlo::simulate({market, 1000000, 7000ULL + m});
            const auto small = montecarlo::simulate({market, 10000, 9000ULL + m});
            for (int i = 0; i < n; ++i) {
                const auto& t = big.firms[i];
                const double z = std::abs(t.profit_estimate - analytic_profit[i]) / t.standard_error;
                worst_z = std::max(worst_z, z);
                const double shrink = small.firms[i].standard_error / t.standard_error;
                if (std::abs(shrink - 10.0) > std::abs(worst_shrink - 10.0)) worst_shrink = shrink;
                ok = ok && t.standard_error > 0 && z <= 4.0 && shrink >= 8.0 && shrink <= 12.0;
            }
            ok = ok && big.total_units() <= big.num_consumers;
        }
        out << "max |estimate - analytic| / SE = " << worst_z << " (limit 4), SE ratio 1e4->1e6 furthest from 10: "
            << worst_shrink;
        return ok;
    });
}

CheckResult check_efficiency() {
    return timed("efficiency scenario", [](std::ostringstream& out) {
        bool ok = true;
        for (double alpha : {1.0, 2.0, 4.0}) {
            const ConsumerPopulation pop{alpha, 1.0};
            const auto nash = analytic::nash_symmetric(2, pop);
            std::vector<solver::EquilibriumResult> sweep;
            for (int k = 100; k >= 60; --k) sweep.push_back(solver::efficiency_equilibrium(k / 100.0, pop));
            const auto& base = sweep.front();
            double symmetric_error = 0.0;
            for (const auto& o : base.offers)
                symmetric_error = std::max({symmetric_error, std::abs(o.quality - nash.q_nash), std::abs(o.price - nash.p_nash)});
            int monotone_breaks = 0, asymmetry_breaks = 0;
            bool converged = true;
            for (std::size_t k = 1; k < sweep.size(); ++k) {
                const auto& prev = sweep[k - 1];
                const auto& cur = sweep[k];
                converged = converged && cur.converged;
                if (!(cur.profits[0] > prev.profits[0])) ++monotone_breaks;
                if (!(cur.profits[0] + cur.profits[1] > prev.profits[0] + prev.profits[1])) ++monotone_breaks;
                const double gain = cur.profits[0] - base.profits[0];
                const double loss = base.profits[1] - cur.profits[1];
                if (!(gain > loss)) ++asymmetry_breaks;
            }
            out << "a=" << alpha << ": eta=1 offset " << symmetric_error << ", monotonicity breaks " << monotone_breaks
                << ", gain<=loss " << asymmetry_breaks << "; ";
            ok = ok && base.converged && converged && symmetric_error <= 1e-8 && monotone_breaks == 0 &&
                 asymmetry_breaks == 0;
        }
        return ok;
    });
}

CheckResult check_gaussian_acceptance() {
    return timed("Gaussian acceptance", [](std::ostringstream& out) {
        bool ok = true;
        for (double v : {1e-3, 0.5, 1.0, 7.0})
            for (double sigma : {0.01, 0.3, 2.0}) ok = ok && model::gaussian_acceptance_probability({v, v}, sigma) == 0.5;
        std::mt19937_64 rng{42};
        std::uniform_real_distribution<double> u{0.0, 1.0};
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const double q = 0.01 + 2 * u(rng), p = 0.01 + 2 * u(rng), sigma = 0.01 + u(rng);
            worst = std::max(worst, std::abs(model::gaussian_acceptance_probability({q, p}, sigma) +
                                             model::gaussian_acceptance_probability({p, q}, sigma) - 1.0));
        }
        out << "P(Q=p)==0.5: " << (ok ? "yes" : "no") << ", max reflection deviation " << worst << " (tol 1e-12)";
        return ok && worst <= 1e-12;
    });
}

std::vector<CheckResult> run_acceptance_suite() {
    return {check_nash_closed_form(),      check_monopolist_grid(),      check_profit_ratio_limits(),
            check_quality_ratio_threshold(), check_small_firm_thresholds(), check_small_firm_limit(),
            check_farsighted_optimum(),    check_strategy_ordering(),    check_monte_carlo(),
            check_efficiency(),            check_gaussian_acceptance()};
}

CheckResult check_scale_invariance() {
    return timed("scale invariance", [](std::ostringstream& out) {
        double worst_ratio = 0.0, worst_level = 0.0;
        auto solve = [](double p_max) {
            const ConsumerPopulation pop{1.5, p_max};
            return solver::size_asymmetric_equilibrium(0.3, pop, solver::SmallFirmMode::both);
        };
        const auto unit = solve(1.0);
        for (double c : {0.5, 2.0, 3.0}) {
            const auto scaled = solve(c);
            for (std::size_t i = 0; i < 2; ++i) {
                worst_level = std::max({worst_level, relative_error(scaled.offers[i].quality / c, unit.offers[i].quality, 1),
                                        relative_error(scaled.offers[i].price / c, unit.offers[i].price, 1),
                                        relative_error(scaled.profits[i] / c, unit.profits[i], 1)});
                worst_ratio = std::max(worst_ratio, std::abs(scaled.profit_ratios[i] - unit.profit_ratios[i]));
            }
        }
        out << "max relative level deviation " << worst_level << ", max ratio deviation " << worst_ratio << " (tol 1e-10)";
        return worst_level <= 1e-10 && worst_ratio <= 1e-10;
    });
}

CheckResult check_label_invariance() {
    return timed("label invariance", [](std::ostringstream& out) {
        const ConsumerPopulation pop{2.0, 1.5};
        const std::vector<Firm> firms{Firm{{0.3, 0.6}, 0.5, 0.9}, Firm{{0.4, 0.7}, 1.0, 1.0}, Firm{{0.2, 0.5}, 2.0, 0.8}};
        const std::vector<std::size_t> perm{2, 0, 1};
        std::vector<Firm> permuted;
        for (auto k : perm) permuted.push_back(firms[k]);
        const auto a = model::per_consumer_profits({firms, pop});
        const auto b = model::per_consumer_profits({permuted, pop});
        const auto sa = model::selection_probabilities({firms, pop});
        const auto sb = model::selection_probabilities({permuted, pop});
        double worst = 0.0;
        for (std::size_t k = 0; k < perm.size(); ++k)
            worst = std::max({worst, std::abs(b[k] - a[perm[k]]), std::abs(sb[k] - sa[perm[k]])});
        out << "max deviation " << worst;
        return worst <= 1e-15;
    });
}

CheckResult check_nash_perturbation() {
    return timed("unilateral perturbations", [](std::ostringstream& out) {
        std::vector<std::pair<solver::EquilibriumResult, std::vector<solver::StrategySpace>>> cases;
        {
            const ConsumerPopulation pop{1.0, 1.0};
            auto eq = solver::find_nash(solver::market_at_monopolist(pop, {1, 1, 1}),
                                        std::vector(3, solver::StrategySpace::full(pop)));
            cases.emplace_back(eq, std::vector(3, solver::StrategySpace::full(pop)));
        }
        {
            const ConsumerPopulation pop{2.0, 1.0};
            cases.emplace_back(solver::size_asymmetric_equilibrium(0.2, pop, solver::SmallFirmMode::both),
                               std::vector(2, solver::StrategySpace::full(pop)));
            cases.emplace_back(solver::efficiency_equilibrium(0.8, pop),
                               std::vector{solver::StrategySpace::full(pop, 0.8), solver::StrategySpace::full(pop)});
        }
        double worst = -INFINITY;
        for (const auto& [eq, spaces] : cases) {
            const double h = 1e-4 * eq.market.population.p_max;
            for (std::size_t i = 0; i < eq.market.size(); ++i) {
                for (int var = 0; var < 2; ++var) {
                    for (double sign : {-1.0, 1.0}) {
                        auto market = eq.market;
                        auto& o = market.firms[i].offer;
                        (var == 0 ? o.quality : o.price) += sign * h;
                        const auto& bounds = var == 0 ? spaces[i].quality : spaces[i].price;
                        const double v = var == 0 ? o.quality : o.price;
                        if (v < bounds.lo || v > bounds.hi) continue;
                        worst = std::max(worst, model::per_consumer_profit(i, market) - eq.profits[i]);
                    }
                }
            }
        }
        out << "largest profit gain from a 1e-4 p_max deviation: " << worst << " (tol 1e-9)";
        return worst <= 1e-9;
    });
}

CheckResult check_simulation_determinism() {
    return timed("simulation determinism", [](std::ostringstream& out) {
        const ConsumerPopulation pop{1.0, 1.0};
        const Market market{{Firm{{0.24, 0.4}}, Firm{{0.2, 0.45}, 0.5}}, pop};
        const auto a = montecarlo::simulate({market, 200000, 99, 1 << 16});
        const auto b = montecarlo::simulate({market, 200000, 99, 1 << 16});
        const auto c = montecarlo::simulate({market, 200000, 99, 777});
        bool same = true;
        for (std::size_t i = 0; i < market.size(); ++i)
            same = same && a.firms[i].units_sold == b.firms[i].units_sold &&
                   a.firms[i].units_sold == c.firms[i].units_sold &&
                   a.firms[i].profit_estimate == c.firms[i].profit_estimate;
        out << (same ? "identical" : "different") << " tallies across repeats and block sizes";
        return same;
    });
}

CheckResult check_entrant() {
    return timed("entrant against a Nash duopoly", [](std::ostringstream& out) {
        bool ok = true;
        for (double alpha : {0.0, 1.0, 2.0, 4.0}) {
            const ConsumerPopulation pop{alpha, 1.0};
            const auto entrant = solver::entrant_vs_duopoly(1e-3, pop);
            const auto versus_monopolist = solver::size_asymmetric_equilibrium(1e-3, pop, solver::SmallFirmMode::both);
            const double xi = entrant.profit_ratios[0];
            const double xi_s = versus_monopolist.profit_ratios[0];
            out << "a=" << alpha << ": xi_entrant " << xi << " < xi_s " << xi_s << "; ";
            ok = ok && xi > 1.0 && xi < xi_s && entrant.offers[0].price < analytic::nash_symmetric(2, pop).p_nash;
        }
        return ok;
    });
}

std::vector<CheckResult> run_invariant_suite() {
    return {check_scale_invariance(), check_label_invariance(), check_nash_perturbation(),
            check_simulation_determinism(), check_entrant()};
}

std::string format(const CheckResult& result) {
    std::ostringstream s;
    s.precision(3);
    s << (result.passed ? "PASS " : "FAIL ") << result.name << ": " << result.detail << " [" << std::fixed
      << result.seconds << " s]";
    return s.str();
}

}  // namespace firmcomp::validation
