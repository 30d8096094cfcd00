#include "firmcomp/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "firmcomp/analytic.hpp"
#include "firmcomp/model.hpp"
#include "firmcomp/optimize.hpp"

namespace firmcomp::solver {

PriceCompetitionRow price_competition_point(const ConsumerPopulation& pop, const NashOptions& options) {
    const auto mono = analytic::monopolist_optimum(pop);
    const auto market = market_at_monopolist(pop, {1.0, 1.0});
    const auto firm1 = StrategySpace::price_only(pop);
    const double baseline = mono.x_star / 2;

    PriceCompetitionRow row{pop.alpha, 0, 0, 0, 0, true};
    auto solve = [&](const StrategySpace& response) {
        const auto eq = find_nash(market, {firm1, response}, options);
        row.converged = row.converged && eq.converged;
        return eq.profits[1] / baseline;
    };
    row.do_nothing = solve(StrategySpace::fixed(pop));
    row.quality_only = solve(StrategySpace::quality_only(pop));
    row.price_only = solve(StrategySpace::price_only(pop));
    row.both = solve(StrategySpace::full(pop));
    return row;
}

std::vector<PriceCompetitionRow> scenario_price_competition(const ConsumerPopulation& pop,
                                                            const std::vector<double>& alpha_grid,
                                                            const NashOptions& options) {
    return parallel_map<PriceCompetitionRow>(alpha_grid.size(), [&](std::size_t k) {
        return price_competition_point(ConsumerPopulation{alpha_grid[k], pop.p_max}, options);
    });
}

FarsightedRow farsighted_point(double tau, const ConsumerPopulation& pop) {
    const auto mono = analytic::monopolist_optimum(pop);
    const auto nash = analytic::nash_symmetric(2, pop);
    const auto committed = analytic::farsighted_offer(tau, pop);
    const double baseline = mono.x_star / 2;

    Market market{{Firm{mono.offer()}, Firm{committed}}, pop};
    const auto reply = best_response(0, market, StrategySpace::full(pop));
    market.firms[0].offer = reply.offer;
    const auto profits = model::per_consumer_profits(market);

    const Market against_nash{{Firm{nash.offer()}, Firm{committed}}, pop};
    return {tau, profits[1] / baseline, profits[0] / baseline, model::per_consumer_profit(1, against_nash) / baseline};
}

FarsightedSweep farsighted_sweep(const ConsumerPopulation& pop, const std::vector<double>& tau_grid) {
    if (tau_grid.empty()) throw std::invalid_argument("farsighted_sweep: empty tau grid");
    FarsightedSweep sweep;
    sweep.rows = parallel_map<FarsightedRow>(tau_grid.size(), [&](std::size_t k) { return farsighted_point(tau_grid[k], pop); });
    sweep.xi_nash = analytic::profit_ratio(2, pop.alpha);

    auto argmax = [&](auto member) {
        return static_cast<std::size_t>(std::max_element(sweep.rows.begin(), sweep.rows.end(),
                                                         [&](const auto& a, const auto& b) { return a.*member < b.*member; }) -
                                        sweep.rows.begin());
    };
    const auto best = argmax(&FarsightedRow::xi_farsighted);
    sweep.tau_star = sweep.rows[best].tau;
    sweep.tau_star_vs_nash = sweep.rows[argmax(&FarsightedRow::xi_vs_nash)].tau;

    const double lo = sweep.rows[best == 0 ? 0 : best - 1].tau;
    const double hi = sweep.rows[std::min(best + 1, sweep.rows.size() - 1)].tau;
    const auto refined = optimize::golden_section([&](double t) { return farsighted_point(t, pop).xi_farsighted; },
                                                  lo, hi, 1e-6);
    sweep.tau_star_refined = refined.x[0];
    sweep.xi_star = refined.value;
    return sweep;
}

std::string to_string(SmallFirmMode mode) {
    switch (mode) {
        case SmallFirmMode::quality: return "quality";
        case SmallFirmMode::price: return "price";
        case SmallFirmMode::both: return "both";
    }
    return "both";
}

SmallFirmMode small_firm_mode_from_string(const std::string& name) {
    if (name == "quality") return SmallFirmMode::quality;
    if (name == "price") return SmallFirmMode::price;
    if (name == "both") return SmallFirmMode::both;
    throw std::invalid_argument("unknown small-firm mode: " + name);
}

EquilibriumResult size_asymmetric_equilibrium(double lambda, const ConsumerPopulation& pop, SmallFirmMode mode,
                                              const NashOptions& options) {
    if (!(lambda > 0 && lambda < 1)) throw std::domain_error("size_asymmetric_equilibrium: lambda must lie in (0, 1)");
    const auto market = market_at_monopolist(pop, {lambda, 1.0 - lambda});
    StrategySpace small = StrategySpace::full(pop);
    if (mode == SmallFirmMode::quality) small = StrategySpace::quality_only(pop);
    if (mode == SmallFirmMode::price) small = StrategySpace::price_only(pop);
    return find_nash(market, {small, StrategySpace::full(pop)}, options);
}

std::optional<double> small_firm_threshold(const ConsumerPopulation& pop, SmallFirmMode mode, double tolerance,
                                           double lo, double hi, const NashOptions& options) {
    auto excess = [&](double lambda) {
        return size_asymmetric_equilibrium(lambda, pop, mode, options).profit_ratios[0] - 1.0;
    };
    double f_lo = excess(lo);
    const double f_hi = excess(hi);
    if (f_lo == 0) return lo;
    if (f_hi == 0) return hi;
    if ((f_lo > 0) == (f_hi > 0)) return std::nullopt;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = excess(mid);
        if ((f_mid > 0) == (f_lo > 0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

EquilibriumResult entrant_vs_duopoly(double lambda, const ConsumerPopulation& pop, const NashOptions& options) {
    if (!(lambda > 0 && lambda < 1)) throw std::domain_error("entrant_vs_duopoly: lambda must lie in (0, 1)");
    const auto nash = analytic::nash_symmetric(2, pop);
    const double incumbent = (1.0 - lambda) / 2;
    const Market market{{Firm{nash.offer(), lambda}, Firm{nash.offer(), incumbent}, Firm{nash.offer(), incumbent}}, pop};
    auto result = find_nash(market, {StrategySpace::full(pop), StrategySpace::fixed(pop), StrategySpace::fixed(pop)},
                            options);
    const double friendly = model::monopolist_profit(nash.offer(), pop);
    const double total = result.market.total_weight();
    for (std::size_t i = 0; i < result.profits.size(); ++i)
        result.profit_ratios[i] = result.profits[i] / (result.market.firms[i].size_weight / total * friendly);
    return result;
}

EquilibriumResult efficiency_equilibrium(double eta1, const ConsumerPopulation& pop, const NashOptions& options) {
    if (!(eta1 > 0 && eta1 <= 1)) throw std::domain_error("efficiency_equilibrium: eta1 must lie in (0, 1]");
    const auto market = market_at_monopolist(pop, {1.0, 1.0}, {eta1, 1.0});
    auto result = find_nash(market, {StrategySpace::full(pop, eta1), StrategySpace::full(pop)}, options);
    const double baseline = analytic::nash_symmetric(2, pop).x_nash;
    for (std::size_t i = 0; i < result.profits.size(); ++i) result.profit_ratios[i] = result.profits[i] / baseline;
    return result;
}

}  // namespace firmcomp::solver
