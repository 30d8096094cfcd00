#include "firmcomp/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "firmcomp/analytic.hpp"
#include "firmcomp/model.hpp"
#include "firmcomp/optimize.hpp"

namespace firmcomp::solver {

namespace {

constexpr double price_floor = 1e-6;   // relative to p_max
constexpr double price_ceiling = 1e-9; // gap below p_max, relative
constexpr double clamp_flag_tolerance = 1e-7;

// Profit of firm i as a function of its own offer, with the competitors' weight precomputed.
class OwnProfit {
public:
    OwnProfit(std::size_t i, const Market& market) : market_{market}, i_{i} {
        for (std::size_t j = 0; j < market.size(); ++j)
            if (j != i)
                others_ += market.firms[j].size_weight *
                           model::acceptance_weight(market.firms[j].offer, market.population);
    }

    double operator()(double quality, double price) const {
        const auto& firm = market_.firms[i_];
        const double a = model::acceptance_weight(Offer{quality, price}, market_.population);
        const double w = firm.size_weight * a;
        const double total = w + others_;
        if (!(total > 0.0)) return 0.0;
        return w / total * std::min(a, 1.0) * (price - firm.efficiency * quality);
    }

private:
    const Market& market_;
    std::size_t i_;
    double others_ = 0.0;
};

struct Layout {
    const StrategySpace& space;
    Offer current;

    std::size_t dim() const { return (space.free_quality ? 1 : 0) + (space.free_price ? 1 : 0); }

    Offer to_offer(const std::vector<double>& x) const {
        std::size_t k = 0;
        const double q = space.free_quality ? x[k++] : current.quality;
        const double p = space.free_price ? x[k] : current.price;
        return {q, p};
    }

    std::vector<double> from_offer(const Offer& o) const {
        std::vector<double> x;
        if (space.free_quality) x.push_back(o.quality);
        if (space.free_price) x.push_back(o.price);
        return x;
    }

    optimize::Box box() const {
        optimize::Box b;
        if (space.free_quality) {
            b.lo.push_back(space.quality.lo);
            b.hi.push_back(space.quality.hi);
        }
        if (space.free_price) {
            b.lo.push_back(space.price.lo);
            b.hi.push_back(space.price.hi);
        }
        return b;
    }

    // which of the (quality, price) gradient components belong to free coordinate k
    std::size_t component(std::size_t k) const { return space.free_quality ? k : 1; }
};

// Newton iteration on the analytic gradient of log-profit, with a finite-difference Jacobian.
// Coordinates sitting on a bound with an outward gradient are pinned there.
std::vector<double> polish(std::size_t i, Market market, const Layout& layout, const OwnProfit& profit,
                           std::vector<double> x) {
    const auto box = layout.box();
    const std::size_t d = x.size();

    auto gradient = [&](const std::vector<double>& at) {
        market.firms[i].offer = layout.to_offer(at);
        const auto g = model::log_profit_gradient(i, market);
        std::vector<double> out(d);
        for (std::size_t k = 0; k < d; ++k) out[k] = g[layout.component(k)];
        return out;
    };
    auto value = [&](const std::vector<double>& at) {
        const auto o = layout.to_offer(at);
        return profit(o.quality, o.price);
    };

    std::vector<bool> active(d, true);
    {
        const auto g = gradient(x);
        for (std::size_t k = 0; k < d; ++k) {
            const double near = 1e-7 * box.width(k);
            if (x[k] - box.lo[k] <= near && g[k] < 0) {
                x[k] = box.lo[k];
                active[k] = false;
            } else if (box.hi[k] - x[k] <= near && g[k] > 0) {
                x[k] = box.hi[k];
                active[k] = false;
            }
        }
    }
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < d; ++k)
        if (active[k]) idx.push_back(k);
    if (idx.empty()) return x;

    for (int iter = 0; iter < 40; ++iter) {
        const auto g = gradient(x);
        const std::size_t m = idx.size();
        // Jacobian of the active gradient components
        std::array<std::array<double, 2>, 2> jac{};
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t k = idx[c];
            const double h = 1e-6 * std::max(std::abs(x[k]), 1e-3 * box.width(k));
            if (x[k] - h < box.lo[k] || x[k] + h > box.hi[k]) return x;
            auto xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            if (!(value(xp) > 0) || !(value(xm) > 0)) return x;
            const auto gp = gradient(xp), gm = gradient(xm);
            for (std::size_t r = 0; r < m; ++r) jac[r][c] = (gp[idx[r]] - gm[idx[r]]) / (2 * h);
        }
        std::array<double, 2> step{};
        if (m == 1) {
            if (jac[0][0] == 0) return x;
            step[0] = -g[idx[0]] / jac[0][0];
        } else {
            const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if (det == 0) return x;
            step[0] = -(jac[1][1] * g[idx[0]] - jac[0][1] * g[idx[1]]) / det;
            step[1] = -(-jac[1][0] * g[idx[0]] + jac[0][0] * g[idx[1]]) / det;
        }
        auto next = x;
        bool done = true;
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t k = idx[c];
            next[k] += step[c];
            if (next[k] < box.lo[k] || next[k] > box.hi[k]) return x;
            if (std::abs(step[c]) > 1e-15 * std::max(std::abs(x[k]), 1e-3 * box.width(k))) done = false;
        }
        if (!(value(next) > 0)) return x;
        x = std::move(next);
        if (done) break;
    }
    return x;
}

}  // namespace

StrategySpace StrategySpace::full(const ConsumerPopulation& pop, double efficiency) {
    StrategySpace s;
    s.quality = {0.0, pop.p_max / efficiency};
    s.price = {price_floor * pop.p_max, pop.p_max * (1.0 - price_ceiling)};
    return s;
}

StrategySpace StrategySpace::price_only(const ConsumerPopulation& pop, double efficiency) {
    auto s = full(pop, efficiency);
    s.free_quality = false;
    return s;
}

StrategySpace StrategySpace::quality_only(const ConsumerPopulation& pop, double efficiency) {
    auto s = full(pop, efficiency);
    s.free_price = false;
    return s;
}

StrategySpace StrategySpace::fixed(const ConsumerPopulation& pop, double efficiency) {
    auto s = full(pop, efficiency);
    s.free_quality = s.free_price = false;
    return s;
}

void StrategySpace::validate(const ConsumerPopulation& pop, double efficiency) const {
    if (!(0.0 <= quality.lo && quality.lo < quality.hi && quality.hi <= pop.p_max / efficiency * (1 + 1e-12)))
        throw std::domain_error("StrategySpace: quality bounds must satisfy 0 <= lo < hi <= p_max / efficiency");
    if (!(0.0 < price.lo && price.lo < price.hi && price.hi < pop.p_max))
        throw std::domain_error("StrategySpace: price bounds must satisfy 0 < lo < hi < p_max");
}

BestResponse best_response(std::size_t i, const Market& market, const StrategySpace& space) {
    if (i >= market.size()) throw std::out_of_range("best_response: firm index out of range");
    const auto& firm = market.firms[i];
    space.validate(market.population, firm.efficiency);

    const OwnProfit profit{i, market};
    const Layout layout{space, firm.offer};
    const auto box = layout.box();
    auto value = [&](const std::vector<double>& x) {
        const auto o = layout.to_offer(x);
        return profit(o.quality, o.price);
    };

    std::vector<double> x;
    double best = 0.0;
    switch (layout.dim()) {
        case 0:
            x = {};
            best = value(x);
            break;
        case 1: {
            auto m = optimize::scan_and_refine([&](double v) { return value({v}); }, box.lo[0], box.hi[0]);
            x = m.x;
            best = m.value;
            break;
        }
        default: {
            auto m = optimize::multistart_nelder_mead(value, box, 3, {box.project(layout.from_offer(firm.offer))});
            x = m.x;
            best = m.value;
            break;
        }
    }

    if (best > 0 && layout.dim() > 0) {
        auto polished = polish(i, market, layout, profit, x);
        const double v = value(polished);
        if (v >= best - 1e-13 * std::abs(best)) {
            x = std::move(polished);
            best = v;
        }
    }

    // Ties in quality go to the cheapest quality.
    if (space.free_quality && x[0] > box.lo[0]) {
        auto low = x;
        low[0] = box.lo[0];
        const double v = value(low);
        if (v >= best - 1e-14 * std::abs(best)) {
            x = std::move(low);
            best = std::max(best, v);
        }
    }

    const auto offer = layout.to_offer(x);
    return {offer, best, best > 0 ? ResponseStatus::optimal : ResponseStatus::no_profitable_point,
            model::acceptance_weight(offer, market.population) >= 1.0 - clamp_flag_tolerance};
}

double first_order_residual(std::size_t i, const Market& market, const StrategySpace& space, double fd_step) {
    const auto& firm = market.firms[i];
    const auto& pop = market.population;
    const OwnProfit profit{i, market};
    const double x0 = profit(firm.offer.quality, firm.offer.price);
    const double h = fd_step * pop.p_max;
    const double scale = pop.p_max / std::max(std::abs(x0), 1e-300);

    double residual = 0.0;
    auto check = [&](double v, Interval bounds, auto&& at) {
        const bool has_up = v + h <= bounds.hi;
        const bool has_down = v - h >= bounds.lo;
        const double up = has_up ? profit(at(v + h).quality, at(v + h).price) : 0.0;
        const double down = has_down ? profit(at(v - h).quality, at(v - h).price) : 0.0;
        double r = 0.0;
        if (has_up && has_down) {
            const bool kink = (model::acceptance_weight(at(v + h), pop) > 1.0) !=
                              (model::acceptance_weight(at(v - h), pop) > 1.0);
            if (kink)
                r = std::max({0.0, up - x0, down - x0}) / h;
            else
                r = std::abs(up - down) / (2 * h);
        } else if (has_up) {
            r = std::max(0.0, (up - x0) / h);  // at the lower bound only an increase counts
        } else if (has_down) {
            r = std::max(0.0, (down - x0) / h);
        }
        residual = std::max(residual, r * scale);
    };
    if (space.free_quality)
        check(firm.offer.quality, space.quality, [&](double q) { return Offer{q, firm.offer.price}; });
    if (space.free_price)
        check(firm.offer.price, space.price, [&](double p) { return Offer{firm.offer.quality, p}; });
    return residual;
}

EquilibriumResult find_nash(const Market& market, const std::vector<StrategySpace>& spaces,
                            const NashOptions& options) {
    market.validate();
    if (spaces.size() != market.size()) throw std::invalid_argument("find_nash: one strategy space per firm");
    if (!(options.damping > 0 && options.damping <= 1)) throw std::domain_error("find_nash: damping must lie in (0, 1]");
    for (std::size_t i = 0; i < market.size(); ++i) spaces[i].validate(market.population, market.firms[i].efficiency);

    const auto optimizing = std::count_if(spaces.begin(), spaces.end(), [](const auto& s) { return s.optimizing(); });
    // A lone optimiser faces fixed opponents, so its best response already is the equilibrium.
    double damping = optimizing == 1 ? 1.0 : options.damping;

    EquilibriumResult result;
    result.market = market;
    auto& current = result.market;
    const double tolerance = options.tolerance * market.population.p_max;

    std::vector<double> changes;
    int last_damping_change = 0;
    bool settled = false;
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < current.size(); ++i) {
            if (!spaces[i].optimizing()) continue;
            const auto br = best_response(i, current, spaces[i]);
            auto& offer = current.firms[i].offer;
            const Offer next{offer.quality + damping * (br.offer.quality - offer.quality),
                             offer.price + damping * (br.offer.price - offer.price)};
            change = std::max({change, std::abs(next.quality - offer.quality), std::abs(next.price - offer.price)});
            offer = next;
        }
        changes.push_back(change);
        result.iterations = iter;
        if (change < tolerance) {
            settled = true;
            break;
        }
        const int window = options.oscillation_window;
        if (iter - last_damping_change > window && change >= changes[iter - 1 - window]) {
            damping /= 2;
            last_damping_change = iter;
        }
    }

    // Damped steps stop a fraction of the last move short of the fixed point; finish with full steps.
    if (settled && damping < 1.0) {
        for (int sweep = 0; sweep < 3; ++sweep) {
            auto trial = current;
            double change = 0.0;
            for (std::size_t i = 0; i < trial.size(); ++i) {
                if (!spaces[i].optimizing()) continue;
                const auto br = best_response(i, trial, spaces[i]);
                auto& offer = trial.firms[i].offer;
                change = std::max({change, std::abs(br.offer.quality - offer.quality), std::abs(br.offer.price - offer.price)});
                offer = br.offer;
            }
            if (change >= 10 * tolerance) break;
            current = std::move(trial);
            if (change < 1e-3 * tolerance) break;
        }
    }

    const auto base = analytic::monopolist_optimum(current.population).x_star;
    const double total_weight = current.total_weight();
    result.profits = model::per_consumer_profits(current);
    for (std::size_t i = 0; i < current.size(); ++i) {
        const auto& firm = current.firms[i];
        result.offers.push_back(firm.offer);
        result.profit_ratios.push_back(result.profits[i] / (firm.size_weight / total_weight * base));
        result.clamped.push_back(model::acceptance_weight(firm.offer, current.population) >=
                                 1.0 - clamp_flag_tolerance);
        if (spaces[i].optimizing())
            result.residual = std::max(result.residual, first_order_residual(i, current, spaces[i], options.fd_step));
    }
    result.final_damping = damping;
    result.converged = settled && result.residual < 1e-6;
    return result;
}

Market market_at_monopolist(const ConsumerPopulation& pop, const std::vector<double>& size_weights,
                            const std::vector<double>& efficiencies) {
    if (!efficiencies.empty() && efficiencies.size() != size_weights.size())
        throw std::invalid_argument("market_at_monopolist: one efficiency per firm");
    const auto mono = analytic::monopolist_optimum(pop).offer();
    std::vector<Firm> firms;
    for (std::size_t i = 0; i < size_weights.size(); ++i)
        firms.emplace_back(mono, size_weights[i], efficiencies.empty() ? 1.0 : efficiencies[i]);
    return {std::move(firms), pop};
}

}  // namespace firmcomp::solver
