#include "firmcomp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "firmcomp/model.hpp"
#include "firmcomp/scenarios.hpp"

namespace firmcomp::montecarlo {

SimulationReport simulate(const SimulationConfig& config) {
    config.market.validate();
    if (config.num_consumers < 1) throw std::domain_error("simulate: num_consumers must be >= 1");
    if (config.block_size < 1) throw std::domain_error("simulate: block_size must be >= 1");

    const auto& market = config.market;
    const auto n = market.size();
    const auto selection = model::selection_probabilities(market);
    std::vector<double> cumulative(n);
    std::vector<double> acceptance(n);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        running += selection[i];
        cumulative[i] = running;
        acceptance[i] = model::acceptance_probability(market.firms[i].offer, market.population);
    }
    cumulative.back() = 1.0;

    const auto blocks = (config.num_consumers + config.block_size - 1) / config.block_size;
    // Integer unit counts per block; the reduction is exact and order-independent.
    auto per_block = solver::parallel_map<std::vector<std::uint64_t>>(blocks, [&](std::size_t b) {
        std::vector<std::uint64_t> units(n, 0);
        const std::uint64_t first = b * config.block_size;
        const std::uint64_t last = std::min(config.num_consumers, first + config.block_size);
        for (std::uint64_t k = first; k < last; ++k) {
            const double u = SplitMix64::uniform(config.seed, 2 * k);
            const auto chosen = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            const auto firm = std::min(chosen, n - 1);
            if (SplitMix64::uniform(config.seed, 2 * k + 1) < acceptance[firm]) ++units[firm];
        }
        return units;
    });

    SimulationReport report;
    report.num_consumers = config.num_consumers;
    report.selections = config.num_consumers;
    report.firms.resize(n);
    for (const auto& units : per_block)
        for (std::size_t i = 0; i < n; ++i) report.firms[i].units_sold += units[i];

    const double consumers = static_cast<double>(config.num_consumers);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& firm = market.firms[i];
        auto& t = report.firms[i];
        const double sold = static_cast<double>(t.units_sold);
        const double margin = firm.offer.price - firm.efficiency * firm.offer.quality;
        t.revenue = sold * firm.offer.price;
        t.cost = sold * firm.efficiency * firm.offer.quality;
        t.profit_estimate = sold * margin / consumers;
        // Each consumer contributes `margin` with frequency f and 0 otherwise.
        if (config.num_consumers >= 2) {
            const double f = sold / consumers;
            const double variance = consumers / (consumers - 1) * f * (1 - f) * margin * margin;
            t.standard_error = std::sqrt(variance / consumers);
        }
    }
    return report;
}

}  // namespace firmcomp::montecarlo
