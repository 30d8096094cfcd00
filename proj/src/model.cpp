#include "firmcomp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace firmcomp::model {

namespace {

double quality_factor(double quality, double price, double alpha) {
    if (alpha == 0.0) return 1.0;
    return std::pow(quality / price, alpha);
}

}  // namespace

double acceptance_weight(const Offer& offer, const ConsumerPopulation& pop) {
    if (offer.price >= pop.p_max) return 0.0;
    return (1.0 - offer.price / pop.p_max) * quality_factor(offer.quality, offer.price, pop.alpha);
}

double acceptance_probability(const Offer& offer, const ConsumerPopulation& pop) {
    return std::clamp(acceptance_weight(offer, pop), 0.0, 1.0);
}

bool acceptance_clamped(const Offer& offer, const ConsumerPopulation& pop) {
    return acceptance_weight(offer, pop) > 1.0;
}

std::vector<double> selection_probabilities(const Market& market) {
    std::vector<double> weights;
    weights.reserve(market.size());
    double total = 0.0;
    for (const auto& firm : market.firms) {
        weights.push_back(firm.size_weight * acceptance_weight(firm.offer, market.population));
        total += weights.back();
    }
    if (!(total > 0.0)) throw AllWeightsZero{};
    for (auto& w : weights) w /= total;
    return weights;
}

double per_consumer_profit(std::size_t i, const Market& market) {
    if (i >= market.size()) throw std::out_of_range("per_consumer_profit: firm index out of range");
    const auto selection = selection_probabilities(market);
    const auto& firm = market.firms[i];
    const double margin = firm.offer.price - firm.efficiency * firm.offer.quality;
    return selection[i] * acceptance_probability(firm.offer, market.population) * margin;
}

std::vector<double> per_consumer_profits(const Market& market) {
    const auto selection = selection_probabilities(market);
    std::vector<double> out(market.size());
    for (std::size_t i = 0; i < market.size(); ++i) {
        const auto& firm = market.firms[i];
        const double margin = firm.offer.price - firm.efficiency * firm.offer.quality;
        out[i] = selection[i] * acceptance_probability(firm.offer, market.population) * margin;
    }
    return out;
}

double monopolist_profit(const Offer& offer, const ConsumerPopulation& pop, double efficiency) {
    return acceptance_probability(offer, pop) * (offer.price - efficiency * offer.quality);
}

std::array<double, 2> log_profit_gradient(std::size_t i, const Market& market) {
    const auto selection = selection_probabilities(market);
    const auto& firm = market.firms[i];
    const auto& pop = market.population;
    const double q = firm.offer.quality;
    const double p = firm.offer.price;
    const double margin = p - firm.efficiency * q;

    // d log a / dQ and d log a / dp for the unclamped weight a.
    const double dlog_a_dq = pop.alpha == 0.0 ? 0.0 : pop.alpha / q;
    const double dlog_a_dp = -1.0 / (pop.p_max - p) - pop.alpha / p;

    // The selection share contributes (1 - s) d log a; acceptance contributes d log a unless saturated.
    const double factor = (1.0 - selection[i]) + (acceptance_clamped(firm.offer, pop) ? 0.0 : 1.0);
    return {factor * dlog_a_dq - firm.efficiency / margin, factor * dlog_a_dp + 1.0 / margin};
}

double gaussian_acceptance_probability(const Offer& offer, double sigma) {
    if (!(sigma > 0)) throw std::domain_error("gaussian_acceptance_probability: sigma must be > 0");
    return 0.5 * std::erfc((offer.price - offer.quality) / (std::numbers::sqrt2 * sigma));
}

}  // namespace firmcomp::model
