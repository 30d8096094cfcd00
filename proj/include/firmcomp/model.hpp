#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "firmcomp/types.hpp"

/// Consumer choice probabilities and per-consumer profit. Everything here is a pure function.
namespace firmcomp::model {

/// Unclamped acceptance weight (1 - p/p_max) (Q/p)^alpha. Zero when p >= p_max.
/// (Q/p)^0 is taken as 1 for every Q, including Q = 0.
double acceptance_weight(const Offer& offer, const ConsumerPopulation& pop);

/// Probability that a consumer who examines `offer` buys it: the acceptance weight clamped to [0, 1].
double acceptance_probability(const Offer& offer, const ConsumerPopulation& pop);

/// True when the unclamped acceptance weight exceeds 1 (possible only for Q > p).
bool acceptance_clamped(const Offer& offer, const ConsumerPopulation& pop);

/// Probability that a consumer examines each firm's product. Size weights enter multiplicatively.
/// Throws AllWeightsZero when no firm is selectable.
std::vector<double> selection_probabilities(const Market& market);

/// Expected profit per consumer of firm i: P_S(i) P_A(i) (p_i - eta_i Q_i). Negative margins are kept.
double per_consumer_profit(std::size_t i, const Market& market);

/// Profits of all firms, sharing one normalisation.
std::vector<double> per_consumer_profits(const Market& market);

/// Single-firm profit P_A (p - eta Q).
double monopolist_profit(const Offer& offer, const ConsumerPopulation& pop, double efficiency = 1.0);

/// Gradient of log(per_consumer_profit(i)) with respect to firm i's own (quality, price).
/// Only meaningful where that profit is strictly positive. On the clamp boundary the
/// acceptance factor is treated as saturated.
std::array<double, 2> log_profit_gradient(std::size_t i, const Market& market);

/// Acceptance when perceived quality is N(Q, sigma^2) and the consumer buys iff perceived quality
/// exceeds the price: the normal survival function at (p - Q)/sigma.
double gaussian_acceptance_probability(const Offer& offer, double sigma);

}  // namespace firmcomp::model
