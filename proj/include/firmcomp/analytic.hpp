#pragma once

#include "firmcomp/types.hpp"

/// Closed-form optima, equilibria and their ratios. These are the ground truth the numerical
/// solver is checked against.
namespace firmcomp::analytic {

struct MonopolistOptimum {
    double q_star;
    double p_star;
    double x_star;

    Offer offer() const { return {q_star, p_star}; }
};

struct SymmetricNash {
    int n;
    double q_nash;
    double p_nash;
    double x_nash;         ///< per-firm profit per consumer
    double quality_ratio;  ///< q_nash / q_star
    double profit_ratio;   ///< x_nash / (x_star / n)
    double marginal;       ///< p_nash - q_nash

    Offer offer() const { return {q_nash, p_nash}; }
};

/// Best reply of a negligibly small firm facing a monopolist that keeps its optimum.
struct SmallFirmOptimum {
    double q_s;
    double p_s;
    double xi_s;
    double beta;  ///< 2 alpha + 1

    Offer offer() const { return {q_s, p_s}; }
};

/// Profit-maximising single-firm offer. The maximal profit is
/// p_max / (4 (alpha + 1)) (alpha / (alpha + 1))^alpha, which is what the offer actually earns.
MonopolistOptimum monopolist_optimum(const ConsumerPopulation& pop);

/// Symmetric Nash equilibrium of n identical firms competing in quality and price.
SymmetricNash nash_symmetric(int n, const ConsumerPopulation& pop);

double quality_ratio(int n, double alpha);
double profit_ratio(int n, double alpha);
double marginal_profit_nash(int n, const ConsumerPopulation& pop);

/// alpha below which competition between n firms raises quality: n / (2n - 1).
double quality_ratio_threshold(int n);

// n -> infinity limits at fixed alpha.
double nash_quality_many_firms(const ConsumerPopulation& pop);
double nash_price_many_firms(const ConsumerPopulation& pop);
double quality_ratio_many_firms(double alpha);
double profit_ratio_many_firms(double alpha);
double marginal_profit_many_firms(const ConsumerPopulation& pop);

/// alpha -> infinity limit of profit_ratio(n, alpha): 4 n^2 e^{(n-1)/(2n-1)} / (3n - 1)^2.
double profit_ratio_experienced_limit(int n);
/// Both limits: 4 sqrt(e) / 9.
double profit_ratio_double_limit();

SmallFirmOptimum small_firm_optimum(const ConsumerPopulation& pop);

/// Offer on the segment from the monopolist optimum (tau = 0) to the two-firm Nash point (tau = 1).
/// tau outside [0, 1] extrapolates along the same line.
Offer farsighted_offer(double tau, const ConsumerPopulation& pop);

}  // namespace firmcomp::analytic
