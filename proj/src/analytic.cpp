#include "firmcomp/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "firmcomp/model.hpp"

namespace firmcomp::analytic {

namespace {

void require_n(int n) {
    if (n < 2) throw std::domain_error("at least two firms are required for a Nash equilibrium");
}

void require_alpha(double alpha) {
    if (!(alpha >= 0) || std::isinf(alpha)) throw std::domain_error("alpha must be finite and >= 0");
}

}  // namespace

MonopolistOptimum monopolist_optimum(const ConsumerPopulation& pop) {
    pop.validate();
    const double a = pop.alpha;
    const double q = a * pop.p_max / (2.0 * (a + 1.0));
    const double p = pop.p_max / 2.0;
    // pow(0, 0) == 1 covers the quality-blind case.
    const double x = pop.p_max / (4.0 * (a + 1.0)) * std::pow(a / (a + 1.0), a);
    return {q, p, x};
}

SymmetricNash nash_symmetric(int n, const ConsumerPopulation& pop) {
    require_n(n);
    pop.validate();
    const double a = pop.alpha;
    const double nn = n;
    const double q = a * nn * (2 * nn - 1) * pop.p_max / ((3 * nn - 1) * (nn + a * (2 * nn - 1)));
    const double p = nn * pop.p_max / (3 * nn - 1);
    const double x = model::monopolist_profit(Offer{q, p}, pop) / nn;
    return {n, q, p, x, quality_ratio(n, a), profit_ratio(n, a), p - q};
}

double quality_ratio(int n, double alpha) {
    require_n(n);
    require_alpha(alpha);
    const double nn = n;
    return 2 * nn * (2 * nn - 1) * (1 + alpha) / ((3 * nn - 1) * (nn + alpha * (2 * nn - 1)));
}

double profit_ratio(int n, double alpha) {
    require_n(n);
    require_alpha(alpha);
    const double nn = n;
    const double base = (1 + alpha) * (2 * nn - 1) / (nn + alpha * (2 * nn - 1));
    return 4 * nn * nn / ((3 * nn - 1) * (3 * nn - 1)) * std::pow(base, alpha + 1);
}

double marginal_profit_nash(int n, const ConsumerPopulation& pop) {
    const auto eq = nash_symmetric(n, pop);
    return eq.p_nash - eq.q_nash;
}

double quality_ratio_threshold(int n) {
    require_n(n);
    return static_cast<double>(n) / (2.0 * n - 1.0);
}

double nash_quality_many_firms(const ConsumerPopulation& pop) {
    return 2 * pop.alpha * pop.p_max / (3 * (2 * pop.alpha + 1));
}

double nash_price_many_firms(const ConsumerPopulation& pop) { return pop.p_max / 3; }

double quality_ratio_many_firms(double alpha) {
    require_alpha(alpha);
    return 4 * (1 + alpha) / (3 * (2 * alpha + 1));
}

double profit_ratio_many_firms(double alpha) {
    require_alpha(alpha);
    return 4.0 / 9.0 * std::pow(2 * (1 + alpha) / (2 * alpha + 1), alpha + 1);
}

double marginal_profit_many_firms(const ConsumerPopulation& pop) {
    return pop.p_max / (3 * (2 * pop.alpha + 1));
}

double profit_ratio_experienced_limit(int n) {
    require_n(n);
    const double nn = n;
    return 4 * nn * nn * std::exp((nn - 1) / (2 * nn - 1)) / ((3 * nn - 1) * (3 * nn - 1));
}

double profit_ratio_double_limit() { return 4.0 * std::sqrt(std::numbers::e) / 9.0; }

SmallFirmOptimum small_firm_optimum(const ConsumerPopulation& pop) {
    pop.validate();
    const double beta = 2 * pop.alpha + 1;
    return {(beta - 1) * pop.p_max / (3 * beta), pop.p_max / 3,
            16.0 / 27.0 * std::pow((beta + 1) / beta, beta), beta};
}

Offer farsighted_offer(double tau, const ConsumerPopulation& pop) {
    const auto mono = monopolist_optimum(pop);
    const auto nash = nash_symmetric(2, pop);
    return {mono.q_star + tau * (nash.q_nash - mono.q_star),
            mono.p_star + tau * (nash.p_nash - mono.p_star)};
}

}  // namespace firmcomp::analytic
