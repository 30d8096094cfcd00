#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "firmcomp/types.hpp"

namespace firmcomp::solver {

struct Interval {
    double lo;
    double hi;
};

/// Which of a firm's variables may move, and within which bounds.
struct StrategySpace {
    bool free_quality = true;
    bool free_price = true;
    Interval quality{0.0, 1.0};
    Interval price{1e-6, 1.0};

    /// Quality in [0, p_max / efficiency], price in (0, p_max).
    static StrategySpace full(const ConsumerPopulation& pop, double efficiency = 1.0);
    static StrategySpace price_only(const ConsumerPopulation& pop, double efficiency = 1.0);
    static StrategySpace quality_only(const ConsumerPopulation& pop, double efficiency = 1.0);
    static StrategySpace fixed(const ConsumerPopulation& pop, double efficiency = 1.0);

    bool optimizing() const { return free_quality || free_price; }
    void validate(const ConsumerPopulation& pop, double efficiency = 1.0) const;
};

enum class ResponseStatus {
    optimal,
    no_profitable_point,  ///< the best feasible point earns <= 0
};

struct BestResponse {
    Offer offer;
    double profit;
    ResponseStatus status;
    bool clamped;  ///< acceptance probability saturated at 1 at the returned offer
};

/// Maximise firm i's per-consumer profit over the free variables of `space`, all other offers fixed.
/// Fixed variables keep the value they have in `market`.
BestResponse best_response(std::size_t i, const Market& market, const StrategySpace& space);

struct NashOptions {
    double damping = 0.5;
    int max_iterations = 10000;
    double tolerance = 1e-9;       ///< on the largest offer change, relative to p_max
    double fd_step = 1e-6;         ///< finite-difference step for the residual, relative to p_max
    int oscillation_window = 100;  ///< iterations without progress before the damping is halved
};

struct EquilibriumResult {
    std::vector<Offer> offers;
    std::vector<double> profits;
    std::vector<double> profit_ratios;
    int iterations = 0;
    double residual = 0.0;  ///< largest relative first-order-condition violation over free variables
    bool converged = false;
    double final_damping = 0.0;
    std::vector<bool> clamped;  ///< per firm: acceptance saturated at the equilibrium offer

    Market market;  ///< the market at the equilibrium offers
};

/// Damped round-robin best-response iteration starting from the offers already in `market`.
/// profit_ratios are relative to each firm's size-weighted share of the monopolist profit.
/// A result with converged == false is returned rather than thrown.
EquilibriumResult find_nash(const Market& market, const std::vector<StrategySpace>& spaces,
                            const NashOptions& options = {});

/// Relative first-order-condition residual of firm i over the free variables of `space`:
/// |dX/dv| p_max / X from central differences, with outward derivatives at active bounds ignored.
/// On the acceptance clamp kink only ascent directions count.
double first_order_residual(std::size_t i, const Market& market, const StrategySpace& space,
                            double fd_step = 1e-6);

/// Market with the given firms all starting at the single-firm optimum.
Market market_at_monopolist(const ConsumerPopulation& pop, const std::vector<double>& size_weights,
                            const std::vector<double>& efficiencies = {});

}  // namespace firmcomp::solver
