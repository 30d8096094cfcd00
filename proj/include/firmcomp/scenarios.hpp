#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "firmcomp/solver.hpp"
#include "firmcomp/types.hpp"

/// Competition scenarios built on best_response and find_nash.
namespace firmcomp::solver {

// ---------------------------------------------------------------------------------------------
// Firm 1 competes on price with its quality frozen at the monopolist level; firm 2 answers with
// one of four strategies. Ratios are firm 2's equilibrium profit over half the monopolist profit.

struct PriceCompetitionRow {
    double alpha;
    double do_nothing;
    double quality_only;
    double price_only;
    double both;
    bool converged;
};

PriceCompetitionRow price_competition_point(const ConsumerPopulation& pop, const NashOptions& options = {});
std::vector<PriceCompetitionRow> scenario_price_competition(const ConsumerPopulation& pop,
                                                            const std::vector<double>& alpha_grid,
                                                            const NashOptions& options = {});

// ---------------------------------------------------------------------------------------------
// Firm 2 commits to the offer at tau on the monopolist-to-Nash segment; firm 1 best-responds.

struct FarsightedRow {
    double tau;
    double xi_farsighted;  ///< firm 2 (committed)
    double xi_optimizing;  ///< firm 1 (best response)
    double xi_vs_nash;     ///< firm 2 when firm 1 is pinned at the two-firm Nash offer
};

struct FarsightedSweep {
    std::vector<FarsightedRow> rows;
    double xi_nash;            ///< two-firm Nash profit ratio
    double tau_star;           ///< grid argmax of xi_farsighted
    double tau_star_refined;   ///< golden-section refinement around tau_star
    double xi_star;            ///< xi_farsighted at tau_star_refined
    double tau_star_vs_nash;   ///< grid argmax of xi_vs_nash
};

FarsightedRow farsighted_point(double tau, const ConsumerPopulation& pop);
FarsightedSweep farsighted_sweep(const ConsumerPopulation& pop, const std::vector<double>& tau_grid);

// ---------------------------------------------------------------------------------------------
// Two firms of relative sizes lambda (small, firm 0) and 1 - lambda (big, firm 1).

enum class SmallFirmMode { quality, price, both };

std::string to_string(SmallFirmMode mode);
SmallFirmMode small_firm_mode_from_string(const std::string& name);

/// Both firms play Nash; the small firm may move only the variables selected by `mode`, the big
/// firm moves both. Ratios are relative to each firm's size-weighted share of the monopolist profit.
EquilibriumResult size_asymmetric_equilibrium(double lambda, const ConsumerPopulation& pop, SmallFirmMode mode,
                                              const NashOptions& options = {});

/// lambda at which the small firm's profit ratio crosses 1, by bisection on [lo, hi].
/// Empty when the ratio does not change sign on the bracket.
std::optional<double> small_firm_threshold(const ConsumerPopulation& pop, SmallFirmMode mode,
                                           double tolerance = 1e-3, double lo = 0.01, double hi = 0.5,
                                           const NashOptions& options = {});

// ---------------------------------------------------------------------------------------------
// A small entrant (weight lambda) against two incumbents frozen at the two-firm Nash offer, each of
// weight (1 - lambda) / 2. Ratios compare with adopting the incumbents' offer ("friendly" entry).

EquilibriumResult entrant_vs_duopoly(double lambda, const ConsumerPopulation& pop, const NashOptions& options = {});

// ---------------------------------------------------------------------------------------------
// Two equal-size firms; firm 0 has efficiency eta1 <= 1, firm 1 keeps 1. Ratios are relative to the
// symmetric two-firm Nash profit.

EquilibriumResult efficiency_equilibrium(double eta1, const ConsumerPopulation& pop, const NashOptions& options = {});

// ---------------------------------------------------------------------------------------------

/// Evaluate fn(0..count-1) on worker threads; results are stored by index.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn);

}  // namespace firmcomp::solver

#include "firmcomp/detail/parallel.hpp"
