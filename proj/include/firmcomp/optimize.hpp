#pragma once

#include <functional>
#include <vector>

/// Small derivative-free maximisers over boxes. Points are projected into the box before
/// every evaluation, so the objective never sees an infeasible argument.
namespace firmcomp::optimize {

using Objective = std::function<double(const std::vector<double>&)>;

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return lo.size(); }
    std::vector<double> project(std::vector<double> x) const;
    double width(std::size_t k) const { return hi[k] - lo[k]; }
};

struct Maximum {
    std::vector<double> x;
    double value;
    int evaluations;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
Maximum golden_section(const std::function<double(double)>& f, double lo, double hi,
                       double x_tolerance = 1e-13, int max_evaluations = 400);

/// 1-D maximisation: dense scan over the interval to bracket the best point, then golden section.
Maximum scan_and_refine(const std::function<double(double)>& f, double lo, double hi, int scan_points = 41);

struct NelderMeadOptions {
    double initial_step = 0.1;    ///< fraction of each box width
    double x_tolerance = 1e-12;   ///< fraction of each box width
    double f_tolerance = 1e-16;   ///< relative spread of simplex values
    int max_evaluations = 4000;
};

/// Nelder-Mead simplex maximisation inside a box.
Maximum nelder_mead(const Objective& f, std::vector<double> start, const Box& box,
                    const NelderMeadOptions& options = {});

/// Nelder-Mead from every node of a grid x grid lattice of interior points (plus any extra starts);
/// returns the best local maximum found.
Maximum multistart_nelder_mead(const Objective& f, const Box& box, int grid = 3,
                               const std::vector<std::vector<double>>& extra_starts = {},
                               const NelderMeadOptions& options = {});

}  // namespace firmcomp::optimize
