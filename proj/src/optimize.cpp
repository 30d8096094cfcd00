#include "firmcomp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace firmcomp::optimize {

std::vector<double> Box::project(std::vector<double> x) const {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
    return x;
}

Maximum golden_section(const std::function<double(double)>& f, double lo, double hi,
                       double x_tolerance, int max_evaluations) {
    if (!(lo <= hi)) throw std::invalid_argument("golden_section: empty interval");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    int evals = 2;
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    while (b - a > x_tolerance * scale && evals < max_evaluations) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    // Include the end points: the maximum of a monotone section sits on the boundary.
    double best_x = fc >= fd ? c : d;
    double best_f = std::max(fc, fd);
    for (double edge : {lo, hi}) {
        if (edge < a || edge > b) continue;
        const double fe = f(edge);
        ++evals;
        if (fe > best_f) {
            best_f = fe;
            best_x = edge;
        }
    }
    return {{best_x}, best_f, evals};
}

Maximum scan_and_refine(const std::function<double(double)>& f, double lo, double hi, int scan_points) {
    if (scan_points < 3) throw std::invalid_argument("scan_and_refine: need at least 3 scan points");
    std::vector<double> xs(scan_points), fs(scan_points);
    for (int k = 0; k < scan_points; ++k) {
        xs[k] = lo + (hi - lo) * k / (scan_points - 1);
        fs[k] = f(xs[k]);
    }
    const auto best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
    const double a = xs[std::max(best - 1, 0)];
    const double b = xs[std::min(best + 1, scan_points - 1)];
    auto refined = golden_section(f, a, b);
    refined.evaluations += scan_points;
    if (fs[best] > refined.value) return {{xs[best]}, fs[best], refined.evaluations};
    return refined;
}

Maximum nelder_mead(const Objective& f, std::vector<double> start, const Box& box,
                    const NelderMeadOptions& options) {
    const std::size_t d = box.dim();
    if (start.size() != d) throw std::invalid_argument("nelder_mead: start has wrong dimension");
    int evals = 0;
    auto eval = [&](std::vector<double>& x) {
        x = box.project(std::move(x));
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> simplex(d + 1, box.project(std::move(start)));
    for (std::size_t k = 0; k < d; ++k) {
        const double step = options.initial_step * box.width(k);
        auto& v = simplex[k + 1];
        v[k] = v[k] + step <= box.hi[k] ? v[k] + step : v[k] - step;
    }
    std::vector<double> values(d + 1);
    for (std::size_t j = 0; j <= d; ++j) values[j] = eval(simplex[j]);

    std::vector<std::size_t> order(d + 1);
    while (evals < options.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
        const auto best = order.front();
        const auto worst = order.back();
        const auto second_worst = order[d - 1];

        bool small = true;
        for (std::size_t j = 0; j <= d && small; ++j)
            for (std::size_t k = 0; k < d; ++k)
                if (std::abs(simplex[j][k] - simplex[best][k]) > options.x_tolerance * box.width(k)) {
                    small = false;
                    break;
                }
        const double spread = values[best] - values[worst];
        if (small || spread <= options.f_tolerance * std::abs(values[best])) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t j = 0; j <= d; ++j)
            if (j != worst)
                for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[j][k] / d;

        auto along = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t k = 0; k < d; ++k) x[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
            return x;
        };

        auto reflected = along(-1.0);
        const double fr = eval(reflected);
        if (fr > values[best]) {
            auto expanded = along(-2.0);
            const double fe = eval(expanded);
            if (fe > fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
            continue;
        }
        if (fr > values[second_worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
            continue;
        }
        auto contracted = fr > values[worst] ? along(-0.5) : along(0.5);
        const double fc = eval(contracted);
        if (fc > std::max(fr, values[worst])) {
            simplex[worst] = std::move(contracted);
            values[worst] = fc;
            continue;
        }
        // shrink towards the best vertex
        for (std::size_t j = 0; j <= d; ++j) {
            if (j == best) continue;
            for (std::size_t k = 0; k < d; ++k)
                simplex[j][k] = simplex[best][k] + 0.5 * (simplex[j][k] - simplex[best][k]);
            values[j] = eval(simplex[j]);
        }
    }
    const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    return {simplex[best], values[best], evals};
}

Maximum multistart_nelder_mead(const Objective& f, const Box& box, int grid,
                               const std::vector<std::vector<double>>& extra_starts,
                               const NelderMeadOptions& options) {
    const std::size_t d = box.dim();
    std::vector<std::vector<double>> starts = extra_starts;
    std::size_t lattice = 1;
    for (std::size_t k = 0; k < d; ++k) lattice *= static_cast<std::size_t>(grid);
    for (std::size_t idx = 0; idx < lattice; ++idx) {
        std::vector<double> x(d);
        std::size_t rest = idx;
        for (std::size_t k = 0; k < d; ++k) {
            const auto node = rest % grid;
            rest /= grid;
            x[k] = box.lo[k] + box.width(k) * (node + 0.5) / grid;
        }
        starts.push_back(std::move(x));
    }
    Maximum best{{}, -INFINITY, 0};
    int total = 0;
    for (auto& s : starts) {
        auto m = nelder_mead(f, s, box, options);
        total += m.evaluations;
        if (m.value > best.value) best = std::move(m);
    }
    best.evaluations = total;
    return best;
}

}  // namespace firmcomp::optimize
