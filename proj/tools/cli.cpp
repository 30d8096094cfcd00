#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "firmcomp/analytic.hpp"
#include "firmcomp/model.hpp"
#include "firmcomp/montecarlo.hpp"
#include "firmcomp/scenarios.hpp"
#include "firmcomp/solver.hpp"
#include "firmcomp/validation.hpp"

namespace firmcomp::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int schema_version = 1;

/// Raised for values that parse but make no sense (empty grids, negative tolerances, ...).
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class UnknownScenario : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    double alpha = 1.0;
    double p_max = 1.0;
    std::string output;
    std::string meta;

    double damping = 0.5;
    int max_iterations = 10000;
    double tolerance = 1e-9;

    int firms = 2;
    std::vector<double> lambdas;
    std::vector<double> etas;
    std::string method = "auto";

    std::string figure;
    double alpha_min = 0.0, alpha_max = 10.0, alpha_step = 0.05;
    double tau_min = 0.0, tau_max = 1.5, tau_step = 0.005;
    double lambda_min = 0.01, lambda_max = 0.99, lambda_step = 0.01;
    double small_lambda = 1e-4;
    double eta_min = 0.6, eta_max = 1.0, eta_step = 0.01;
    std::vector<double> curve_alphas{0.5, 1.0, 2.0, 4.0, 10.0};
    std::vector<double> efficiency_alphas{1.0, 2.0, 4.0};
    std::vector<double> sigmas{0.1, 0.2, 0.5, 1.0};

    std::vector<double> qualities;
    std::vector<double> prices;
    std::uint64_t consumers = 1000000;
    std::uint64_t seed = 1;

    solver::NashOptions nash_options() const {
        solver::NashOptions o;
        o.damping = damping;
        o.max_iterations = max_iterations;
        o.tolerance = tolerance;
        return o;
    }

    ConsumerPopulation population() const { return population(alpha); }
    ConsumerPopulation population(double a) const {
        try {
            return {a, p_max};
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }
};

std::string number(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::setprecision(12) << v;
    return s.str();
}

class Csv {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit Csv(std::vector<std::string> columns) : columns_{std::move(columns)} {}

    void add(std::vector<Cell> row) {
        if (row.size() != columns_.size()) throw std::logic_error("csv row has the wrong number of cells");
        std::vector<std::string> text;
        for (const auto& cell : row) {
            if (auto d = std::get_if<double>(&cell)) text.push_back(number(*d));
            else if (auto i = std::get_if<long long>(&cell)) text.push_back(std::to_string(*i));
            else text.push_back(quote(std::get<std::string>(cell)));
        }
        rows_.push_back(std::move(text));
    }

    const std::vector<std::string>& columns() const { return columns_; }

    void write(std::ostream& os) const {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << cells[k];
            os << "\n";
        };
        line(columns_);
        for (const auto& r : rows_) line(r);
    }

private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct Outcome {
    std::string schema;
    Csv table;
    json diagnostics = json::object();
    bool converged = true;
    bool valid = true;
};

std::vector<double> make_grid(double lo, double hi, double step, const char* name) {
    if (!(step > 0) || !(hi >= lo)) throw ConfigError(std::string("empty or malformed ") + name + " grid");
    std::vector<double> out;
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
}

long long flag(bool b) { return b ? 1 : 0; }

// ---------------------------------------------------------------------------------------------

Outcome run_monopolist(const Settings& s) {
    const auto pop = s.population();
    const auto opt = analytic::monopolist_optimum(pop);
    const Market market{{Firm{opt.offer()}}, pop};
    const auto numeric = solver::best_response(0, market, solver::StrategySpace::full(pop));

    Outcome o{"monopolist", Csv{{"alpha", "p_max", "q_star", "p_star", "x_star", "q_solver", "p_solver", "x_solver"}}};
    o.table.add({pop.alpha, pop.p_max, opt.q_star, opt.p_star, opt.x_star, numeric.offer.quality, numeric.offer.price,
                 numeric.profit});
    o.diagnostics["solver_status"] = numeric.status == solver::ResponseStatus::optimal ? "optimal" : "no_profitable_point";
    return o;
}

Outcome run_nash(const Settings& s) {
    if (s.firms < 1) throw ConfigError("--firms must be >= 1");
    const auto n = static_cast<std::size_t>(s.firms);
    auto lambdas = s.lambdas.empty() ? std::vector<double>(n, 1.0) : s.lambdas;
    auto etas = s.etas.empty() ? std::vector<double>(n, 1.0) : s.etas;
    if (lambdas.size() != n || etas.size() != n) throw ConfigError("--lambda and --eta need one value per firm");
    const auto pop = s.population();

    bool symmetric = s.firms >= 2;
    for (std::size_t i = 0; i < n; ++i) symmetric = symmetric && lambdas[i] == lambdas[0] && etas[i] == 1.0;
    std::string method = s.method;
    if (method == "auto") method = symmetric ? "analytic" : "numeric";
    if (method != "analytic" && method != "numeric") throw ConfigError("--method must be auto, analytic or numeric");
    if (method == "analytic" && !symmetric)
        throw ConfigError("the closed form needs >= 2 identical firms with eta = 1; use --method numeric");

    Outcome o{"nash", Csv{{"alpha", "p_max", "n", "firm", "lambda", "eta", "q_nash", "p_nash", "x_nash", "rho", "xi",
                           "marginal", "method", "converged", "iterations", "residual"}}};
    const auto mono = analytic::monopolist_optimum(pop);
    const double total = [&] {
        double t = 0;
        for (double l : lambdas) t += l;
        return t;
    }();

    if (method == "analytic") {
        const auto eq = analytic::nash_symmetric(s.firms, pop);
        for (std::size_t i = 0; i < n; ++i)
            o.table.add({pop.alpha, pop.p_max, static_cast<long long>(n), static_cast<long long>(i), lambdas[i], 1.0,
                         eq.q_nash, eq.p_nash, eq.x_nash, eq.quality_ratio, eq.profit_ratio, eq.marginal,
                         std::string("analytic"), 1LL, 0LL, 0.0});
        return o;
    }

    Market market;
    try {
        market = solver::market_at_monopolist(pop, lambdas, etas);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    std::vector<solver::StrategySpace> spaces;
    for (std::size_t i = 0; i < n; ++i) spaces.push_back(solver::StrategySpace::full(pop, etas[i]));
    const auto eq = solver::find_nash(market, spaces, s.nash_options());
    o.converged = eq.converged;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& offer = eq.offers[i];
        const double rho = mono.q_star > 0 ? offer.quality / mono.q_star : NAN;
        o.table.add({pop.alpha, pop.p_max, static_cast<long long>(n), static_cast<long long>(i), lambdas[i], etas[i],
                     offer.quality, offer.price, eq.profits[i], rho, eq.profits[i] / (lambdas[i] / total * mono.x_star),
                     offer.price - etas[i] * offer.quality, std::string("numeric"), flag(eq.converged),
                     static_cast<long long>(eq.iterations), eq.residual});
    }
    o.diagnostics["iterations"] = eq.iterations;
    o.diagnostics["residual"] = eq.residual;
    o.diagnostics["final_damping"] = eq.final_damping;
    return o;
}

// ---------------------------------------------------------------------------------------------

Outcome figure_acceptance_curves(const Settings& s) {
    Outcome o{"fig1", Csv{{"panel", "alpha", "q", "p", "p_max", "acceptance"}}};
    const double p_max = 2.0;
    for (double a : s.curve_alphas) {
        const auto fig_pop = [&] {
            try {
                return ConsumerPopulation{a, p_max};
            } catch (const std::domain_error& e) {
                throw ConfigError(e.what());
            }
        }();
        for (int k = 0; k <= 100; ++k) {
            const double q = k / 100.0;
            o.table.add({std::string("a"), a, q, 1.0, p_max, model::acceptance_probability({q, 1.0}, fig_pop)});
        }
        for (int k = 0; k <= 100; ++k) {
            const double p = 1.0 + k / 100.0;
            o.table.add({std::string("b"), a, 1.0, p, p_max, model::acceptance_probability({1.0, p}, fig_pop)});
        }
    }
    o.diagnostics["panel_a"] = "p = 1, p_max = 2, Q in [0, 1]";
    o.diagnostics["panel_b"] = "Q = 1, p_max = 2, p in [1, 2]";
    return o;
}

Outcome figure_n_firms(const Settings& s) {
    Outcome o{"fig2", Csv{{"alpha", "n", "q_nash", "p_nash", "x_nash", "rho", "xi", "marginal"}}};
    for (double a : make_grid(s.alpha_min, s.alpha_max, s.alpha_step, "alpha")) {
        const auto pop = s.population(a);
        for (int n : {2, 3, 5, 10}) {
            const auto eq = analytic::nash_symmetric(n, pop);
            o.table.add({a, std::to_string(n), eq.q_nash, eq.p_nash, eq.x_nash, eq.quality_ratio, eq.profit_ratio,
                         eq.marginal});
        }
        o.table.add({a, std::string("inf"), analytic::nash_quality_many_firms(pop), analytic::nash_price_many_firms(pop),
                     0.0, analytic::quality_ratio_many_firms(a), analytic::profit_ratio_many_firms(a),
                     analytic::marginal_profit_many_firms(pop)});
    }
    o.diagnostics["xi_limit_n2"] = analytic::profit_ratio_experienced_limit(2);
    o.diagnostics["xi_limit_double"] = analytic::profit_ratio_double_limit();
    return o;
}

Outcome figure_strategies(const Settings& s) {
    Outcome o{"fig3", Csv{{"alpha", "xi_do_nothing", "xi_quality_only", "xi_price_only", "xi_both", "converged"}}};
    const auto rows = solver::scenario_price_competition(s.population(),
                                                         make_grid(s.alpha_min, s.alpha_max, s.alpha_step, "alpha"),
                                                         s.nash_options());
    json inversions = json::array();
    for (const auto& r : rows) {
        o.table.add({r.alpha, r.do_nothing, r.quality_only, r.price_only, r.both, flag(r.converged)});
        o.converged = o.converged && r.converged;
        if (r.both < r.price_only) inversions.push_back({{"alpha", r.alpha}, {"both_minus_price_only", r.both - r.price_only}});
    }
    o.diagnostics["both_below_price_only"] = inversions;
    return o;
}

Outcome figure_farsighted(const Settings& s) {
    Outcome o{"fig4", Csv{{"tau", "xi_farsighted", "xi_optimizing", "xi_vs_nash", "xi_nash", "tau_star"}}};
    const auto sweep = solver::farsighted_sweep(s.population(), make_grid(s.tau_min, s.tau_max, s.tau_step, "tau"));
    for (const auto& r : sweep.rows)
        o.table.add({r.tau, r.xi_farsighted, r.xi_optimizing, r.xi_vs_nash, sweep.xi_nash, sweep.tau_star});
    o.diagnostics["tau_star"] = sweep.tau_star;
    o.diagnostics["tau_star_refined"] = sweep.tau_star_refined;
    o.diagnostics["xi_star"] = sweep.xi_star;
    o.diagnostics["xi_nash"] = sweep.xi_nash;
    o.diagnostics["tau_star_vs_nash"] = sweep.tau_star_vs_nash;
    return o;
}

Outcome figure_sizes(const Settings& s) {
    Outcome o{"fig5", Csv{{"panel", "mode", "alpha", "lambda", "xi_small", "xi_big", "xi_reference", "converged"}}};
    const auto options = s.nash_options();
    const std::vector modes{solver::SmallFirmMode::quality, solver::SmallFirmMode::price, solver::SmallFirmMode::both};

    struct Job {
        std::string panel;
        solver::SmallFirmMode mode;
        double alpha;
        double lambda;
    };
    std::vector<Job> jobs;
    for (auto mode : modes)
        for (double l : make_grid(s.lambda_min, s.lambda_max, s.lambda_step, "lambda")) jobs.push_back({"a", mode, s.alpha, l});
    for (auto mode : modes)
        for (double a : make_grid(s.alpha_min, s.alpha_max, s.alpha_step, "alpha")) jobs.push_back({"b", mode, a, s.small_lambda});
    for (const auto& j : jobs)
        if (!(j.lambda > 0 && j.lambda < 1)) throw ConfigError("lambda values must lie in (0, 1)");

    const auto results = solver::parallel_map<solver::EquilibriumResult>(jobs.size(), [&](std::size_t k) {
        return solver::size_asymmetric_equilibrium(jobs[k].lambda, s.population(jobs[k].alpha), jobs[k].mode, options);
    });
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const auto& j = jobs[k];
        const auto& r = results[k];
        Csv::Cell reference = std::string();
        if (j.panel == "b" && j.mode == solver::SmallFirmMode::both)
            reference = analytic::small_firm_optimum(s.population(j.alpha)).xi_s;
        o.table.add({j.panel, solver::to_string(j.mode), j.alpha, j.lambda, r.profit_ratios[0], r.profit_ratios[1],
                     reference, flag(r.converged)});
        o.converged = o.converged && r.converged;
    }

    json thresholds = json::object();
    for (auto mode : modes) {
        const auto t = solver::small_firm_threshold(s.population(), mode, 1e-3, 0.01, 0.5, options);
        thresholds[solver::to_string(mode)] = t ? json(*t) : json(nullptr);
    }
    o.diagnostics["threshold_alpha"] = s.alpha;
    o.diagnostics["thresholds"] = thresholds;
    return o;
}

Outcome figure_efficiency(const Settings& s) {
    Outcome o{"fig6", Csv{{"alpha", "eta1", "q1", "p1", "q2", "p2", "xi1", "xi2", "aggregate_ratio", "clamped1",
                           "converged"}}};
    struct Job {
        double alpha;
        double eta;
    };
    std::vector<Job> jobs;
    for (double a : s.efficiency_alphas)
        for (double e : make_grid(s.eta_min, s.eta_max, s.eta_step, "eta")) {
            if (!(e > 0 && e <= 1 + 1e-12)) throw ConfigError("eta values must lie in (0, 1]");
            jobs.push_back({a, std::min(e, 1.0)});
        }
    const auto options = s.nash_options();
    const auto results = solver::parallel_map<solver::EquilibriumResult>(jobs.size(), [&](std::size_t k) {
        return solver::efficiency_equilibrium(jobs[k].eta, s.population(jobs[k].alpha), options);
    });
    int clamped = 0;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const auto& r = results[k];
        o.table.add({jobs[k].alpha, jobs[k].eta, r.offers[0].quality, r.offers[0].price, r.offers[1].quality,
                     r.offers[1].price, r.profit_ratios[0], r.profit_ratios[1],
                     (r.profit_ratios[0] + r.profit_ratios[1]) / 2, flag(r.clamped[0]), flag(r.converged)});
        o.converged = o.converged && r.converged;
        clamped += r.clamped[0] ? 1 : 0;
    }
    o.diagnostics["clamped_points"] = clamped;
    o.diagnostics["eta_grid"] = {s.eta_min, s.eta_max, s.eta_step};
    o.diagnostics["alphas"] = s.efficiency_alphas;
    return o;
}

Outcome figure_gaussian(const Settings& s) {
    Outcome o{"fig7", Csv{{"panel", "curve", "parameter", "q", "p", "acceptance"}}};
    const double p_max = 2.0;
    for (double sigma : s.sigmas) {
        if (!(sigma > 0)) throw ConfigError("sigma values must be > 0");
        for (int k = 1; k <= 200; ++k)
            o.table.add({std::string("main"), std::string("gaussian"), sigma, k / 100.0, 1.0,
                         model::gaussian_acceptance_probability({k / 100.0, 1.0}, sigma)});
        for (int k = 1; k <= 200; ++k)
            o.table.add({std::string("inset"), std::string("gaussian"), sigma, 1.0, k / 100.0,
                         model::gaussian_acceptance_probability({1.0, k / 100.0}, sigma)});
    }
    for (double a : {2.0, 4.0, 10.0}) {
        const ConsumerPopulation pop{a, p_max};
        for (int k = 1; k <= 200; ++k)
            o.table.add({std::string("main"), std::string("power"), a, k / 100.0, 1.0,
                         model::acceptance_probability({k / 100.0, 1.0}, pop)});
        for (int k = 1; k <= 200; ++k)
            o.table.add({std::string("inset"), std::string("power"), a, 1.0, k / 100.0,
                         model::acceptance_probability({1.0, k / 100.0}, pop)});
    }
    o.diagnostics["power_p_max"] = p_max;
    return o;
}

Outcome run_figure(const Settings& s) {
    if (s.figure == "fig1") return figure_acceptance_curves(s);
    if (s.figure == "fig2") return figure_n_firms(s);
    if (s.figure == "fig3") return figure_strategies(s);
    if (s.figure == "fig4") return figure_farsighted(s);
    if (s.figure == "fig5") return figure_sizes(s);
    if (s.figure == "fig6") return figure_efficiency(s);
    if (s.figure == "fig7") return figure_gaussian(s);
    throw UnknownScenario("unknown figure '" + s.figure + "' (expected fig1 ... fig7)");
}

// ---------------------------------------------------------------------------------------------

Outcome run_simulate(const Settings& s) {
    const auto pop = s.population();
    std::vector<Firm> firms;
    try {
        if (s.qualities.empty() && s.prices.empty()) {
            const auto nash = analytic::nash_symmetric(2, pop);
            firms = {Firm{nash.offer()}, Firm{nash.offer()}};
        } else {
            const auto n = s.qualities.size();
            if (s.prices.size() != n) throw ConfigError("--quality and --price need the same number of values");
            if (!s.lambdas.empty() && s.lambdas.size() != n) throw ConfigError("--lambda needs one value per firm");
            if (!s.etas.empty() && s.etas.size() != n) throw ConfigError("--eta needs one value per firm");
            for (std::size_t i = 0; i < n; ++i)
                firms.emplace_back(Offer{s.qualities[i], s.prices[i]}, s.lambdas.empty() ? 1.0 : s.lambdas[i],
                                   s.etas.empty() ? 1.0 : s.etas[i]);
        }
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    if (s.consumers < 1) throw ConfigError("--consumers must be >= 1");
    const Market market{firms, pop};
    const auto analytic_profit = model::per_consumer_profits(market);
    const auto report = montecarlo::simulate({market, s.consumers, s.seed});

    Outcome o{"simulate", Csv{{"firm", "quality", "price", "lambda", "eta", "units_sold", "revenue", "cost",
                               "profit_estimate", "standard_error", "analytic_profit", "z_score"}}};
    for (std::size_t i = 0; i < market.size(); ++i) {
        const auto& t = report.firms[i];
        const auto& f = market.firms[i];
        const double z = t.standard_error > 0 ? (t.profit_estimate - analytic_profit[i]) / t.standard_error : 0.0;
        o.table.add({static_cast<long long>(i), f.offer.quality, f.offer.price, f.size_weight, f.efficiency,
                     static_cast<long long>(t.units_sold), t.revenue, t.cost, t.profit_estimate, t.standard_error,
                     analytic_profit[i], z});
    }
    o.diagnostics["num_consumers"] = s.consumers;
    o.diagnostics["seed"] = s.seed;
    o.diagnostics["generator"] = "SplitMix64, counter-based: consumer k uses outputs 2k and 2k+1";
    return o;
}

Outcome run_validate(std::ostream& err) {
    Outcome o{"validate", Csv{{"suite", "check", "passed", "seconds", "detail"}}};
    auto record = [&](const std::string& suite, const std::vector<validation::CheckResult>& results) {
        for (const auto& r : results) {
            err << validation::format(r) << "\n";
            o.table.add({suite, r.name, flag(r.passed), r.seconds, r.detail});
            o.valid = o.valid && r.passed;
        }
    };
    record("acceptance", validation::run_acceptance_suite());
    record("invariants", validation::run_invariant_suite());
    return o;
}

// ---------------------------------------------------------------------------------------------

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::string sidecar_path(const Settings& s) {
    if (!s.meta.empty()) return s.meta;
    if (s.output.empty()) return {};
    std::filesystem::path p{s.output};
    p.replace_extension(".meta.json");
    return p.string();
}

json settings_json(const Settings& s) {
    return {{"alpha", s.alpha},
            {"p_max", s.p_max},
            {"solver", {{"damping", s.damping}, {"max_iterations", s.max_iterations}, {"tolerance", s.tolerance}}},
            {"firms", s.firms},
            {"lambda", s.lambdas},
            {"eta", s.etas},
            {"method", s.method},
            {"figure", s.figure},
            {"alpha_grid", {s.alpha_min, s.alpha_max, s.alpha_step}},
            {"tau_grid", {s.tau_min, s.tau_max, s.tau_step}},
            {"lambda_grid", {s.lambda_min, s.lambda_max, s.lambda_step}},
            {"small_lambda", s.small_lambda},
            {"eta_grid", {s.eta_min, s.eta_max, s.eta_step}},
            {"curve_alphas", s.curve_alphas},
            {"efficiency_alphas", s.efficiency_alphas},
            {"sigmas", s.sigmas},
            {"quality", s.qualities},
            {"price", s.prices},
            {"consumers", s.consumers},
            {"seed", s.seed}};
}

void add_solver_options(CLI::App& app, Settings& s) {
    app.add_option("--damping", s.damping, "Best-response damping in (0, 1]")->capture_default_str();
    app.add_option("--max-iterations", s.max_iterations, "Nash iteration cap")->capture_default_str();
    app.add_option("--tolerance", s.tolerance, "Convergence tolerance on offer changes, relative to p_max")
        ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Firm competition under probabilistic consumer choice", "firmcomp"};
    app.set_version_flag("--version", std::string(FIRMCOMP_VERSION));
    app.set_config("--config", "", "TOML configuration file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--alpha", s.alpha, "Consumer quality-assessment ability")->capture_default_str();
    app.add_option("--p-max", s.p_max, "Maximal affordable price")->capture_default_str();
    app.add_option("-o,--output", s.output, "CSV output file (default: standard output)");
    app.add_option("--meta", s.meta, "Metadata sidecar path (default: <output>.meta.json)");

    auto* monopolist = app.add_subcommand("monopolist", "Single-firm optimum, closed form and numeric");
    auto* nash = app.add_subcommand("nash", "Nash equilibrium of n firms");
    nash->add_option("--firms", s.firms, "Number of firms")->capture_default_str();
    nash->add_option("--lambda", s.lambdas, "Per-firm size weights");
    nash->add_option("--eta", s.etas, "Per-firm efficiencies");
    nash->add_option("--method", s.method, "auto | analytic | numeric")->capture_default_str();
    add_solver_options(*nash, s);

    auto* figure = app.add_subcommand("figure", "Data behind one of the figures fig1 ... fig7");
    figure->add_option("id", s.figure, "fig1 ... fig7")->required();
    figure->add_option("--alpha-min", s.alpha_min)->capture_default_str();
    figure->add_option("--alpha-max", s.alpha_max)->capture_default_str();
    figure->add_option("--alpha-step", s.alpha_step)->capture_default_str();
    figure->add_option("--tau-min", s.tau_min)->capture_default_str();
    figure->add_option("--tau-max", s.tau_max)->capture_default_str();
    figure->add_option("--tau-step", s.tau_step)->capture_default_str();
    figure->add_option("--lambda-min", s.lambda_min)->capture_default_str();
    figure->add_option("--lambda-max", s.lambda_max)->capture_default_str();
    figure->add_option("--lambda-step", s.lambda_step)->capture_default_str();
    figure->add_option("--small-lambda", s.small_lambda, "Small-firm weight for the lambda -> 0 panel")
        ->capture_default_str();
    figure->add_option("--eta-min", s.eta_min)->capture_default_str();
    figure->add_option("--eta-max", s.eta_max)->capture_default_str();
    figure->add_option("--eta-step", s.eta_step)->capture_default_str();
    figure->add_option("--curve-alphas", s.curve_alphas, "alpha values for fig1")->capture_default_str();
    figure->add_option("--efficiency-alphas", s.efficiency_alphas, "alpha values for fig6")->capture_default_str();
    figure->add_option("--sigmas", s.sigmas, "sigma values for fig7")->capture_default_str();
    add_solver_options(*figure, s);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of per-firm profit");
    simulate->add_option("--quality", s.qualities, "Per-firm quality");
    simulate->add_option("--price", s.prices, "Per-firm price");
    simulate->add_option("--lambda", s.lambdas, "Per-firm size weights");
    simulate->add_option("--eta", s.etas, "Per-firm efficiencies");
    simulate->add_option("--consumers", s.consumers, "Number of simulated consumers")->capture_default_str();
    simulate->add_option("--seed", s.seed, "Random seed")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Run every oracle check; exit 1 if any fails");

    std::vector<std::string> argv_storage{"firmcomp"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        const bool unknown_command = !args.empty() && !args.front().starts_with("-") &&
                                     !app.get_subcommands().size();
        err << "firmcomp: " << e.what() << "\n";
        return unknown_command ? unknown_scenario : bad_configuration;
    }

    const auto* chosen = app.get_subcommands().front();
    Outcome outcome{"", Csv{{}}};
    try {
        if (chosen == monopolist) outcome = run_monopolist(s);
        else if (chosen == nash) outcome = run_nash(s);
        else if (chosen == figure) outcome = run_figure(s);
        else if (chosen == simulate) outcome = run_simulate(s);
        else if (chosen == validate) outcome = run_validate(err);
    } catch (const UnknownScenario& e) {
        err << "firmcomp: " << e.what() << "\n";
        return unknown_scenario;
    } catch (const ConfigError& e) {
        err << "firmcomp: invalid configuration: " << e.what() << "\n";
        return bad_configuration;
    } catch (const std::domain_error& e) {
        err << "firmcomp: invalid configuration: " << e.what() << "\n";
        return bad_configuration;
    } catch (const AllWeightsZero& e) {
        err << "firmcomp: invalid configuration: " << e.what() << "\n";
        return bad_configuration;
    } catch (const std::invalid_argument& e) {
        err << "firmcomp: invalid configuration: " << e.what() << "\n";
        return bad_configuration;
    }

    if (s.output.empty()) {
        outcome.table.write(out);
    } else {
        std::ofstream file{s.output};
        if (!file) {
            err << "firmcomp: cannot write " << s.output << "\n";
            return bad_configuration;
        }
        outcome.table.write(file);
    }

    if (const auto meta = sidecar_path(s); !meta.empty()) {
        json doc = {{"tool", "firmcomp"},
                    {"version", FIRMCOMP_VERSION},
                    {"command", chosen->get_name()},
                    {"schema", {{"name", outcome.schema}, {"version", schema_version}, {"columns", outcome.table.columns()}}},
                    {"settings", settings_json(s)},
                    {"config", app.config_to_str(true, false)},
                    {"diagnostics", outcome.diagnostics},
                    {"converged", outcome.converged},
                    {"valid", outcome.valid},
                    {"generated_at", timestamp()}};
        std::ofstream file{meta};
        if (!file) {
            err << "firmcomp: cannot write " << meta << "\n";
            return bad_configuration;
        }
        file << doc.dump(2) << "\n";
    }

    if (!outcome.valid) {
        err << "firmcomp: validation failed\n";
        return validation_failed;
    }
    if (!outcome.converged) {
        err << "firmcomp: solver did not converge for at least one configuration\n";
        return not_converged;
    }
    return success;
}

}  // namespace firmcomp::cli
