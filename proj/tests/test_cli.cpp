#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace firmcomp;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in{text};
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "firmcomp_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("two-firm Nash from flags") {
    const auto r = run({"nash", "--firms", "2", "--alpha", "1", "--p-max", "1"});
    REQUIRE(r.code == cli::success);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "alpha,p_max,n,firm,lambda,eta,q_nash,p_nash,x_nash,rho,xi,marginal,method,converged,iterations,"
                     "residual");
    CHECK(rows[1].rfind("1,1,2,0,1,1,0.24,0.4,", 0) == 0);
}

TEST_CASE("numeric Nash with unequal sizes") {
    const auto r = run({"nash", "--alpha", "2", "--lambda", "1", "3"});
    REQUIRE(r.code == cli::success);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].find(",numeric,1,") != std::string::npos);
}

TEST_CASE("analytic method needs identical firms") {
    CHECK(run({"nash", "--method", "analytic", "--lambda", "1", "2"}).code == cli::bad_configuration);
    CHECK(run({"nash", "--method", "sideways"}).code == cli::bad_configuration);
}

TEST_CASE("monopolist") {
    const auto r = run({"monopolist", "--alpha", "1", "--p-max", "2"});
    REQUIRE(r.code == cli::success);
    CHECK(lines(r.out)[1].rfind("1,2,0.5,1,0.125,", 0) == 0);
}

TEST_CASE("exit codes for bad input") {
    CHECK(run({"figure", "fig8"}).code == cli::unknown_scenario);
    CHECK(run({"teleport"}).code == cli::unknown_scenario);
    CHECK(run({}).code == cli::bad_configuration);
    CHECK(run({"--alpha", "-1", "monopolist"}).code == cli::bad_configuration);
    CHECK(run({"--alpha", "abc", "monopolist"}).code == cli::bad_configuration);
    CHECK(run({"figure", "fig3", "--alpha-step", "0"}).code == cli::bad_configuration);
    CHECK(run({"--config", scratch("missing.toml").string(), "monopolist"}).code == cli::bad_configuration);
    const auto r = run({"figure", "fig9"});
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == cli::success);
    CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("non-convergence exits with 2") {
    const auto r = run({"nash", "--alpha", "2", "--method", "numeric", "--max-iterations", "2"});
    CHECK(r.code == cli::not_converged);
    CHECK(lines(r.out).size() == 3);
}

TEST_CASE("config file with flag overrides") {
    const auto config = scratch("run.toml");
    std::ofstream{config} << "alpha = 4\n[nash]\nfirms = 3\n";
    const auto from_file = lines(run({"--config", config.string(), "nash"}).out);
    CHECK(from_file.size() == 4);
    CHECK(from_file[1].rfind("4,1,3,", 0) == 0);
    const auto overridden = lines(run({"--config", config.string(), "nash", "--alpha", "1"}).out);
    CHECK(overridden[1].rfind("1,1,3,", 0) == 0);
}

TEST_CASE("output file and metadata sidecar") {
    const auto csv = scratch("fig4.csv");
    fs::remove(csv);
    fs::remove(scratch("fig4.meta.json"));
    const auto r = run({"figure", "fig4", "--alpha", "2", "-o", csv.string()});
    REQUIRE(r.code == cli::success);
    CHECK(r.out.empty());
    std::ifstream in{csv};
    std::string header;
    std::getline(in, header);
    CHECK(header == "tau,xi_farsighted,xi_optimizing,xi_vs_nash,xi_nash,tau_star");
    std::string row;
    std::getline(in, row);
    const double tau_star = std::stod(row.substr(row.rfind(',') + 1));
    CHECK(std::abs(tau_star - 0.92) <= 0.01);

    const auto meta = nlohmann::json::parse(std::ifstream{scratch("fig4.meta.json")});
    CHECK(meta["tool"] == "firmcomp");
    CHECK(meta["command"] == "figure");
    CHECK(meta["schema"]["name"] == "fig4");
    CHECK(meta["schema"]["version"] == 1);
    CHECK(meta["schema"]["columns"].size() == 6);
    CHECK(meta["settings"]["alpha"] == 2.0);
    CHECK(meta["converged"] == true);
    CHECK(meta["diagnostics"].contains("tau_star_vs_nash"));
    CHECK(meta.contains("generated_at"));
}

TEST_CASE("figure CSVs are deterministic") {
    const auto a = run({"figure", "fig2", "--alpha-step", "0.5"});
    const auto b = run({"figure", "fig2", "--alpha-step", "0.5"});
    REQUIRE(a.code == cli::success);
    CHECK(a.out == b.out);
    const auto rows = lines(a.out);
    CHECK(rows[0] == "alpha,n,q_nash,p_nash,x_nash,rho,xi,marginal");
    CHECK(rows.size() == 1 + 21 * 5);
}

TEST_CASE("every figure has its documented header") {
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
        {{"figure", "fig1"}, "panel,alpha,q,p,p_max,acceptance"},
        {{"figure", "fig3", "--alpha-min", "1", "--alpha-max", "2", "--alpha-step", "0.5"},
         "alpha,xi_do_nothing,xi_quality_only,xi_price_only,xi_both,converged"},
        {{"figure", "fig5", "--lambda-min", "0.2", "--lambda-max", "0.4", "--lambda-step", "0.1", "--alpha-min", "1",
          "--alpha-max", "2", "--alpha-step", "1"},
         "panel,mode,alpha,lambda,xi_small,xi_big,xi_reference,converged"},
        {{"figure", "fig6", "--eta-min", "0.9", "--eta-step", "0.05", "--efficiency-alphas", "2"},
         "alpha,eta1,q1,p1,q2,p2,xi1,xi2,aggregate_ratio,clamped1,converged"},
        {{"figure", "fig7"}, "panel,curve,parameter,q,p,acceptance"},
    };
    for (const auto& [args, header] : cases) {
        const auto r = run(args);
        INFO(args[1]);
        CHECK(r.code == cli::success);
        CHECK(lines(r.out).at(0) == header);
    }
}

TEST_CASE("simulate") {
    const auto r = run({"simulate", "--alpha", "1", "--quality", "0.24", "0.24", "--price", "0.4", "0.4", "--consumers",
                        "100000", "--seed", "9"});
    REQUIRE(r.code == cli::success);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "firm,quality,price,lambda,eta,units_sold,revenue,cost,profit_estimate,standard_error,"
                     "analytic_profit,z_score");
    CHECK(run({"simulate", "--quality", "0.2", "--price", "0.4", "0.5"}).code == cli::bad_configuration);
    CHECK(run({"simulate", "--consumers", "0"}).code == cli::bad_configuration);
    CHECK(run({"simulate", "--quality", "0.2", "--price", "1.5"}).code == cli::bad_configuration);
}

}
