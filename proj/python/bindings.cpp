#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "firmcomp/analytic.hpp"
#include "firmcomp/model.hpp"
#include "firmcomp/montecarlo.hpp"
#include "firmcomp/scenarios.hpp"
#include "firmcomp/solver.hpp"

namespace py = pybind11;
using namespace firmcomp;

PYBIND11_MODULE(_firmcomp, m) {
    m.doc() = "Firm competition under probabilistic consumer choice";
    m.attr("__version__") = FIRMCOMP_VERSION;

    py::register_exception<AllWeightsZero>(m, "AllWeightsZero", PyExc_RuntimeError);

    py::class_<ConsumerPopulation>(m, "ConsumerPopulation")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("p_max") = 1.0)
        .def_readonly("alpha", &ConsumerPopulation::alpha)
        .def_readonly("p_max", &ConsumerPopulation::p_max)
        .def("__repr__", [](const ConsumerPopulation& p) {
            return "ConsumerPopulation(alpha=" + std::to_string(p.alpha) + ", p_max=" + std::to_string(p.p_max) + ")";
        });

    py::class_<Offer>(m, "Offer")
        .def(py::init<double, double>(), py::arg("quality"), py::arg("price"))
        .def_readonly("quality", &Offer::quality)
        .def_readonly("price", &Offer::price)
        .def("__eq__", [](const Offer& a, const Offer& b) { return a == b; })
        .def("__iter__", [](const Offer& o) { return py::iter(py::make_tuple(o.quality, o.price)); })
        .def("__repr__", [](const Offer& o) {
            return "Offer(quality=" + std::to_string(o.quality) + ", price=" + std::to_string(o.price) + ")";
        });

    py::class_<Firm>(m, "Firm")
        .def(py::init<Offer, double, double>(), py::arg("offer"), py::arg("size_weight") = 1.0,
             py::arg("efficiency") = 1.0)
        .def_readonly("offer", &Firm::offer)
        .def_readonly("size_weight", &Firm::size_weight)
        .def_readonly("efficiency", &Firm::efficiency);

    py::class_<Market>(m, "Market")
        .def(py::init<std::vector<Firm>, ConsumerPopulation>(), py::arg("firms"), py::arg("population"))
        .def_readonly("firms", &Market::firms)
        .def_readonly("population", &Market::population)
        .def("__len__", &Market::size);

    m.def("acceptance_probability", &model::acceptance_probability, py::arg("offer"), py::arg("population"));
    m.def("selection_probabilities", &model::selection_probabilities, py::arg("market"));
    m.def("per_consumer_profit", &model::per_consumer_profit, py::arg("i"), py::arg("market"));
    m.def("per_consumer_profits", &model::per_consumer_profits, py::arg("market"));
    m.def("monopolist_profit", &model::monopolist_profit, py::arg("offer"), py::arg("population"),
          py::arg("efficiency") = 1.0);
    m.def("gaussian_acceptance_probability", &model::gaussian_acceptance_probability, py::arg("offer"),
          py::arg("sigma"));

    py::class_<analytic::MonopolistOptimum>(m, "MonopolistOptimum")
        .def_readonly("q_star", &analytic::MonopolistOptimum::q_star)
        .def_readonly("p_star", &analytic::MonopolistOptimum::p_star)
        .def_readonly("x_star", &analytic::MonopolistOptimum::x_star)
        .def_property_readonly("offer", &analytic::MonopolistOptimum::offer);
    py::class_<analytic::SymmetricNash>(m, "SymmetricNash")
        .def_readonly("n", &analytic::SymmetricNash::n)
        .def_readonly("q_nash", &analytic::SymmetricNash::q_nash)
        .def_readonly("p_nash", &analytic::SymmetricNash::p_nash)
        .def_readonly("x_nash", &analytic::SymmetricNash::x_nash)
        .def_readonly("quality_ratio", &analytic::SymmetricNash::quality_ratio)
        .def_readonly("profit_ratio", &analytic::SymmetricNash::profit_ratio)
        .def_readonly("marginal", &analytic::SymmetricNash::marginal)
        .def_property_readonly("offer", &analytic::SymmetricNash::offer);
    py::class_<analytic::SmallFirmOptimum>(m, "SmallFirmOptimum")
        .def_readonly("q_s", &analytic::SmallFirmOptimum::q_s)
        .def_readonly("p_s", &analytic::SmallFirmOptimum::p_s)
        .def_readonly("xi_s", &analytic::SmallFirmOptimum::xi_s)
        .def_readonly("beta", &analytic::SmallFirmOptimum::beta)
        .def_property_readonly("offer", &analytic::SmallFirmOptimum::offer);

    m.def("monopolist_optimum", &analytic::monopolist_optimum, py::arg("population"));
    m.def("nash_symmetric", &analytic::nash_symmetric, py::arg("n"), py::arg("population"));
    m.def("quality_ratio", &analytic::quality_ratio, py::arg("n"), py::arg("alpha"));
    m.def("profit_ratio", &analytic::profit_ratio, py::arg("n"), py::arg("alpha"));
    m.def("small_firm_optimum", &analytic::small_firm_optimum, py::arg("population"));
    m.def("farsighted_offer", &analytic::farsighted_offer, py::arg("tau"), py::arg("population"));

    py::class_<solver::Interval>(m, "Interval")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &solver::Interval::lo)
        .def_readwrite("hi", &solver::Interval::hi);
    py::class_<solver::StrategySpace>(m, "StrategySpace")
        .def_readwrite("free_quality", &solver::StrategySpace::free_quality)
        .def_readwrite("free_price", &solver::StrategySpace::free_price)
        .def_readwrite("quality", &solver::StrategySpace::quality)
        .def_readwrite("price", &solver::StrategySpace::price)
        .def_static("full", &solver::StrategySpace::full, py::arg("population"), py::arg("efficiency") = 1.0)
        .def_static("price_only", &solver::StrategySpace::price_only, py::arg("population"),
                    py::arg("efficiency") = 1.0)
        .def_static("quality_only", &solver::StrategySpace::quality_only, py::arg("population"),
                    py::arg("efficiency") = 1.0)
        .def_static("fixed", &solver::StrategySpace::fixed, py::arg("population"), py::arg("efficiency") = 1.0);

    py::enum_<solver::ResponseStatus>(m, "ResponseStatus")
        .value("optimal", solver::ResponseStatus::optimal)
        .value("no_profitable_point", solver::ResponseStatus::no_profitable_point);
    py::class_<solver::BestResponse>(m, "BestResponse")
        .def_readonly("offer", &solver::BestResponse::offer)
        .def_readonly("profit", &solver::BestResponse::profit)
        .def_readonly("status", &solver::BestResponse::status)
        .def_readonly("clamped", &solver::BestResponse::clamped);

    py::class_<solver::NashOptions>(m, "NashOptions")
        .def(py::init<>())
        .def_readwrite("damping", &solver::NashOptions::damping)
        .def_readwrite("max_iterations", &solver::NashOptions::max_iterations)
        .def_readwrite("tolerance", &solver::NashOptions::tolerance)
        .def_readwrite("fd_step", &solver::NashOptions::fd_step)
        .def_readwrite("oscillation_window", &solver::NashOptions::oscillation_window);
    py::class_<solver::EquilibriumResult>(m, "EquilibriumResult")
        .def_readonly("offers", &solver::EquilibriumResult::offers)
        .def_readonly("profits", &solver::EquilibriumResult::profits)
        .def_readonly("profit_ratios", &solver::EquilibriumResult::profit_ratios)
        .def_readonly("iterations", &solver::EquilibriumResult::iterations)
        .def_readonly("residual", &solver::EquilibriumResult::residual)
        .def_readonly("converged", &solver::EquilibriumResult::converged)
        .def_readonly("final_damping", &solver::EquilibriumResult::final_damping)
        .def_readonly("clamped", &solver::EquilibriumResult::clamped)
        .def_readonly("market", &solver::EquilibriumResult::market);

    m.def("best_response", &solver::best_response, py::arg("i"), py::arg("market"), py::arg("space"));
    m.def("find_nash", &solver::find_nash, py::arg("market"), py::arg("spaces"),
          py::arg("options") = solver::NashOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("market_at_monopolist", &solver::market_at_monopolist, py::arg("population"), py::arg("size_weights"),
          py::arg("efficiencies") = std::vector<double>{});

    py::enum_<solver::SmallFirmMode>(m, "SmallFirmMode")
        .value("quality", solver::SmallFirmMode::quality)
        .value("price", solver::SmallFirmMode::price)
        .value("both", solver::SmallFirmMode::both);
    m.def("size_asymmetric_equilibrium", &solver::size_asymmetric_equilibrium, py::arg("lam"), py::arg("population"),
          py::arg("mode") = solver::SmallFirmMode::both, py::arg("options") = solver::NashOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("efficiency_equilibrium", &solver::efficiency_equilibrium, py::arg("eta1"), py::arg("population"),
          py::arg("options") = solver::NashOptions{}, py::call_guard<py::gil_scoped_release>());

    py::class_<montecarlo::FirmTally>(m, "FirmTally")
        .def_readonly("units_sold", &montecarlo::FirmTally::units_sold)
        .def_readonly("revenue", &montecarlo::FirmTally::revenue)
        .def_readonly("cost", &montecarlo::FirmTally::cost)
        .def_readonly("profit_estimate", &montecarlo::FirmTally::profit_estimate)
        .def_readonly("standard_error", &montecarlo::FirmTally::standard_error);
    py::class_<montecarlo::SimulationReport>(m, "SimulationReport")
        .def_readonly("firms", &montecarlo::SimulationReport::firms)
        .def_readonly("num_consumers", &montecarlo::SimulationReport::num_consumers)
        .def_property_readonly("total_units", &montecarlo::SimulationReport::total_units);
    m.def(
        "simulate",
        [](const Market& market, std::uint64_t num_consumers, std::uint64_t seed) {
            py::gil_scoped_release release;
            return montecarlo::simulate({market, num_consumers, seed});
        },
        py::arg("market"), py::arg("num_consumers"), py::arg("seed") = 0);
}
