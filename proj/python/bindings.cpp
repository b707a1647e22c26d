#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hopfdual/analysis.hpp"
#include "hopfdual/bifurcation.hpp"
#include "hopfdual/dde.hpp"
#include "hopfdual/errors.hpp"
#include "hopfdual/hopf.hpp"
#include "hopfdual/model.hpp"
#include "hopfdual/verify.hpp"

namespace py = pybind11;
using namespace hopfdual;

namespace {

py::array_t<double> to_array(std::span<const double> values) {
    py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

template <typename E>
void bind_enum_str(py::enum_<E>& e) {
    e.def_property_readonly("label", [](E v) { return std::string(to_string(v)); });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hopf bifurcation analysis of the delayed fair-dual price equation";

    static py::exception<Error> base(m, "HopfdualError", PyExc_RuntimeError);
    static py::exception<PositivityLossError> positivity(m, "PositivityLossError", base.ptr());
    static py::exception<DegenerateBifurcationError> degenerate(m, "DegenerateBifurcationError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const PositivityLossError& e) {
            py::object exc = py::reinterpret_borrow<py::object>(positivity)(e.what());
            exc.attr("time") = e.time();
            PyErr_SetObject(positivity.ptr(), exc.ptr());
        } catch (const DegenerateBifurcationError& e) {
            py::set_error(degenerate, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    py::class_<DemandFunction>(m, "DemandFunction")
        .def_static("reciprocal", &DemandFunction::reciprocal, py::arg("w") = 1.0)
        .def_static("power_law", &DemandFunction::power_law, py::arg("w"), py::arg("alpha"))
        .def_static("numeric", &DemandFunction::numeric, py::arg("name"), py::arg("fn"), py::arg("lo"),
                    py::arg("hi"))
        .def("__call__", &DemandFunction::operator())
        .def("derivative", &DemandFunction::derivative, py::arg("p"), py::arg("order"))
        .def_property_readonly("name", &DemandFunction::name)
        .def_property_readonly("domain", [](const DemandFunction& d) {
            return py::make_tuple(d.domain_lo(), d.domain_hi());
        })
        .def("__repr__", [](const DemandFunction& d) { return "<DemandFunction " + d.name() + ">"; });

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init([](double k, double c, double tau, const DemandFunction& demand) {
                 ModelConfig cfg{k, c, tau, demand};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("k") = 0.01, py::arg("c") = 50.0, py::arg("tau") = 0.0,
             py::arg("demand") = DemandFunction::reciprocal())
        .def_readonly("k", &ModelConfig::k)
        .def_readonly("c", &ModelConfig::c)
        .def_readonly("tau", &ModelConfig::tau)
        .def_readonly("demand", &ModelConfig::demand)
        .def("with_tau", &ModelConfig::with_tau);

    py::class_<Equilibrium>(m, "Equilibrium")
        .def_readonly("p_star", &Equilibrium::p_star)
        .def_readonly("residual", &Equilibrium::residual);

    py::class_<TaylorCoefficients>(m, "TaylorCoefficients")
        .def_readonly("p_star", &TaylorCoefficients::p_star)
        .def("__getitem__", [](const TaylorCoefficients& b, int i) { return b[i]; })
        .def("as_dict", [](const TaylorCoefficients& b) {
            py::dict d;
            for (int i = 1; i <= 9; ++i) {
                d[py::str("b" + std::to_string(i))] = b[i];
            }
            return d;
        });

    m.def("find_equilibrium", &find_equilibrium, py::arg("config"), py::arg("guess") = std::nullopt);
    m.def("taylor_coefficients", &taylor_coefficients, py::arg("config"), py::arg("equilibrium"));
    m.def("numeric_taylor_oracle", &numeric_taylor_oracle, py::arg("config"), py::arg("equilibrium"));

    auto stability = py::enum_<Stability>(m, "Stability")
                         .value("Stable", Stability::Stable)
                         .value("Critical", Stability::Critical)
                         .value("Unstable", Stability::Unstable);
    bind_enum_str(stability);

    py::class_<LinearAnalysis>(m, "LinearAnalysis")
        .def_readonly("b2", &LinearAnalysis::b2)
        .def_readonly("omega0", &LinearAnalysis::omega0)
        .def_readonly("tau0", &LinearAnalysis::tau0)
        .def_readonly("tau_c", &LinearAnalysis::tau_c)
        .def_readonly("transversality", &LinearAnalysis::transversality);

    py::class_<ComplexRoot>(m, "ComplexRoot")
        .def_readonly("re", &ComplexRoot::re)
        .def_readonly("im", &ComplexRoot::im)
        .def_readonly("residual", &ComplexRoot::residual)
        .def_property_readonly("value", &ComplexRoot::value);

    m.def("linear_analysis", &linear_analysis, py::arg("coeffs"), py::arg("n_critical") = 3);
    m.def("is_locally_stable", &is_locally_stable, py::arg("analysis"), py::arg("tau"));
    m.def("rightmost_root", &rightmost_root, py::arg("coeffs"), py::arg("tau"));

    py::class_<U1Harmonics>(m, "U1Harmonics")
        .def_readonly("C1", &U1Harmonics::C1)
        .def_readonly("D1", &U1Harmonics::D1)
        .def_readonly("E1", &U1Harmonics::E1);
    py::class_<Q1Harmonics>(m, "Q1Harmonics")
        .def_readonly("A", &Q1Harmonics::A)
        .def_readonly("B", &Q1Harmonics::B)
        .def_readonly("C", &Q1Harmonics::C)
        .def_readonly("D", &Q1Harmonics::D)
        .def_readonly("E", &Q1Harmonics::E);

    py::class_<HopfExpansion>(m, "HopfExpansion")
        .def_readonly("p_star", &HopfExpansion::p_star)
        .def_readonly("omega0", &HopfExpansion::omega0)
        .def_readonly("tau0", &HopfExpansion::tau0)
        .def_readonly("omega2", &HopfExpansion::omega2)
        .def_readonly("tau2", &HopfExpansion::tau2)
        .def_readonly("eta2", &HopfExpansion::eta2)
        .def_readonly("u1", &HopfExpansion::u1)
        .def_readonly("q1", &HopfExpansion::q1)
        .def_readonly("degenerate", &HopfExpansion::degenerate);

    auto direction = py::enum_<Direction>(m, "Direction")
                         .value("Supercritical", Direction::Supercritical)
                         .value("Subcritical", Direction::Subcritical);
    bind_enum_str(direction);
    auto cycle_stability = py::enum_<CycleStability>(m, "CycleStability")
                               .value("Stable", CycleStability::Stable)
                               .value("Unstable", CycleStability::Unstable);
    bind_enum_str(cycle_stability);
    auto trend = py::enum_<PeriodTrend>(m, "PeriodTrend")
                     .value("Increasing", PeriodTrend::Increasing)
                     .value("Decreasing", PeriodTrend::Decreasing);
    bind_enum_str(trend);

    py::class_<BifurcationClass>(m, "BifurcationClass")
        .def_readonly("direction", &BifurcationClass::direction)
        .def_readonly("cycle_stability", &BifurcationClass::cycle_stability)
        .def_readonly("period_trend", &BifurcationClass::period_trend);

    py::class_<CyclePrediction>(m, "CyclePrediction")
        .def_readonly("tau", &CyclePrediction::tau)
        .def_readonly("p_star", &CyclePrediction::p_star)
        .def_readonly("epsilon", &CyclePrediction::epsilon)
        .def_readonly("amplitude", &CyclePrediction::amplitude)
        .def_readonly("omega", &CyclePrediction::omega)
        .def_readonly("period", &CyclePrediction::period)
        .def_readonly("mean_offset", &CyclePrediction::mean_offset)
        .def_readonly("floquet", &CyclePrediction::floquet)
        .def_readonly("warning", &CyclePrediction::warning)
        .def("sample", &CyclePrediction::sample, py::arg("t"))
        .def("period_mean", &CyclePrediction::period_mean);

    m.def("hopf_expansion", &hopf_expansion, py::arg("coeffs"), py::arg("analysis"));
    m.def("classify", &classify, py::arg("expansion"));
    m.def("predicted_cycle", &predicted_cycle, py::arg("expansion"), py::arg("tau"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("t0", &Trajectory::t0)
        .def_property_readonly("step", &Trajectory::step)
        .def_property_readonly("t_end", &Trajectory::t_end)
        .def("__len__", &Trajectory::size)
        .def_property_readonly("times", [](const Trajectory& t) {
            py::array_t<double> out(static_cast<py::ssize_t>(t.size()));
            for (std::size_t i = 0; i < t.size(); ++i) {
                out.mutable_data()[i] = t.time(i);
            }
            return out;
        })
        .def_property_readonly("values", [](const Trajectory& t) { return to_array(t.values()); })
        .def_property_readonly("derivatives", [](const Trajectory& t) { return to_array(t.derivatives()); })
        .def("at", &Trajectory::at, py::arg("t"))
        .def("to_csv", [](const Trajectory& t) {
            std::ostringstream os;
            t.write_csv(os);
            return os.str();
        });

    py::class_<HistoryFunction>(m, "HistoryFunction")
        .def_static("constant", &HistoryFunction::constant, py::arg("p0"))
        .def_static("from_trajectory_tail", &HistoryFunction::from_trajectory_tail, py::arg("trajectory"),
                    py::arg("tau"))
        .def("__call__", &HistoryFunction::operator());

    m.def("default_step", &default_step, py::arg("tau"), py::arg("omega0"));
    m.def("default_history", &default_history, py::arg("p_star"));
    m.def("simulate", &simulate, py::arg("config"), py::arg("history"), py::arg("t_end"), py::arg("step"),
          py::call_guard<py::gil_scoped_release>());

    auto regime = py::enum_<Regime>(m, "Regime")
                      .value("Equilibrium", Regime::Equilibrium)
                      .value("LimitCycle", Regime::LimitCycle)
                      .value("Undetermined", Regime::Undetermined);
    bind_enum_str(regime);

    py::class_<CycleEstimate>(m, "CycleEstimate")
        .def_readonly("amplitude", &CycleEstimate::amplitude)
        .def_readonly("period", &CycleEstimate::period)
        .def_readonly("mean", &CycleEstimate::mean)
        .def_readonly("regime", &CycleEstimate::regime)
        .def_readonly("transient_end", &CycleEstimate::transient_end)
        .def_readonly("max_excursion", &CycleEstimate::max_excursion)
        .def_readonly("cycles", &CycleEstimate::cycles);

    py::class_<EstimatorSettings>(m, "EstimatorSettings")
        .def(py::init<>())
        .def_readwrite("transient_fraction", &EstimatorSettings::transient_fraction)
        .def_readwrite("equilibrium_threshold", &EstimatorSettings::equilibrium_threshold)
        .def_readwrite("min_cycles", &EstimatorSettings::min_cycles);

    m.def("estimate_cycle", &estimate_cycle, py::arg("trajectory"), py::arg("p_star"),
          py::arg("settings") = EstimatorSettings{});

    py::class_<PredictionErrors>(m, "PredictionErrors")
        .def_readonly("amplitude", &PredictionErrors::amplitude)
        .def_readonly("period", &PredictionErrors::period)
        .def_readonly("mean_offset", &PredictionErrors::mean_offset);

    py::class_<SimulationSettings>(m, "SimulationSettings")
        .def(py::init([](double step, double t_end, std::optional<double> history_p0) {
                 SimulationSettings s;
                 s.step = step;
                 s.t_end = t_end;
                 s.history_p0 = history_p0;
                 return s;
             }),
             py::arg("step") = 0.0, py::arg("t_end") = 5000.0, py::arg("history_p0") = std::nullopt)
        .def_readwrite("step", &SimulationSettings::step)
        .def_readwrite("t_end", &SimulationSettings::t_end)
        .def_readwrite("history_p0", &SimulationSettings::history_p0)
        .def_readwrite("estimator", &SimulationSettings::estimator);

    py::class_<DiagramRow>(m, "DiagramRow")
        .def_readonly("tau", &DiagramRow::tau)
        .def_readonly("measured", &DiagramRow::measured)
        .def_readonly("predicted", &DiagramRow::predicted)
        .def_readonly("errors", &DiagramRow::errors)
        .def_readonly("status", &DiagramRow::status)
        .def_property_readonly("ok", &DiagramRow::ok);

    m.def(
        "sweep",
        [](const ModelConfig& config, const std::vector<double>& taus, const SimulationSettings& sim,
           unsigned threads) { return sweep(config, taus, sim, threads); },
        py::arg("config"), py::arg("taus"), py::arg("settings") = SimulationSettings{}, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());

    m.def("diagram_csv", [](const std::vector<DiagramRow>& rows) {
        std::ostringstream os;
        write_diagram_csv(rows, os);
        return os.str();
    });

    py::class_<LinearFit>(m, "LinearFit")
        .def_readonly("slope", &LinearFit::slope)
        .def_readonly("intercept", &LinearFit::intercept)
        .def_readonly("r_squared", &LinearFit::r_squared)
        .def_readonly("points", &LinearFit::points);
    m.def("fit_square_root_law", [](const std::vector<DiagramRow>& rows, double tau0) {
        return fit_square_root_law(rows, tau0);
    });

    auto check_status = py::enum_<CheckStatus>(m, "CheckStatus")
                            .value("Match", CheckStatus::Match)
                            .value("PaperConvention", CheckStatus::PaperConvention)
                            .value("Mismatch", CheckStatus::Mismatch);
    bind_enum_str(check_status);

    py::class_<CoefficientCheck>(m, "CoefficientCheck")
        .def_readonly("index", &CoefficientCheck::index)
        .def_readonly("closed_form", &CoefficientCheck::closed_form)
        .def_readonly("oracle", &CoefficientCheck::oracle)
        .def_readonly("rel_diff", &CoefficientCheck::rel_diff)
        .def_readonly("ratio", &CoefficientCheck::ratio)
        .def_readonly("status", &CoefficientCheck::status);
    m.def("verify_coefficients", &verify_coefficients, py::arg("config"));
}
