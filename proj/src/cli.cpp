#include "hopfdual/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "hopfdual/analysis.hpp"
#include "hopfdual/bifurcation.hpp"
#include "hopfdual/dde.hpp"
#include "hopfdual/errors.hpp"
#include "hopfdual/hopf.hpp"
#include "hopfdual/verify.hpp"

namespace hopfdual::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

// The JSON view of a RunConfig, mirroring the INI sections.
Json config_json(const RunConfig& cfg) {
    Json j;
    j["model"] = {{"k", cfg.k}, {"c", cfg.c}};
    Json demand = {{"family", cfg.family}};
    if (cfg.family == "reciprocal" || cfg.family == "power_law") {
        demand["w"] = cfg.w;
    }
    if (cfg.family == "power_law") {
        demand["alpha"] = cfg.alpha;
    }
    if (cfg.family == "linear") {
        demand["a"] = cfg.a;
        demand["b"] = cfg.b;
    }
    j["demand"] = demand;
    Json analysis = Json::object();
    if (cfg.tau) {
        analysis["tau"] = *cfg.tau;
    }
    if (!cfg.tau_list.empty()) {
        analysis["tau_list"] = cfg.tau_list;
    }
    analysis["n_critical"] = cfg.n_critical;
    j["analysis"] = analysis;
    Json sim = Json::object();
    if (cfg.step) {
        sim["step"] = *cfg.step;
    }
    sim["t_end"] = cfg.t_end;
    if (cfg.history_p0) {
        sim["history_p0"] = *cfg.history_p0;
    }
    sim["transient_fraction"] = cfg.transient_fraction;
    sim["threads"] = cfg.threads;
    j["simulation"] = sim;
    Json output = Json::object();
    if (cfg.out) {
        output["out"] = *cfg.out;
    }
    if (cfg.waveform_out) {
        output["waveform_out"] = *cfg.waveform_out;
    }
    output["waveform_periods"] = cfg.waveform_periods;
    output["waveform_samples"] = cfg.waveform_samples;
    j["output"] = output;
    return j;
}

void embed_config(Json& report, const RunConfig& cfg) {
    report["config"] = config_json(cfg);
    report["config_ini"] = cfg.to_ini();
}

struct Analytic {
    Equilibrium eq;
    TaylorCoefficients coeffs;
    LinearAnalysis linear;
    HopfExpansion expansion;
};

Analytic analytic(const RunConfig& cfg) {
    const ModelConfig model = cfg.model();
    Analytic a{};
    a.eq = find_equilibrium(model);
    a.coeffs = taylor_coefficients(model, a.eq);
    a.linear = linear_analysis(a.coeffs, cfg.n_critical);
    a.expansion = hopf_expansion(a.coeffs, a.linear);
    return a;
}

Json prediction_json(const CyclePrediction& p) {
    Json j = {
        {"tau", p.tau},
        {"epsilon", p.epsilon},
        {"amplitude", p.amplitude},
        {"omega", p.omega},
        {"period", p.period},
        {"mean_offset", p.mean_offset},
        {"mean", p.period_mean()},
        {"floquet_exponent", p.floquet},
    };
    j["warning"] = p.warning ? Json(*p.warning) : Json(nullptr);
    return j;
}

Json estimate_json(const CycleEstimate& e) {
    return {
        {"regime", std::string(to_string(e.regime))},
        {"amplitude", e.amplitude},
        {"period", e.period},
        {"mean", e.mean},
        {"transient_end", e.transient_end},
        {"max_excursion", e.max_excursion},
        {"cycles", e.cycles},
        {"period_dispersion", e.period_dispersion},
    };
}

// --- resolution of command-specific defaults -------------------------------

double require_tau(const RunConfig& cfg, const char* command) {
    if (!cfg.tau) {
        throw Error(ErrorCode::InvalidArgument, std::string(command) + " needs a delay: set analysis.tau or --tau");
    }
    return *cfg.tau;
}

// Fills step and history_p0 so the resolved config reproduces the run.
RunConfig resolve_simulation(RunConfig cfg, const Analytic& a, double tau) {
    if (!cfg.step) {
        cfg.step = default_step(tau, a.linear.omega0);
    }
    if (!cfg.history_p0) {
        cfg.history_p0 = 1.25 * a.eq.p_star;
    }
    cfg.validate();
    return cfg;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_sidecar(const std::string& data_path, const std::string& command, const RunConfig& cfg,
                   std::size_t rows) {
    Json meta = {{"command", command}, {"version", kVersion}, {"data_file", data_path}, {"rows", rows}};
    meta["generated_at"] = iso_timestamp();
    embed_config(meta, cfg);
    std::ofstream os(data_path + ".meta.json");
    os << meta.dump(2) << "\n";
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw Error(ErrorCode::InvalidArgument, "cannot open output file '" + path + "'");
    }
    return os;
}

void emit_json(const Json& report, const RunConfig& cfg, std::ostream& out) {
    if (cfg.out) {
        open_output(*cfg.out) << report.dump(2) << "\n";
    } else {
        out << report.dump(2) << "\n";
    }
}

std::string fmt(double v, int digits = 8) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// --- commands -------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg, bool as_json, std::ostream& out) {
    const Json report = analyze_report(cfg);
    if (as_json || cfg.out) {
        emit_json(report, cfg, out);
    }
    if (as_json) {
        return kOk;
    }
    const auto& lin = report["linear"];
    const auto& hopf = report["hopf"];
    out << "demand          " << report["demand"].get<std::string>() << "\n";
    out << "p*              " << fmt(report["equilibrium"]["p_star"].get<double>(), 12) << "\n";
    out << "b2 b4 b5 b8 b9  " << fmt(report["taylor"]["b2"].get<double>()) << " "
        << fmt(report["taylor"]["b4"].get<double>()) << " " << fmt(report["taylor"]["b5"].get<double>()) << " "
        << fmt(report["taylor"]["b8"].get<double>()) << " " << fmt(report["taylor"]["b9"].get<double>()) << "\n";
    out << "tau0 omega0     " << fmt(lin["tau0"].get<double>()) << " " << fmt(lin["omega0"].get<double>()) << "\n";
    out << "transversality  " << fmt(lin["transversality"].get<double>()) << "\n";
    out << "tau2 eta2 omega2 " << fmt(hopf["tau2"].get<double>()) << " " << fmt(hopf["eta2"].get<double>()) << " "
        << fmt(hopf["omega2"].get<double>()) << "\n";
    const auto& cls = report["classification"];
    if (cls.contains("error")) {
        out << "classification  " << cls["error"].get<std::string>() << "\n";
    } else {
        out << "classification  " << cls["direction"].get<std::string>() << ", "
            << cls["cycle_stability"].get<std::string>() << " cycle, period "
            << cls["period_trend"].get<std::string>() << "\n";
    }
    if (report.contains("at_tau")) {
        const auto& at = report["at_tau"];
        out << "at tau = " << fmt(at["tau"].get<double>()) << ": " << at["stability"].get<std::string>() << "\n";
        if (!at["prediction"].is_null()) {
            const auto& p = at["prediction"];
            out << "  predicted amplitude " << fmt(p["amplitude"].get<double>()) << ", period "
                << fmt(p["period"].get<double>()) << ", mean offset " << fmt(p["mean_offset"].get<double>()) << "\n";
        }
    }
    return kOk;
}

int cmd_simulate(RunConfig cfg, bool as_json, std::ostream& out, std::ostream& err) {
    const double tau = require_tau(cfg, "simulate");
    const Analytic a = analytic(cfg);
    cfg = resolve_simulation(cfg, a, tau);

    const ModelConfig model = cfg.model();
    const Trajectory traj = simulate(model, HistoryFunction::constant(*cfg.history_p0), cfg.t_end, *cfg.step);

    std::ostream* summary = &out;
    if (cfg.out) {
        auto os = open_output(*cfg.out);
        traj.write_csv(os);
        write_sidecar(*cfg.out, "simulate", cfg, traj.size());
    } else {
        traj.write_csv(out);
        summary = &err;
    }

    EstimatorSettings est_settings;
    est_settings.transient_fraction = cfg.transient_fraction;
    Json s = {{"command", "simulate"}, {"tau", tau}, {"p_star", a.eq.p_star},
              {"stability", std::string(to_string(is_locally_stable(a.linear, tau)))}};
    try {
        s["estimate"] = estimate_json(estimate_cycle(traj, a.eq.p_star, est_settings));
        s["status"] = "ok";
    } catch (const Error& e) {
        s["estimate"] = nullptr;
        s["status"] = e.what();
    }
    if (as_json) {
        *summary << s.dump(2) << "\n";
    } else if (!s["estimate"].is_null()) {
        const auto& e = s["estimate"];
        *summary << "regime " << e["regime"].get<std::string>() << ", amplitude " << fmt(e["amplitude"].get<double>())
                 << ", period " << fmt(e["period"].get<double>()) << ", mean " << fmt(e["mean"].get<double>())
                 << ", transient end " << fmt(e["transient_end"].get<double>()) << "\n";
    } else {
        *summary << "no cycle estimate: " << s["status"].get<std::string>() << "\n";
    }
    return kOk;
}

int cmd_sweep(RunConfig cfg, bool as_json, std::ostream& out, std::ostream& err) {
    if (cfg.tau_list.empty()) {
        if (!cfg.tau) {
            throw Error(ErrorCode::InvalidArgument, "sweep needs analysis.tau_list, --tau-list or --tau");
        }
        cfg.tau_list = {*cfg.tau};
    }
    const Analytic a = analytic(cfg);
    double min_tau = cfg.tau_list.front();
    for (double t : cfg.tau_list) {
        min_tau = std::min(min_tau, t);
    }
    if (!cfg.step) {
        cfg.step = default_step(min_tau, a.linear.omega0);
    }
    if (!cfg.history_p0) {
        cfg.history_p0 = 1.25 * a.eq.p_star;
    }
    cfg.validate();

    SimulationSettings sim;
    sim.step = *cfg.step;
    sim.t_end = cfg.t_end;
    sim.history_p0 = cfg.history_p0;
    sim.estimator.transient_fraction = cfg.transient_fraction;
    const auto rows = sweep(cfg.model(), cfg.tau_list, sim, cfg.threads);

    std::ostream* summary = &out;
    if (cfg.out) {
        auto os = open_output(*cfg.out);
        write_diagram_csv(rows, os);
        write_sidecar(*cfg.out, "sweep", cfg, rows.size());
    } else {
        write_diagram_csv(rows, out);
        summary = &err;
    }

    Json s = {{"command", "sweep"}, {"rows", rows.size()}, {"tau0", a.linear.tau0}};
    std::size_t failed = 0;
    for (const auto& r : rows) {
        failed += r.ok() ? 0 : 1;
    }
    s["failed_rows"] = failed;
    try {
        const LinearFit fit = fit_square_root_law(rows, a.linear.tau0);
        s["sqrt_law"] = {{"slope", fit.slope},
                         {"intercept", fit.intercept},
                         {"r_squared", fit.r_squared},
                         {"points", fit.points},
                         {"predicted_slope", 1.0 / a.expansion.tau2}};
    } catch (const Error&) {
        s["sqrt_law"] = nullptr;
    }
    if (as_json) {
        *summary << s.dump(2) << "\n";
    } else {
        *summary << rows.size() << " rows, " << failed << " failed\n";
        if (!s["sqrt_law"].is_null()) {
            *summary << "amplitude^2 vs (tau - tau0): slope " << fmt(s["sqrt_law"]["slope"].get<double>())
                     << " (predicted " << fmt(1.0 / a.expansion.tau2) << "), R^2 "
                     << fmt(s["sqrt_law"]["r_squared"].get<double>(), 5) << "\n";
        }
    }
    return kOk;
}

int cmd_predict(const RunConfig& cfg, bool as_json, std::ostream& out) {
    const Json report = predict_report(cfg);
    if (cfg.waveform_out) {
        const Analytic a = analytic(cfg);
        const CyclePrediction p = predicted_cycle(a.expansion, *cfg.tau);
        auto os = open_output(*cfg.waveform_out);
        os << "t,p_pred\n";
        const auto n = static_cast<long>(std::llround(cfg.waveform_periods * cfg.waveform_samples));
        const double dt = p.period / cfg.waveform_samples;
        for (long i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) * dt;
            os << format_number(t) << ',' << format_number(p.sample(t)) << '\n';
        }
        write_sidecar(*cfg.waveform_out, "predict", cfg, static_cast<std::size_t>(n + 1));
    }
    if (as_json || cfg.out) {
        emit_json(report, cfg, out);
    }
    if (!as_json) {
        const auto& p = report["prediction"];
        out << "tau " << fmt(p["tau"].get<double>()) << ": epsilon " << fmt(p["epsilon"].get<double>())
            << ", amplitude " << fmt(p["amplitude"].get<double>()) << ", period " << fmt(p["period"].get<double>())
            << ", mean offset " << fmt(p["mean_offset"].get<double>()) << "\n";
        if (!p["warning"].is_null()) {
            out << "warning: " << p["warning"].get<std::string>() << "\n";
        }
    }
    return kOk;
}

int cmd_verify(const RunConfig& cfg, bool as_json, std::ostream& out) {
    const Json report = verify_report(cfg);
    if (as_json || cfg.out) {
        emit_json(report, cfg, out);
    }
    if (!as_json) {
        out << "coef  closed-form        oracle             rel-diff   ratio    status\n";
        for (const auto& row : report["coefficients"]) {
            char line[160];
            const std::string ratio = row["ratio"].is_null() ? "-" : fmt(row["ratio"].get<double>(), 6);
            std::snprintf(line, sizeof line, "%-5s %-18s %-18s %-10s %-8s %s\n", row["name"].get<std::string>().c_str(),
                          fmt(row["closed_form"].get<double>(), 10).c_str(), fmt(row["oracle"].get<double>(), 10).c_str(),
                          fmt(row["rel_diff"].get<double>(), 3).c_str(), ratio.c_str(),
                          row["status"].get<std::string>().c_str());
            out << line;
        }
    }
    return report["consistent"].get<bool>() ? kOk : kVerifyMismatch;
}

void write_error(std::ostream& err, const std::string& code, const std::string& message, int exit_code,
                 std::optional<double> time = std::nullopt) {
    Json e = {{"code", code}, {"message", message}, {"exit_code", exit_code}};
    if (time) {
        e["time"] = *time;
    }
    err << Json{{"error", e}}.dump() << "\n";
}

std::string resolve_config_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::path(path).is_relative() && !fs::exists(path)) {
        if (const char* seed = std::getenv("HOPFDUAL_SEED_DIR")) {
            const fs::path candidate = fs::path(seed) / path;
            if (fs::exists(candidate)) {
                return candidate.string();
            }
        }
    }
    return path;
}

}  // namespace

Json analyze_report(const RunConfig& cfg) {
    cfg.validate();
    const Analytic a = analytic(cfg);
    Json r;
    r["command"] = "analyze";
    r["demand"] = cfg.demand().name();
    r["equilibrium"] = {{"p_star", a.eq.p_star}, {"residual", a.eq.residual}};
    Json taylor;
    for (int i = 1; i <= 9; ++i) {
        taylor["b" + std::to_string(i)] = a.coeffs[i];
    }
    r["taylor"] = taylor;
    r["linear"] = {{"b2", a.linear.b2},
                   {"omega0", a.linear.omega0},
                   {"tau0", a.linear.tau0},
                   {"tau_c", a.linear.tau_c},
                   {"transversality", a.linear.transversality}};
    const auto& e = a.expansion;
    r["hopf"] = {
        {"omega1", e.omega1}, {"tau1", e.tau1}, {"eta1", e.eta1},
        {"omega2", e.omega2}, {"tau2", e.tau2}, {"eta2", e.eta2},
        {"u1", {{"A1", 0.0}, {"B1", 0.0}, {"C1", e.u1.C1}, {"D1", e.u1.D1}, {"E1", e.u1.E1}}},
        {"q1", {{"A", e.q1.A}, {"B", e.q1.B}, {"C", e.q1.C}, {"D", e.q1.D}, {"E", e.q1.E}}},
        {"degenerate", e.degenerate},
    };
    try {
        const BifurcationClass cls = classify(e);
        r["classification"] = {{"direction", std::string(to_string(cls.direction))},
                               {"cycle_stability", std::string(to_string(cls.cycle_stability))},
                               {"period_trend", std::string(to_string(cls.period_trend))}};
    } catch (const DegenerateBifurcationError& ex) {
        r["classification"] = {{"error", ex.what()}, {"quantity", ex.quantity()}};
    }
    if (cfg.tau) {
        Json at = {{"tau", *cfg.tau}, {"stability", std::string(to_string(is_locally_stable(a.linear, *cfg.tau)))}};
        try {
            at["prediction"] = prediction_json(predicted_cycle(e, *cfg.tau));
        } catch (const Error& ex) {
            at["prediction"] = nullptr;
            at["prediction_status"] = ex.what();
        }
        r["at_tau"] = at;
    }
    embed_config(r, cfg);
    return r;
}

Json predict_report(const RunConfig& cfg) {
    cfg.validate();
    const double tau = require_tau(cfg, "predict");
    const Analytic a = analytic(cfg);
    Json r;
    r["command"] = "predict";
    r["p_star"] = a.eq.p_star;
    r["tau0"] = a.linear.tau0;
    r["tau2"] = a.expansion.tau2;
    r["prediction"] = prediction_json(predicted_cycle(a.expansion, tau));
    embed_config(r, cfg);
    return r;
}

Json verify_report(const RunConfig& cfg) {
    cfg.validate();
    const auto checks = verify_coefficients(cfg.model());
    Json r;
    r["command"] = "verify";
    r["demand"] = cfg.demand().name();
    Json rows = Json::array();
    for (const auto& c : checks) {
        Json row = {{"name", "b" + std::to_string(c.index)},
                    {"closed_form", c.closed_form},
                    {"oracle", c.oracle},
                    {"rel_diff", c.rel_diff}};
        row["ratio"] = c.ratio ? Json(*c.ratio) : Json(nullptr);
        row["status"] = std::string(to_string(c.status));
        rows.push_back(row);
    }
    r["coefficients"] = rows;
    r["consistent"] = all_consistent(checks);
    embed_config(r, cfg);
    return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hopf bifurcation analysis and simulation of the fair-dual congestion-control model", "hopfdual"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<double> tau;
    std::string tau_list;
    std::optional<double> step;
    std::optional<double> t_end;
    std::optional<double> history_p0;
    std::string out_path;
    std::string waveform_path;
    bool as_json = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI-style configuration file");
        sub->add_option("--tau", tau, "Communication delay");
        sub->add_option("--tau-list", tau_list, "Comma-separated delays for sweep");
        sub->add_option("--step", step, "Integration step");
        sub->add_option("--t-end", t_end, "Simulation length");
        sub->add_option("--history-p0", history_p0, "Constant initial history price");
        sub->add_option("--out", out_path, "Output file");
        sub->add_flag("--json", as_json, "Machine-readable output on stdout");
    };
    CLI::App* analyze = app.add_subcommand("analyze", "Equilibrium, Hopf point, expansion and classification");
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Integrate the delay equation; writes a t,p CSV");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Simulate over a list of delays; writes the diagram CSV");
    CLI::App* predict = app.add_subcommand("predict", "Perturbation prediction of the cycle at a delay");
    CLI::App* verify = app.add_subcommand("verify", "Compare closed-form coefficients with a numeric expansion");
    for (CLI::App* sub : {analyze, simulate_cmd, sweep_cmd, predict, verify}) {
        add_common(sub);
    }
    predict->add_option("--waveform", waveform_path, "Write the sampled predicted waveform (t,p_pred CSV)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "InvalidArgument", e.what(), kConfigError);
        return kConfigError;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = load_config(resolve_config_path(config_path));
        }
        if (tau) {
            cfg.tau = *tau;
        }
        if (!tau_list.empty()) {
            cfg.tau_list = parse_number_list(tau_list);
        }
        if (step) {
            cfg.step = *step;
        }
        if (t_end) {
            cfg.t_end = *t_end;
        }
        if (history_p0) {
            cfg.history_p0 = *history_p0;
        }
        if (!out_path.empty()) {
            cfg.out = out_path;
        }
        if (!waveform_path.empty()) {
            cfg.waveform_out = waveform_path;
        }
        cfg.validate();
    } catch (const Error& e) {
        write_error(err, std::string(to_string(e.code())), e.what(), kConfigError);
        return kConfigError;
    }

    try {
        if (analyze->parsed()) {
            return cmd_analyze(cfg, as_json, out);
        }
        if (simulate_cmd->parsed()) {
            return cmd_simulate(cfg, as_json, out, err);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(cfg, as_json, out, err);
        }
        if (predict->parsed()) {
            return cmd_predict(cfg, as_json, out);
        }
        return cmd_verify(cfg, as_json, out);
    } catch (const PositivityLossError& e) {
        write_error(err, "PositivityLoss", e.what(), kNumericalError, e.time());
        return kNumericalError;
    } catch (const Error& e) {
        const int code = e.code() == ErrorCode::InvalidArgument ? kConfigError : kNumericalError;
        write_error(err, std::string(to_string(e.code())), e.what(), code);
        return code;
    }
}

}  // namespace hopfdual::cli
