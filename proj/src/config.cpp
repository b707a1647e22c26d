#include "hopfdual/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hopfdual/errors.hpp"

namespace hopfdual {

namespace pt = boost::property_tree;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "'" + key + "' expects a number, got '" + text + "'");
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) {
        ++used;
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidArgument, "'" + key + "' expects a finite number, got '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw Error(ErrorCode::InvalidArgument, "'" + key + "' expects an integer, got '" + text + "'");
    }
    return static_cast<int>(v);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"model", {"k", "c"}},
        {"demand", {"family", "w", "alpha", "a", "b"}},
        {"analysis", {"tau", "tau_list", "n_critical"}},
        {"simulation", {"step", "t_end", "history_p0", "transient_fraction", "threads"}},
        {"output", {"out", "waveform_out", "waveform_periods", "waveform_samples"}},
    };
    return keys;
}

std::set<std::string> family_keys(const std::string& family) {
    if (family == "reciprocal") {
        return {"family", "w"};
    }
    if (family == "power_law") {
        return {"family", "w", "alpha"};
    }
    if (family == "linear") {
        return {"family", "a", "b"};
    }
    throw Error(ErrorCode::InvalidArgument,
                "unknown demand family '" + family + "' (expected reciprocal, power_law or linear)");
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "empty entry in number list '" + text + "'");
        }
        out.push_back(parse_double("tau_list", item.substr(first)));
    }
    if (out.empty()) {
        throw Error(ErrorCode::InvalidArgument, "number list is empty");
    }
    return out;
}

void RunConfig::validate() const {
    const auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw Error(ErrorCode::InvalidArgument, what);
        }
    };
    require(k > 0.0, "model.k must be positive");
    require(c > 0.0, "model.c must be positive");
    (void)family_keys(family);
    if (family == "reciprocal" || family == "power_law") {
        require(w > 0.0, "demand.w must be positive");
    }
    if (family == "power_law") {
        require(alpha > 0.0, "demand.alpha must be positive");
    }
    if (family == "linear") {
        require(a > 0.0 && b > 0.0, "linear demand needs a > 0 and b > 0");
    }
    if (tau) {
        require(*tau >= 0.0, "analysis.tau must be non-negative");
    }
    for (double t : tau_list) {
        require(t >= 0.0, "analysis.tau_list entries must be non-negative");
    }
    require(n_critical >= 1, "analysis.n_critical must be at least 1");
    if (step) {
        require(*step > 0.0, "simulation.step must be positive");
        const auto check_tau = [&](double t) {
            require(t == 0.0 || *step <= t / 10.0 * (1.0 + 1e-12), "simulation.step must not exceed tau/10");
        };
        if (tau) {
            check_tau(*tau);
        }
        for (double t : tau_list) {
            check_tau(t);
        }
        require(t_end >= 10.0 * *step * (1.0 - 1e-12), "simulation.t_end must cover at least 10 steps");
    }
    require(t_end > 0.0, "simulation.t_end must be positive");
    if (history_p0) {
        require(*history_p0 > 0.0, "simulation.history_p0 must be positive");
    }
    require(transient_fraction >= 0.0 && transient_fraction < 1.0,
            "simulation.transient_fraction must lie in [0, 1)");
    require(waveform_periods > 0.0, "output.waveform_periods must be positive");
    require(waveform_samples >= 4, "output.waveform_samples must be at least 4");
}

DemandFunction RunConfig::demand() const {
    if (family == "reciprocal") {
        return DemandFunction::reciprocal(w);
    }
    if (family == "power_law") {
        return DemandFunction::power_law(w, alpha);
    }
    if (family == "linear") {
        const double aa = a;
        const double bb = b;
        return DemandFunction::numeric("linear(a=" + format_number(aa) + ",b=" + format_number(bb) + ")",
                                       [aa, bb](double p) { return aa - bb * p; }, 0.0, aa / bb);
    }
    (void)family_keys(family);
    return DemandFunction::reciprocal(w);
}

ModelConfig RunConfig::model() const {
    return ModelConfig{k, c, tau.value_or(0.0), demand()};
}

std::string RunConfig::to_ini() const {
    std::ostringstream os;
    os << "[model]\n";
    os << "k = " << format_number(k) << "\n";
    os << "c = " << format_number(c) << "\n";
    os << "\n[demand]\n";
    os << "family = " << family << "\n";
    if (family == "reciprocal" || family == "power_law") {
        os << "w = " << format_number(w) << "\n";
    }
    if (family == "power_law") {
        os << "alpha = " << format_number(alpha) << "\n";
    }
    if (family == "linear") {
        os << "a = " << format_number(a) << "\n";
        os << "b = " << format_number(b) << "\n";
    }
    os << "\n[analysis]\n";
    if (tau) {
        os << "tau = " << format_number(*tau) << "\n";
    }
    if (!tau_list.empty()) {
        os << "tau_list = ";
        for (std::size_t i = 0; i < tau_list.size(); ++i) {
            os << (i ? "," : "") << format_number(tau_list[i]);
        }
        os << "\n";
    }
    os << "n_critical = " << n_critical << "\n";
    os << "\n[simulation]\n";
    if (step) {
        os << "step = " << format_number(*step) << "\n";
    }
    os << "t_end = " << format_number(t_end) << "\n";
    if (history_p0) {
        os << "history_p0 = " << format_number(*history_p0) << "\n";
    }
    os << "transient_fraction = " << format_number(transient_fraction) << "\n";
    os << "threads = " << threads << "\n";
    os << "\n[output]\n";
    if (out) {
        os << "out = " << *out << "\n";
    }
    if (waveform_out) {
        os << "waveform_out = " << *waveform_out << "\n";
    }
    os << "waveform_periods = " << format_number(waveform_periods) << "\n";
    os << "waveform_samples = " << waveform_samples << "\n";
    return os.str();
}

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    const auto& keys = known_keys();
    for (const auto& [section, body] : tree) {
        const auto known = keys.find(section);
        if (!body.data().empty()) {
            throw Error(ErrorCode::InvalidArgument, "key '" + section + "' must belong to a [section]");
        }
        if (known == keys.end()) {
            throw Error(ErrorCode::InvalidArgument, "unknown config section '" + section + "'");
        }
        for (const auto& [key, node] : body) {
            if (!known->second.count(key)) {
                throw Error(ErrorCode::InvalidArgument, "unknown config key '" + section + "." + key + "'");
            }
        }
    }

    const auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) {
            return *v;
        }
        return std::nullopt;
    };
    const auto num = [&](const std::string& path, double& target) {
        if (auto v = get(path)) {
            target = parse_double(path, *v);
        }
    };

    num("model.k", cfg.k);
    num("model.c", cfg.c);
    if (auto v = get("demand.family")) {
        cfg.family = *v;
    }
    const auto allowed = family_keys(cfg.family);
    if (auto demand = tree.get_child_optional("demand")) {
        for (const auto& [key, node] : *demand) {
            if (!allowed.count(key)) {
                throw Error(ErrorCode::InvalidArgument,
                            "key 'demand." + key + "' does not apply to family '" + cfg.family + "'");
            }
        }
    }
    num("demand.w", cfg.w);
    num("demand.alpha", cfg.alpha);
    num("demand.a", cfg.a);
    num("demand.b", cfg.b);

    if (auto v = get("analysis.tau")) {
        cfg.tau = parse_double("analysis.tau", *v);
    }
    if (auto v = get("analysis.tau_list")) {
        cfg.tau_list = parse_number_list(*v);
    }
    if (auto v = get("analysis.n_critical")) {
        cfg.n_critical = parse_int("analysis.n_critical", *v);
    }
    if (auto v = get("simulation.step")) {
        cfg.step = parse_double("simulation.step", *v);
    }
    num("simulation.t_end", cfg.t_end);
    if (auto v = get("simulation.history_p0")) {
        cfg.history_p0 = parse_double("simulation.history_p0", *v);
    }
    num("simulation.transient_fraction", cfg.transient_fraction);
    if (auto v = get("simulation.threads")) {
        const int t = parse_int("simulation.threads", *v);
        if (t < 0) {
            throw Error(ErrorCode::InvalidArgument, "simulation.threads must be non-negative");
        }
        cfg.threads = static_cast<unsigned>(t);
    }
    if (auto v = get("output.out")) {
        cfg.out = *v;
    }
    if (auto v = get("output.waveform_out")) {
        cfg.waveform_out = *v;
    }
    num("output.waveform_periods", cfg.waveform_periods);
    if (auto v = get("output.waveform_samples")) {
        cfg.waveform_samples = parse_int("output.waveform_samples", *v);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

}  // namespace hopfdual
