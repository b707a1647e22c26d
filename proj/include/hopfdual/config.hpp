#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hopfdual/analysis.hpp"
#include "hopfdual/model.hpp"

namespace hopfdual {

/// Everything a CLI command needs. Read from an INI-style file:
///
///   [model]       k, c
///   [demand]      family = reciprocal | power_law | linear, plus w / alpha / a, b
///   [analysis]    tau, tau_list, n_critical
///   [simulation]  step, t_end, history_p0, transient_fraction, threads
///   [output]      out, waveform_out, waveform_periods, waveform_samples
///
/// Unknown sections or keys are rejected.
struct RunConfig {
    double k = 0.01;
    double c = 50.0;

    std::string family = "reciprocal";
    double w = 1.0;
    double alpha = 1.0;
    double a = 0.0;  // linear: x = a - b p on (0, a / b)
    double b = 0.0;

    std::optional<double> tau;
    std::vector<double> tau_list;
    int n_critical = 3;

    std::optional<double> step;
    double t_end = 5000.0;
    std::optional<double> history_p0;
    double transient_fraction = 0.5;
    unsigned threads = 0;

    std::optional<std::string> out;
    std::optional<std::string> waveform_out;
    double waveform_periods = 3.0;
    int waveform_samples = 200;  // per period

    /// Throws InvalidArgument on any out-of-range value.
    void validate() const;

    [[nodiscard]] DemandFunction demand() const;

    /// Model with tau taken from `tau` (0 when unset).
    [[nodiscard]] ModelConfig model() const;

    /// INI text that parses back to an identical RunConfig.
    [[nodiscard]] std::string to_ini() const;
};

/// Throws InvalidArgument on malformed input or unknown keys.
[[nodiscard]] RunConfig parse_config(std::istream& in);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Splits "3,3.2,3.4".
[[nodiscard]] std::vector<double> parse_number_list(const std::string& text);

/// Exact decimal round-trip formatting (%.17g).
[[nodiscard]] std::string format_number(double v);

}  // namespace hopfdual
