#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hopfdual/config.hpp"

namespace hopfdual::cli {

using Json = nlohmann::ordered_json;

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kVerifyMismatch = 1,
    kConfigError = 2,
    kNumericalError = 3,
};

/// Full analytic report; `config.tau`, when set, adds the stability verdict
/// and the cycle prediction at that delay.
[[nodiscard]] Json analyze_report(const RunConfig& config);

/// Prediction at config.tau; throws WrongSide below onset.
[[nodiscard]] Json predict_report(const RunConfig& config);

/// Per-coefficient oracle comparison.
[[nodiscard]] Json verify_report(const RunConfig& config);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Results go to `out`; diagnostics and error objects to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hopfdual::cli
