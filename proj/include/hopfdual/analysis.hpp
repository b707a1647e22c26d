#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopfdual/dde.hpp"
#include "hopfdual/hopf.hpp"

namespace hopfdual {

enum class Regime { Equilibrium, LimitCycle, Undetermined };

[[nodiscard]] std::string_view to_string(Regime r) noexcept;

struct CycleEstimate {
    double amplitude = 0.0;      // half peak-to-trough
    double period = 0.0;         // > 0 only for LimitCycle/Undetermined
    double mean = 0.0;
    Regime regime = Regime::Undetermined;
    double transient_end = 0.0;  // start of the analysed window
    double max_excursion = 0.0;  // max |p - p*| over the window
    std::size_t cycles = 0;
    double period_dispersion = 0.0;  // std / mean of cycle lengths
};

struct EstimatorSettings {
    double transient_fraction = 0.5;     // always discard this share of the run
    double drift_tolerance = 0.01;       // successive maxima, relative to the amplitude
    double equilibrium_threshold = 1e-3; // relative to p*
    std::size_t min_cycles = 5;
    double max_period_dispersion = 0.02;
};

/// Throws TooShort when the window holds fewer than min_cycles cycles and the
/// run has not settled to equilibrium.
[[nodiscard]] CycleEstimate estimate_cycle(const Trajectory& traj, double p_star,
                                           const EstimatorSettings& settings = {});

struct PredictionErrors {
    double amplitude;
    double period;
    double mean_offset;
};

/// |measured - predicted| / |predicted| per quantity. Throws RegimeMismatch
/// unless the estimate is a LimitCycle.
[[nodiscard]] PredictionErrors compare_prediction(const CycleEstimate& est, const CyclePrediction& pred);

struct SimulationSettings {
    double step = 0.0;  // 0 selects default_step()
    double t_end = 5000.0;
    std::optional<double> history_p0;  // default 1.25 p*
    EstimatorSettings estimator{};
};

struct DiagramRow {
    double tau = 0.0;
    std::optional<CycleEstimate> measured;
    std::optional<CyclePrediction> predicted;
    std::optional<PredictionErrors> errors;
    std::string status = "ok";  // "ok" or "<ErrorCode>: message"

    [[nodiscard]] bool ok() const noexcept { return status == "ok"; }
};

/// One row per tau, sorted by tau. Row-level failures land in `status`.
/// Independent rows run concurrently on up to `threads` workers (0 = hardware).
[[nodiscard]] std::vector<DiagramRow> sweep(const ModelConfig& config, std::span<const double> tau_values,
                                            const SimulationSettings& sim, unsigned threads = 0);

void write_diagram_csv(std::span<const DiagramRow> rows, std::ostream& os);

struct LinearFit {
    double slope;
    double intercept;
    double r_squared;
    std::size_t points;
};

[[nodiscard]] LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares fit of amplitude^2 against (tau - tau0) over LimitCycle rows above tau0.
[[nodiscard]] LinearFit fit_square_root_law(std::span<const DiagramRow> rows, double tau0);

}  // namespace hopfdual
