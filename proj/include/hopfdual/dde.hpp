#pragma once

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "hopfdual/model.hpp"

namespace hopfdual {

/// Trajectory on a uniform grid t0 + i*step, with the right-hand side stored
/// at every node so the dense output is C^1 cubic Hermite.
class Trajectory {
public:
    Trajectory(double t0, double step, std::vector<double> values, std::vector<double> derivatives);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double time(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * step_; }
    [[nodiscard]] double t_end() const noexcept { return time(size() - 1); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> derivatives() const noexcept { return derivatives_; }

    /// Dense output; throws DelayedLookupGap outside [t0, t_end].
    [[nodiscard]] double at(double t) const;

    /// `t,p` header, one row per node, 17 significant digits.
    void write_csv(std::ostream& os) const;

private:
    double t0_;
    double step_;
    std::vector<double> values_;
    std::vector<double> derivatives_;
};

/// Initial data on [-tau, 0].
class HistoryFunction {
public:
    struct Constant {
        double p0;
    };
    /// Samples on an increasing grid ending at or after 0. Derivatives are
    /// optional; without them the samples are linearly interpolated.
    struct Sampled {
        std::vector<double> times;
        std::vector<double> values;
        std::vector<double> derivatives;
    };

    static HistoryFunction constant(double p0);
    static HistoryFunction sampled(Sampled samples);

    /// The final `tau` time units of a trajectory, shifted so its end is t = 0.
    static HistoryFunction from_trajectory_tail(const Trajectory& traj, double tau);

    [[nodiscard]] double operator()(double t) const;

    /// Throws InvalidArgument unless the history covers [-tau, 0] with positive values.
    void validate(double tau) const;

    [[nodiscard]] bool is_constant() const noexcept { return std::holds_alternative<Constant>(data_); }

private:
    explicit HistoryFunction(std::variant<Constant, Sampled> data) : data_(std::move(data)) {}

    std::variant<Constant, Sampled> data_;
};

/// min(tau / 100, (2 pi / omega0) / 200), or the latter alone when tau = 0.
[[nodiscard]] double default_step(double tau, double omega0);

/// Constant(1.25 p*).
[[nodiscard]] HistoryFunction default_history(double p_star);

/// Fixed-step RK4 by the method of steps. Delayed values at stage times come
/// from the Hermite dense output, or from `history` before t = 0.
///
/// Requires step > 0, step <= tau/10 when tau > 0, and t_end >= 10*step.
/// Throws PositivityLossError when a price becomes non-positive.
[[nodiscard]] Trajectory simulate(const ModelConfig& config, const HistoryFunction& history, double t_end,
                                  double step);

}  // namespace hopfdual
