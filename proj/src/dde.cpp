#include "hopfdual/dde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "hopfdual/errors.hpp"

namespace hopfdual {

namespace {

// Cubic Hermite on the unit interval; m0, m1 are slopes already scaled by the interval length.
double hermite(double y0, double m0, double y1, double m1, double th) {
    const double th2 = th * th;
    const double th3 = th2 * th;
    return (2.0 * th3 - 3.0 * th2 + 1.0) * y0 + (th3 - 2.0 * th2 + th) * m0 + (-2.0 * th3 + 3.0 * th2) * y1 +
           (th3 - th2) * m1;
}

}  // namespace

Trajectory::Trajectory(double t0, double step, std::vector<double> values, std::vector<double> derivatives)
    : t0_(t0), step_(step), values_(std::move(values)), derivatives_(std::move(derivatives)) {
    if (!(step_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "trajectory step must be positive");
    }
    if (values_.size() < 2 || derivatives_.size() != values_.size()) {
        throw Error(ErrorCode::InvalidArgument, "trajectory needs at least two nodes with derivatives");
    }
}

double Trajectory::at(double t) const {
    const double x = (t - t0_) / step_;
    const double last = static_cast<double>(size() - 1);
    if (!(x >= -1e-9 && x <= last + 1e-9)) {
        throw Error(ErrorCode::DelayedLookupGap, "dense output requested outside the trajectory");
    }
    const double xc = std::clamp(x, 0.0, last);
    auto i = static_cast<std::size_t>(xc);
    if (i == size() - 1) {
        return values_.back();
    }
    const double th = xc - static_cast<double>(i);
    return hermite(values_[i], derivatives_[i] * step_, values_[i + 1], derivatives_[i + 1] * step_, th);
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "t,p\n";
    char buf[64];
    for (std::size_t i = 0; i < size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", time(i), values_[i]);
        os << buf;
    }
}

HistoryFunction HistoryFunction::constant(double p0) {
    if (!(p0 > 0.0) || !std::isfinite(p0)) {
        throw Error(ErrorCode::InvalidArgument, "history price must be positive");
    }
    return HistoryFunction(Constant{p0});
}

HistoryFunction HistoryFunction::sampled(Sampled samples) {
    if (samples.times.size() < 2 || samples.values.size() != samples.times.size()) {
        throw Error(ErrorCode::InvalidArgument, "sampled history needs at least two (time, value) pairs");
    }
    if (!samples.derivatives.empty() && samples.derivatives.size() != samples.times.size()) {
        throw Error(ErrorCode::InvalidArgument, "sampled history derivatives must match the grid");
    }
    if (!std::is_sorted(samples.times.begin(), samples.times.end()) ||
        std::adjacent_find(samples.times.begin(), samples.times.end()) != samples.times.end()) {
        throw Error(ErrorCode::InvalidArgument, "sampled history times must be strictly increasing");
    }
    if (std::any_of(samples.values.begin(), samples.values.end(), [](double v) { return !(v > 0.0); })) {
        throw Error(ErrorCode::InvalidArgument, "sampled history values must be positive");
    }
    return HistoryFunction(std::move(samples));
}

HistoryFunction HistoryFunction::from_trajectory_tail(const Trajectory& traj, double tau) {
    const double h = traj.step();
    const auto count = static_cast<std::size_t>(std::ceil(tau / h - 1e-9)) + 1;
    if (count > traj.size()) {
        throw Error(ErrorCode::InvalidArgument, "trajectory is shorter than the requested delay");
    }
    Sampled s;
    const std::size_t first = traj.size() - count;
    for (std::size_t i = first; i < traj.size(); ++i) {
        s.times.push_back(static_cast<double>(i) * h - static_cast<double>(traj.size() - 1) * h);
        s.values.push_back(traj.values()[i]);
        s.derivatives.push_back(traj.derivatives()[i]);
    }
    return sampled(std::move(s));
}

double HistoryFunction::operator()(double t) const {
    if (const auto* c = std::get_if<Constant>(&data_)) {
        return c->p0;
    }
    const auto& s = std::get<Sampled>(data_);
    if (t < s.times.front() - 1e-12 || t > s.times.back() + 1e-12) {
        throw Error(ErrorCode::DelayedLookupGap, "history queried outside its sampled range");
    }
    auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    std::size_t i = it == s.times.begin() ? 0 : static_cast<std::size_t>(it - s.times.begin()) - 1;
    i = std::min(i, s.times.size() - 2);
    const double dt = s.times[i + 1] - s.times[i];
    const double th = std::clamp((t - s.times[i]) / dt, 0.0, 1.0);
    if (s.derivatives.empty()) {
        return s.values[i] + th * (s.values[i + 1] - s.values[i]);
    }
    return hermite(s.values[i], s.derivatives[i] * dt, s.values[i + 1], s.derivatives[i + 1] * dt, th);
}

void HistoryFunction::validate(double tau) const {
    if (const auto* c = std::get_if<Constant>(&data_)) {
        if (!(c->p0 > 0.0) || !std::isfinite(c->p0)) {
            throw Error(ErrorCode::InvalidArgument, "history price must be positive");
        }
        return;
    }
    const auto& s = std::get<Sampled>(data_);
    if (s.times.front() > -tau + 1e-9 * std::max(1.0, tau) || s.times.back() < -1e-12) {
        throw Error(ErrorCode::InvalidArgument, "sampled history does not cover [-tau, 0]");
    }
    for (double v : s.values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "history prices must be positive");
        }
    }
}

double default_step(double tau, double omega0) {
    const double by_period = (2.0 * std::numbers::pi / omega0) / 200.0;
    return tau > 0.0 ? std::min(tau / 100.0, by_period) : by_period;
}

HistoryFunction default_history(double p_star) {
    return HistoryFunction::constant(1.25 * p_star);
}

Trajectory simulate(const ModelConfig& config, const HistoryFunction& history, double t_end, double step) {
    config.validate();
    const double tau = config.tau;
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw Error(ErrorCode::InvalidArgument, "step must be positive");
    }
    if (tau > 0.0 && step > tau / 10.0 * (1.0 + 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "step must not exceed tau/10");
    }
    if (!(t_end >= 10.0 * step * (1.0 - 1e-12)) || !std::isfinite(t_end)) {
        throw Error(ErrorCode::InvalidArgument, "t_end must be at least 10 steps");
    }
    history.validate(tau);

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
    std::vector<double> p(n_steps + 1);
    std::vector<double> f(n_steps + 1);
    const double lag = tau / step;  // delay in units of the step
    const double h = step;

    // Delayed price at time (n + frac) h - tau; only nodes <= n are read.
    const auto delayed = [&](std::size_t n, double frac, double stage_value) {
        if (tau == 0.0) {
            return stage_value;
        }
        const double x = static_cast<double>(n) + frac - lag;
        double v;
        if (x <= 0.0) {
            v = history(x * h);
        } else {
            auto i = static_cast<std::size_t>(x);
            const double th = x - static_cast<double>(i);
            if (th < 1e-12) {
                v = p[i];
            } else {
                if (i + 1 > n) {
                    throw Error(ErrorCode::DelayedLookupGap, "delayed value requested ahead of the solution");
                }
                v = hermite(p[i], f[i] * h, p[i + 1], f[i + 1] * h, th);
            }
        }
        if (!(v > 0.0)) {
            throw PositivityLossError((static_cast<double>(n) + frac) * h,
                                      "delayed price is non-positive at t = " +
                                          std::to_string((static_cast<double>(n) + frac) * h));
        }
        return v;
    };
    const auto field = [&](double value, double value_delayed) { return rhs(config, value, value_delayed); };

    p[0] = history(0.0);
    f[0] = field(p[0], delayed(0, 0.0, p[0]));
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double k1 = f[n];
        const double y2 = p[n] + 0.5 * h * k1;
        const double k2 = field(y2, delayed(n, 0.5, y2));
        const double y3 = p[n] + 0.5 * h * k2;
        const double k3 = field(y3, delayed(n, 0.5, y3));
        const double y4 = p[n] + h * k3;
        const double k4 = field(y4, delayed(n, 1.0, y4));
        const double next = p[n] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double t_next = static_cast<double>(n + 1) * h;
        if (!(next > 0.0) || !std::isfinite(next)) {
            throw PositivityLossError(t_next, "price became non-positive at t = " + std::to_string(t_next));
        }
        p[n + 1] = next;
        f[n + 1] = field(next, delayed(n + 1, 0.0, next));
    }
    return Trajectory(0.0, h, std::move(p), std::move(f));
}

}  // namespace hopfdual
