#include "hopfdual/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "hopfdual/errors.hpp"

namespace hopfdual {

std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::Equilibrium: return "equilibrium";
        case Regime::LimitCycle: return "limit_cycle";
        case Regime::Undetermined: return "undetermined";
    }
    return "unknown";
}

namespace {

// Samples v[first..last] on a uniform grid starting at time t_first.
struct Window {
    std::span<const double> v;
    double t_first;
    double h;

    [[nodiscard]] double time(std::size_t i) const { return t_first + static_cast<double>(i) * h; }

    // Linear interpolant.
    [[nodiscard]] double value(double t) const {
        const double x = std::clamp((t - t_first) / h, 0.0, static_cast<double>(v.size() - 1));
        auto i = std::min(static_cast<std::size_t>(x), v.size() - 2);
        const double th = x - static_cast<double>(i);
        return v[i] + th * (v[i + 1] - v[i]);
    }

    // Trapezoid integral over [a, b], with linear interpolation at the ends.
    [[nodiscard]] double integral(double a, double b) const {
        const double xa = (a - t_first) / h;
        const double xb = (b - t_first) / h;
        const auto ia = static_cast<std::size_t>(std::ceil(xa));
        const auto ib = static_cast<std::size_t>(std::floor(xb));
        if (ib < ia) {
            return 0.5 * (value(a) + value(b)) * (b - a);
        }
        double sum = 0.5 * (value(a) + v[ia]) * (time(ia) - a);
        for (std::size_t i = ia; i < ib; ++i) {
            sum += 0.5 * (v[i] + v[i + 1]) * h;
        }
        sum += 0.5 * (v[ib] + value(b)) * (b - time(ib));
        return sum;
    }

    [[nodiscard]] std::vector<double> upward_crossings(double level) const {
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double a = v[i] - level;
            const double b = v[i + 1] - level;
            if (a < 0.0 && b >= 0.0) {
                out.push_back(time(i) + h * (-a / (b - a)));
            }
        }
        return out;
    }

    // Extremum of the samples in [a, b], refined by a parabola through the
    // neighbouring samples.
    [[nodiscard]] double extremum(double a, double b, bool maximum) const {
        const auto ia = static_cast<std::size_t>(std::max(0.0, std::ceil((a - t_first) / h)));
        const auto ib = std::min(v.size() - 1, static_cast<std::size_t>(std::floor((b - t_first) / h)));
        std::size_t best = ia;
        for (std::size_t i = ia; i <= ib; ++i) {
            if (maximum ? v[i] > v[best] : v[i] < v[best]) {
                best = i;
            }
        }
        if (best == 0 || best + 1 >= v.size()) {
            return v[best];
        }
        const double ym = v[best - 1];
        const double y0 = v[best];
        const double yp = v[best + 1];
        const double curv = ym - 2.0 * y0 + yp;
        if (curv == 0.0) {
            return y0;
        }
        return y0 - (yp - ym) * (yp - ym) / (8.0 * curv);
    }
};

// Earliest node index after which successive maxima drift by less than
// `tol` times the final amplitude, scanning from the last maximum backwards.
std::size_t settled_index(std::span<const double> v, double tol) {
    const std::size_t n = v.size();
    const std::size_t tail = n - n / 4;
    const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(tail), v.end());
    const double amp = 0.5 * (*hi - *lo);
    if (!(amp > 0.0)) {
        return 0;
    }
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (v[i] > v[i - 1] && v[i] >= v[i + 1]) {
            peaks.push_back(i);
        }
    }
    if (peaks.size() < 2) {
        return 0;
    }
    std::size_t j = peaks.size() - 1;
    while (j > 0 && std::abs(v[peaks[j]] - v[peaks[j - 1]]) <= tol * amp) {
        --j;
    }
    return peaks[j];
}

}  // namespace

CycleEstimate estimate_cycle(const Trajectory& traj, double p_star, const EstimatorSettings& settings) {
    if (!(p_star > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "p_star must be positive");
    }
    const auto values = traj.values();
    const std::size_t n = values.size();
    const auto by_fraction = static_cast<std::size_t>(std::ceil(settings.transient_fraction * (n - 1)));
    const std::size_t start = std::min(std::max(by_fraction, settled_index(values, settings.drift_tolerance)), n - 3);

    const Window w{values.subspan(start), traj.time(start), traj.step()};
    CycleEstimate est;
    est.transient_end = w.t_first;

    const double t_last = w.time(w.v.size() - 1);
    const double window_mean = w.integral(w.t_first, t_last) / (t_last - w.t_first);
    const auto [lo, hi] = std::minmax_element(w.v.begin(), w.v.end());
    est.max_excursion = std::max(std::abs(*hi - p_star), std::abs(*lo - p_star));

    if (est.max_excursion < settings.equilibrium_threshold * p_star) {
        est.regime = Regime::Equilibrium;
        est.amplitude = 0.5 * (*hi - *lo);
        est.mean = window_mean;
        return est;
    }

    // Crossing levels first use the window mean, then the whole-cycle mean.
    std::vector<double> crossings = w.upward_crossings(window_mean);
    double mean = window_mean;
    if (crossings.size() >= 2) {
        mean = w.integral(crossings.front(), crossings.back()) / (crossings.back() - crossings.front());
        crossings = w.upward_crossings(mean);
    }
    if (crossings.size() < settings.min_cycles + 1) {
        throw Error(ErrorCode::TooShort, "only " + std::to_string(crossings.empty() ? 0 : crossings.size() - 1) +
                                             " complete cycles after the transient");
    }
    mean = w.integral(crossings.front(), crossings.back()) / (crossings.back() - crossings.front());

    const std::size_t cycles = crossings.size() - 1;
    const double period = (crossings.back() - crossings.front()) / static_cast<double>(cycles);
    double var = 0.0;
    double p2t = 0.0;
    for (std::size_t i = 0; i < cycles; ++i) {
        const double len = crossings[i + 1] - crossings[i];
        var += (len - period) * (len - period);
        p2t += w.extremum(crossings[i], crossings[i + 1], true) - w.extremum(crossings[i], crossings[i + 1], false);
    }
    est.cycles = cycles;
    est.period = period;
    est.period_dispersion = std::sqrt(var / static_cast<double>(cycles)) / period;
    est.amplitude = 0.5 * p2t / static_cast<double>(cycles);
    est.mean = mean;
    est.regime = est.period_dispersion < settings.max_period_dispersion ? Regime::LimitCycle : Regime::Undetermined;
    return est;
}

PredictionErrors compare_prediction(const CycleEstimate& est, const CyclePrediction& pred) {
    if (est.regime != Regime::LimitCycle) {
        throw Error(ErrorCode::RegimeMismatch, "prediction comparison needs a limit-cycle estimate, got " +
                                                   std::string(to_string(est.regime)));
    }
    const auto rel = [](double measured, double predicted) {
        if (predicted == 0.0) {
            return measured == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        return std::abs(measured - predicted) / std::abs(predicted);
    };
    return {
        rel(est.amplitude, pred.amplitude),
        rel(est.period, pred.period),
        rel(est.mean - pred.p_star, pred.mean_offset),
    };
}

namespace {

DiagramRow evaluate_row(const ModelConfig& config, double tau, const SimulationSettings& sim, double p_star,
                        const HopfExpansion& expansion) {
    DiagramRow row;
    row.tau = tau;
    try {
        const ModelConfig cfg = config.with_tau(tau);
        const double step = sim.step > 0.0 ? sim.step : default_step(tau, expansion.omega0);
        const HistoryFunction history =
            sim.history_p0 ? HistoryFunction::constant(*sim.history_p0) : default_history(p_star);
        const Trajectory traj = simulate(cfg, history, sim.t_end, step);
        row.measured = estimate_cycle(traj, p_star, sim.estimator);
        if (tau > expansion.tau0) {
            try {
                row.predicted = predicted_cycle(expansion, tau);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::WrongSide) {
                    throw;
                }
            }
        }
        if (row.predicted && row.measured->regime == Regime::LimitCycle) {
            row.errors = compare_prediction(*row.measured, *row.predicted);
        }
    } catch (const Error& e) {
        row.status = e.what();
    }
    return row;
}

}  // namespace

std::vector<DiagramRow> sweep(const ModelConfig& config, std::span<const double> tau_values,
                              const SimulationSettings& sim, unsigned threads) {
    if (tau_values.empty()) {
        throw Error(ErrorCode::InvalidArgument, "sweep needs at least one tau value");
    }
    for (double tau : tau_values) {
        if (!(tau >= 0.0) || !std::isfinite(tau)) {
            throw Error(ErrorCode::InvalidArgument, "sweep tau values must be non-negative");
        }
    }
    const Equilibrium eq = find_equilibrium(config);
    const TaylorCoefficients coeffs = taylor_coefficients(config, eq);
    const HopfExpansion expansion = hopf_expansion(coeffs, linear_analysis(coeffs));

    std::vector<double> taus(tau_values.begin(), tau_values.end());
    std::sort(taus.begin(), taus.end());

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    std::vector<DiagramRow> rows(taus.size());
    for (std::size_t base = 0; base < taus.size(); base += threads) {
        const std::size_t end = std::min(taus.size(), base + threads);
        std::vector<std::future<DiagramRow>> batch;
        for (std::size_t i = base; i < end; ++i) {
            batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, evaluate_row,
                                       std::cref(config), taus[i], std::cref(sim), eq.p_star, std::cref(expansion)));
        }
        for (std::size_t i = base; i < end; ++i) {
            rows[i] = batch[i - base].get();
        }
    }
    return rows;
}

void write_diagram_csv(std::span<const DiagramRow> rows, std::ostream& os) {
    os << "tau,regime,amp_meas,period_meas,mean_meas,amp_pred,period_pred,mean_offset_pred,amp_err,period_err,status\n";
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const auto& row : rows) {
        num(row.tau);
        os << ',';
        if (row.measured) {
            os << to_string(row.measured->regime) << ',';
            num(row.measured->amplitude);
            os << ',';
            num(row.measured->period);
            os << ',';
            num(row.measured->mean);
            os << ',';
        } else {
            os << ",,,,";
        }
        if (row.predicted) {
            num(row.predicted->amplitude);
            os << ',';
            num(row.predicted->period);
            os << ',';
            num(row.predicted->mean_offset);
            os << ',';
        } else {
            os << ",,,";
        }
        if (row.errors) {
            num(row.errors->amplitude);
            os << ',';
            num(row.errors->period);
            os << ',';
        } else {
            os << ",,";
        }
        // Only the error code: messages may contain commas.
        const auto colon = row.status.find(':');
        os << (colon == std::string::npos ? row.status : row.status.substr(0, colon)) << '\n';
    }
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "line fit needs at least two paired points");
    }
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "line fit needs distinct abscissae");
    }
    const double slope = sxy / sxx;
    const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {slope, my - slope * mx, r2, x.size()};
}

LinearFit fit_square_root_law(std::span<const DiagramRow> rows, double tau0) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& row : rows) {
        if (row.measured && row.measured->regime == Regime::LimitCycle && row.tau > tau0) {
            x.push_back(row.tau - tau0);
            y.push_back(row.measured->amplitude * row.measured->amplitude);
        }
    }
    return fit_line(x, y);
}

}  // namespace hopfdual
