#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace hopfdual {

enum class DemandKind { Reciprocal, PowerLaw, Numeric };

/// Strictly decreasing rate-demand curve x(p) with derivatives up to third
/// order. Cheap to copy; the underlying model is shared and immutable.
class DemandFunction {
public:
    using ScalarFn = std::function<double(double)>;

    /// x(p) = w / p.
    static DemandFunction reciprocal(double w = 1.0);

    /// x(p) = (w / p)^(1/alpha).
    static DemandFunction power_law(double w, double alpha);

    /// Wraps an arbitrary scalar function on the open interval (lo, hi).
    /// Derivatives come from Richardson-extrapolated central differences.
    static DemandFunction numeric(std::string name, ScalarFn fn, double lo, double hi);

    [[nodiscard]] double operator()(double p) const { return derivative(p, 0); }
    [[nodiscard]] double d1(double p) const { return derivative(p, 1); }
    [[nodiscard]] double d2(double p) const { return derivative(p, 2); }
    [[nodiscard]] double d3(double p) const { return derivative(p, 3); }

    /// order in [0, 3]; throws DomainViolation outside the open domain.
    [[nodiscard]] double derivative(double p, int order) const;

    [[nodiscard]] bool contains(double p) const noexcept;
    [[nodiscard]] double domain_lo() const noexcept;
    [[nodiscard]] double domain_hi() const noexcept;
    [[nodiscard]] DemandKind kind() const noexcept;
    [[nodiscard]] const std::string& name() const noexcept;

    class Model;

private:
    explicit DemandFunction(std::shared_ptr<const Model> model) : model_(std::move(model)) {}

    std::shared_ptr<const Model> model_;
};

}  // namespace hopfdual
