#include "hopfdual/demand.hpp"

#include <cmath>
#include <sstream>

#include "hopfdual/errors.hpp"
#include "hopfdual/numeric_diff.hpp"

namespace hopfdual {

class DemandFunction::Model {
public:
    Model(DemandKind kind, std::string name, double lo, double hi)
        : kind_(kind), name_(std::move(name)), lo_(lo), hi_(hi) {}
    virtual ~Model() = default;

    [[nodiscard]] virtual double eval(double p, int order) const = 0;

    [[nodiscard]] DemandKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }

private:
    DemandKind kind_;
    std::string name_;
    double lo_;
    double hi_;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_param(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

class ReciprocalModel final : public DemandFunction::Model {
public:
    explicit ReciprocalModel(double w)
        : Model(DemandKind::Reciprocal, "reciprocal(w=" + format_param(w) + ")", 0.0, kInf), w_(w) {}

    [[nodiscard]] double eval(double p, int order) const override {
        switch (order) {
            case 0: return w_ / p;
            case 1: return -w_ / (p * p);
            case 2: return 2.0 * w_ / (p * p * p);
            case 3: return -6.0 * w_ / (p * p * p * p);
            default: throw Error(ErrorCode::InvalidArgument, "derivative order must be in [0, 3]");
        }
    }

private:
    double w_;
};

// x = (w/p)^e with e = 1/alpha; x^(n) = (-1)^n e(e+1)...(e+n-1) x / p^n.
class PowerLawModel final : public DemandFunction::Model {
public:
    PowerLawModel(double w, double alpha)
        : Model(DemandKind::PowerLaw,
                "power_law(w=" + format_param(w) + ",alpha=" + format_param(alpha) + ")", 0.0, kInf),
          w_(w),
          e_(1.0 / alpha) {}

    [[nodiscard]] double eval(double p, int order) const override {
        if (order < 0 || order > 3) {
            throw Error(ErrorCode::InvalidArgument, "derivative order must be in [0, 3]");
        }
        double result = std::pow(w_ / p, e_);
        for (int i = 0; i < order; ++i) {
            result *= -(e_ + i) / p;
        }
        return result;
    }

private:
    double w_;
    double e_;
};

class NumericModel final : public DemandFunction::Model {
public:
    NumericModel(std::string name, DemandFunction::ScalarFn fn, double lo, double hi)
        : Model(DemandKind::Numeric, std::move(name), lo, hi), fn_(std::move(fn)) {}

    [[nodiscard]] double eval(double p, int order) const override {
        const auto f = [this](double q) {
            const double v = fn_(q);
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::DomainViolation, "demand function returned a non-finite value");
            }
            return v;
        };
        return numeric::derivative_in_domain(f, p, order, lo(), hi());
    }

private:
    DemandFunction::ScalarFn fn_;
};

}  // namespace

DemandFunction DemandFunction::reciprocal(double w) {
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::InvalidArgument, "reciprocal demand requires w > 0");
    }
    return DemandFunction(std::make_shared<ReciprocalModel>(w));
}

DemandFunction DemandFunction::power_law(double w, double alpha) {
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::InvalidArgument, "power-law demand requires w > 0");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorCode::InvalidArgument, "power-law demand requires alpha > 0");
    }
    return DemandFunction(std::make_shared<PowerLawModel>(w, alpha));
}

DemandFunction DemandFunction::numeric(std::string name, ScalarFn fn, double lo, double hi) {
    if (!fn) {
        throw Error(ErrorCode::InvalidArgument, "numeric demand requires a callable");
    }
    if (!(lo < hi) || std::isnan(lo) || std::isnan(hi)) {
        throw Error(ErrorCode::InvalidArgument, "numeric demand requires lo < hi");
    }
    return DemandFunction(std::make_shared<NumericModel>(std::move(name), std::move(fn), lo, hi));
}

double DemandFunction::derivative(double p, int order) const {
    if (!contains(p)) {
        throw Error(ErrorCode::DomainViolation,
                    "price " + format_param(p) + " outside the domain of " + model_->name());
    }
    return model_->eval(p, order);
}

bool DemandFunction::contains(double p) const noexcept {
    return p > model_->lo() && p < model_->hi();
}

double DemandFunction::domain_lo() const noexcept { return model_->lo(); }
double DemandFunction::domain_hi() const noexcept { return model_->hi(); }
DemandKind DemandFunction::kind() const noexcept { return model_->kind(); }
const std::string& DemandFunction::name() const noexcept { return model_->name(); }

}  // namespace hopfdual
