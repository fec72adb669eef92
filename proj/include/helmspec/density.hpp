#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "helmspec/domain.hpp"

namespace helmspec {

class DensitySpec {
public:
    struct Constant {
        double c;
    };
    // (1 + alpha x)^2
    struct Parabolic {
        double alpha;
    };
    // 2 + sin(2 pi (x + eta/2) / epsilon)
    struct Oscillating {
        double epsilon;
        double eta;
    };
    struct Separable2D {
        std::shared_ptr<const DensitySpec> x_factor;
        std::shared_ptr<const DensitySpec> y_factor;
    };
    struct Custom {
        std::function<double(Point)> evaluator;
        std::string label;
    };
    using Kind = std::variant<Constant, Parabolic, Oscillating, Separable2D, Custom>;

    static DensitySpec constant(double c);
    static DensitySpec parabolic(double alpha);
    static DensitySpec oscillating(double epsilon, double eta);
    static DensitySpec separable(DensitySpec x_factor, DensitySpec y_factor);
    static DensitySpec custom(std::function<double(Point)> evaluator, std::string label = "custom");

    const Kind& kind() const { return kind_; }

    template <class T>
    const T* as() const { return std::get_if<T>(&kind_); }

    // True when the density does not depend on y (all 1D kinds).
    bool varies_in_x_only() const;
    bool is_separable() const;

    // Parameter string understood by parse_density ("parabolic:alpha=2").
    std::string describe() const;

    // Raw value without positivity check.
    double raw(Point p) const;
    double raw_sqrt(Point p) const;

private:
    explicit DensitySpec(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

double eval_density(const DensitySpec& spec, Point p);
double eval_sqrt_density(const DensitySpec& spec, Point p);
inline double eval_density(const DensitySpec& spec, double x) { return eval_density(spec, Point{x, 0.0}); }
inline double eval_sqrt_density(const DensitySpec& spec, double x) { return eval_sqrt_density(spec, Point{x, 0.0}); }

// Checks parameter constraints that depend on the domain (parabolic |alpha| <= 2/a).
void validate_density(const DensitySpec& spec, const Domain& domain);

// "constant:1", "constant:c=1", "parabolic:alpha=2", "oscillating:epsilon=0.1,eta=1".
DensitySpec parse_density(std::string_view text);

}  // namespace helmspec
