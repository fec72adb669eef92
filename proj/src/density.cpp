#include "helmspec/density.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "helmspec/errors.hpp"
#include "helmspec/format.hpp"

namespace helmspec {

DensitySpec DensitySpec::constant(double c) {
    if (!(c > 0.0)) fail(ErrorCode::NonPositiveDensity, "constant density must be positive");
    return DensitySpec(Constant{c});
}

DensitySpec DensitySpec::parabolic(double alpha) {
    if (!std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "alpha must be finite");
    return DensitySpec(Parabolic{alpha});
}

DensitySpec DensitySpec::oscillating(double epsilon, double eta) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (!std::isfinite(eta)) fail(ErrorCode::InvalidArgument, "eta must be finite");
    return DensitySpec(Oscillating{epsilon, eta});
}

DensitySpec DensitySpec::separable(DensitySpec x_factor, DensitySpec y_factor) {
    return DensitySpec(Separable2D{std::make_shared<const DensitySpec>(std::move(x_factor)),
                                   std::make_shared<const DensitySpec>(std::move(y_factor))});
}

DensitySpec DensitySpec::custom(std::function<double(Point)> evaluator, std::string label) {
    if (!evaluator) fail(ErrorCode::InvalidArgument, "custom density needs an evaluator");
    return DensitySpec(Custom{std::move(evaluator), std::move(label)});
}

bool DensitySpec::varies_in_x_only() const {
    return !std::holds_alternative<Separable2D>(kind_) && !std::holds_alternative<Custom>(kind_);
}

bool DensitySpec::is_separable() const { return !std::holds_alternative<Custom>(kind_); }

namespace {

double oscillating_value(const DensitySpec::Oscillating& o, double x) {
    // fmod is exact, so shifts by whole periods leave the argument unchanged
    const double r = std::fmod(x + 0.5 * o.eta, o.epsilon);
    return 2.0 + std::sin(2.0 * std::numbers::pi * r / o.epsilon);
}

}  // namespace

double DensitySpec::raw(Point p) const {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return k.c;
            } else if constexpr (std::is_same_v<T, Parabolic>) {
                const double s = 1.0 + k.alpha * p.x;
                return s * s;
            } else if constexpr (std::is_same_v<T, Oscillating>) {
                return oscillating_value(k, p.x);
            } else if constexpr (std::is_same_v<T, Separable2D>) {
                return k.x_factor->raw(Point{p.x, 0.0}) * k.y_factor->raw(Point{p.y, 0.0});
            } else {
                return k.evaluator(p);
            }
        },
        kind_);
}

double DensitySpec::raw_sqrt(Point p) const {
    if (const auto* par = as<Parabolic>()) return std::abs(1.0 + par->alpha * p.x);
    if (const auto* sep = as<Separable2D>())
        return sep->x_factor->raw_sqrt(Point{p.x, 0.0}) * sep->y_factor->raw_sqrt(Point{p.y, 0.0});
    const double v = raw(p);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

std::string DensitySpec::describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return "constant:c=" + format_double(k.c);
            } else if constexpr (std::is_same_v<T, Parabolic>) {
                return "parabolic:alpha=" + format_double(k.alpha);
            } else if constexpr (std::is_same_v<T, Oscillating>) {
                return "oscillating:epsilon=" + format_double(k.epsilon) + ",eta=" + format_double(k.eta);
            } else if constexpr (std::is_same_v<T, Separable2D>) {
                return "separable(" + k.x_factor->describe() + ";" + k.y_factor->describe() + ")";
            } else {
                return "custom:" + k.label;
            }
        },
        kind_);
}

double eval_density(const DensitySpec& spec, Point p) {
    const double v = spec.raw(p);
    if (!(v > 0.0)) fail(ErrorCode::NonPositiveDensity, spec.describe() + " not positive at x=" + format_double(p.x));
    return v;
}

double eval_sqrt_density(const DensitySpec& spec, Point p) {
    const double v = spec.raw_sqrt(p);
    if (!(v > 0.0)) fail(ErrorCode::NonPositiveDensity, spec.describe() + " not positive at x=" + format_double(p.x));
    return v;
}

void validate_density(const DensitySpec& spec, const Domain& domain) {
    if (const auto* par = spec.as<DensitySpec::Parabolic>()) {
        if (std::abs(par->alpha) > 2.0 / domain.a() * (1.0 + 1e-14))
            fail(ErrorCode::NonPositiveDensity, "parabolic density needs |alpha| <= 2/a");
    } else if (const auto* c = spec.as<DensitySpec::Constant>()) {
        if (!(c->c > 0.0)) fail(ErrorCode::NonPositiveDensity, "constant density must be positive");
    } else if (const auto* sep = spec.as<DensitySpec::Separable2D>()) {
        validate_density(*sep->x_factor, Domain::interval(domain.a()));
        if (domain.is_rectangle()) validate_density(*sep->y_factor, Domain::interval(domain.b()));
    }
}

namespace {

std::map<std::string, double> parse_params(std::string_view text, std::string_view positional_key) {
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        if (!item.empty()) {
            std::string key;
            std::string_view val = item;
            if (auto eq = item.find('='); eq != std::string_view::npos) {
                key = std::string(item.substr(0, eq));
                val = item.substr(eq + 1);
            } else {
                key = std::string(positional_key);
            }
            out[key] = parse_double(val);
        }
        pos = end + 1;
    }
    return out;
}

double take(std::map<std::string, double>& params, const std::string& key, std::string_view text) {
    auto it = params.find(key);
    if (it == params.end()) fail(ErrorCode::ConfigError, "density '" + std::string(text) + "' is missing " + key);
    double v = it->second;
    params.erase(it);
    return v;
}

}  // namespace

DensitySpec parse_density(std::string_view text) {
    const auto colon = text.find(':');
    const std::string kind(text.substr(0, colon));
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    std::map<std::string, double> params;
    DensitySpec out = DensitySpec::constant(1.0);
    try {
        if (kind == "constant") {
            params = parse_params(rest, "c");
            out = DensitySpec::constant(params.empty() ? 1.0 : take(params, "c", text));
        } else if (kind == "parabolic") {
            params = parse_params(rest, "alpha");
            out = DensitySpec::parabolic(take(params, "alpha", text));
        } else if (kind == "oscillating") {
            params = parse_params(rest, "epsilon");
            const double eps = take(params, "epsilon", text);
            const double eta = params.count("eta") ? take(params, "eta", text) : 1.0;
            out = DensitySpec::oscillating(eps, eta);
        } else {
            fail(ErrorCode::ConfigError, "unknown density kind '" + kind + "'");
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        fail(ErrorCode::ConfigError, "density '" + std::string(text) + "': " + e.what());
    }
    if (!params.empty()) fail(ErrorCode::ConfigError, "density '" + std::string(text) + "' has unknown key " + params.begin()->first);
    return out;
}

}  // namespace helmspec
