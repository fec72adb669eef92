#include "helmspec/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "helmspec/errors.hpp"

namespace helmspec {

using std::numbers::pi;

bool has_zero_mode(BoundaryCondition bc) { return bc == BoundaryCondition::NN || bc == BoundaryCondition::PP; }

std::string_view to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::DD: return "dd";
        case BoundaryCondition::ND: return "nd";
        case BoundaryCondition::DN: return "dn";
        case BoundaryCondition::NN: return "nn";
        case BoundaryCondition::PP: return "pp";
    }
    return "?";
}

BoundaryCondition parse_bc(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "dd") return BoundaryCondition::DD;
    if (t == "nd") return BoundaryCondition::ND;
    if (t == "dn") return BoundaryCondition::DN;
    if (t == "nn") return BoundaryCondition::NN;
    if (t == "pp") return BoundaryCondition::PP;
    fail(ErrorCode::ConfigError, "unknown boundary condition '" + t + "' (expected dd|nd|dn|nn|pp)");
}

namespace {

double dirichlet_1d(double a, int n, double x) { return std::sqrt(2.0 / a) * std::sin(n * pi * (x + 0.5 * a) / a); }

}  // namespace

double Mode::operator()(double x) const {
    const double norm = std::sqrt(2.0 / a_);
    switch (bc_) {
        case BoundaryCondition::DD: return dirichlet_1d(a_, n_, x);
        case BoundaryCondition::ND: return norm * std::sin(pi * (2 * n_ - 1) * (2.0 * x + 3.0 * a_) / (4.0 * a_));
        case BoundaryCondition::DN: return norm * std::sin(pi * (2 * n_ - 1) * (x + 0.5 * a_) / (2.0 * a_));
        case BoundaryCondition::NN:
            if (n_ == 0) return 1.0 / std::sqrt(a_);
            if (u_ == 1) return norm * std::cos(2.0 * n_ * pi * x / a_);
            return norm * std::sin((2 * n_ - 1) * pi * x / a_);
        case BoundaryCondition::PP:
            if (n_ == 0) return 1.0 / std::sqrt(a_);
            if (u_ == 1) return norm * std::cos(2.0 * n_ * pi * x / a_);
            return norm * std::sin(2.0 * n_ * pi * x / a_);
    }
    return 0.0;
}

double Mode::operator()(Point p) const {
    if (ny_ > 0) return dirichlet_1d(a_, n_, p.x) * dirichlet_1d(b_, ny_, p.y);
    return (*this)(p.x);
}

Mode mode(BoundaryCondition bc, const Domain& domain, int n, int u) {
    if (!domain.is_interval()) fail(ErrorCode::InvalidArgument, "1D modes need an interval domain");
    const double a = domain.a();
    Mode m;
    m.bc_ = bc;
    m.n_ = n;
    m.u_ = u;
    m.a_ = a;
    const auto bad = [&] {
        fail(ErrorCode::UnsupportedIndex,
             "mode (n=" + std::to_string(n) + ", u=" + std::to_string(u) + ") invalid for " + std::string(to_string(bc)));
    };
    if (u != 1 && u != 2) bad();
    switch (bc) {
        case BoundaryCondition::DD:
            if (n < 1 || u != 1) bad();
            m.eigenvalue_ = std::pow(n * pi / a, 2);
            break;
        case BoundaryCondition::ND:
        case BoundaryCondition::DN:
            if (n < 1 || u != 1) bad();
            m.eigenvalue_ = std::pow((2 * n - 1) * pi / (2.0 * a), 2);
            break;
        case BoundaryCondition::NN:
            if (n < 0 || (n == 0 && u != 1)) bad();
            m.eigenvalue_ = n == 0 ? 0.0 : (u == 1 ? std::pow(2.0 * n * pi / a, 2) : std::pow((2 * n - 1) * pi / a, 2));
            break;
        case BoundaryCondition::PP:
            if (n < 0 || (n == 0 && u != 1)) bad();
            m.eigenvalue_ = std::pow(2.0 * n * pi / a, 2);
            break;
    }
    return m;
}

Mode product_mode(const Domain& rect, int nx, int ny) {
    if (!rect.is_rectangle()) fail(ErrorCode::InvalidArgument, "product modes need a rectangle");
    if (nx < 1 || ny < 1) fail(ErrorCode::UnsupportedIndex, "product mode indices start at 1");
    Mode m;
    m.bc_ = BoundaryCondition::DD;
    m.n_ = nx;
    m.ny_ = ny;
    m.a_ = rect.a();
    m.b_ = rect.b();
    m.eigenvalue_ = std::pow(nx * pi / rect.a(), 2) + std::pow(ny * pi / rect.b(), 2);
    return m;
}

std::vector<Mode> lowest_modes(BoundaryCondition bc, const Domain& interval, int count) {
    if (count < 1) fail(ErrorCode::InvalidArgument, "mode count must be positive");
    std::vector<Mode> all;
    for (int n = 1; n <= count; ++n) {
        all.push_back(mode(bc, interval, n, 1));
        if (has_zero_mode(bc)) all.push_back(mode(bc, interval, n, 2));
    }
    std::stable_sort(all.begin(), all.end(), [](const Mode& l, const Mode& r) {
        return std::make_tuple(l.eigenvalue(), l.n(), l.u()) < std::make_tuple(r.eigenvalue(), r.n(), r.u());
    });
    all.resize(static_cast<std::size_t>(count), all.front());
    return all;
}

std::vector<Mode> lowest_product_modes(const Domain& rect, int count) {
    if (count < 1) fail(ErrorCode::InvalidArgument, "mode count must be positive");
    // The count modes (nx, 1) bound the count-th eigenvalue from above, likewise (1, ny).
    const double limit = std::min(product_mode(rect, count, 1).eigenvalue(), product_mode(rect, 1, count).eigenvalue());
    std::vector<Mode> all;
    for (int nx = 1; nx <= count; ++nx) {
        for (int ny = 1; ny <= count; ++ny) {
            Mode m = product_mode(rect, nx, ny);
            if (m.eigenvalue() > limit) break;
            all.push_back(m);
        }
    }
    std::sort(all.begin(), all.end(), [](const Mode& l, const Mode& r) {
        return std::make_tuple(l.eigenvalue(), l.n(), l.ny()) < std::make_tuple(r.eigenvalue(), r.n(), r.ny());
    });
    all.resize(static_cast<std::size_t>(count), all.front());
    return all;
}

namespace {

void check_points(const Domain& domain, double x, double y) {
    domain.require_contains(Point{x, 0.0});
    domain.require_contains(Point{y, 0.0});
}

}  // namespace

double green_closed_1d(BoundaryCondition bc, const Domain& domain, double x, double y) {
    if (has_zero_mode(bc)) fail(ErrorCode::ZeroModePresent, "closed-form kernel exists only for dd|nd|dn");
    check_points(domain, x, y);
    return green_kernel_1d(bc, domain)(x, y);
}

double green_regularized_1d(BoundaryCondition bc, const Domain& domain, double x, double y) {
    if (!has_zero_mode(bc)) fail(ErrorCode::InvalidArgument, "regularized kernel is for nn|pp");
    check_points(domain, x, y);
    return green_kernel_1d(bc, domain)(x, y);
}

double green_gamma_nn_1d(const Domain& domain, double gamma, double x, double y) {
    if (!(gamma > 0.0)) fail(ErrorCode::NonPositiveGamma, "gamma must be positive");
    check_points(domain, x, y);
    const double a = domain.a();
    const double k = std::sqrt(gamma);
    const double s_lo = std::min(x, y) + 0.5 * a;
    const double s_hi = std::max(x, y) + 0.5 * a;
    // cosh(k s<) cosh(k (a - s>)) / (k sinh(k a)), scaled to avoid overflow.
    return std::exp(-k * (s_hi - s_lo)) * (1.0 + std::exp(-2.0 * k * s_lo)) * (1.0 + std::exp(-2.0 * k * (a - s_hi))) /
           (-2.0 * k * std::expm1(-2.0 * k * a));
}

double green_gamma_dd_1d(const Domain& domain, double gamma, double x, double y) {
    if (!(gamma > 0.0)) fail(ErrorCode::NonPositiveGamma, "gamma must be positive");
    check_points(domain, x, y);
    const double a = domain.a();
    const double k = std::sqrt(gamma);
    const double s_lo = std::min(x, y) + 0.5 * a;
    const double s_hi = std::max(x, y) + 0.5 * a;
    return std::exp(-k * (s_hi - s_lo)) * std::expm1(-2.0 * k * s_lo) * std::expm1(-2.0 * k * (a - s_hi)) /
           (-2.0 * k * std::expm1(-2.0 * k * a));
}

SemiSeparableKernel rect_y_kernel(double k, double b) {
    SemiSeparableKernel g;
    g.decay = k;
    const double denom = -2.0 * k * std::expm1(-2.0 * k * b);
    g.terms.push_back({[k, b, denom](double y) { return -std::expm1(-2.0 * k * (0.5 * b - y)) / denom; },
                       [k, b](double y) { return -std::expm1(-2.0 * k * (y + 0.5 * b)); }});
    return g;
}

TruncatedValue green_rect_2d(const Domain& rect, double x, double y, double xp, double yp, int nx_max) {
    if (!rect.is_rectangle()) fail(ErrorCode::InvalidArgument, "rectangle kernel needs a rectangle");
    if (nx_max < 1) fail(ErrorCode::InvalidArgument, "nx_max must be >= 1");
    rect.require_contains(Point{x, y});
    rect.require_contains(Point{xp, yp});
    const double a = rect.a();
    const double b = rect.b();
    const double ylo = std::min(y, yp);
    const double yhi = std::max(y, yp);
    TruncatedValue out{0.0, 0.0};
    for (int n = 1; n <= nx_max + 1; ++n) {
        const auto g = rect_y_kernel(n * pi / a, b);
        const double gy = g(yhi, ylo);
        if (n <= nx_max)
            out.value += gy * dirichlet_1d(a, n, x) * dirichlet_1d(a, n, xp);
        else
            out.first_omitted = std::abs(gy) * 2.0 / a;
    }
    return out;
}

SemiSeparableKernel green_kernel_1d(BoundaryCondition bc, const Domain& domain) {
    const double a = domain.a();
    const double h = 0.5 * a;
    SemiSeparableKernel g;
    switch (bc) {
        case BoundaryCondition::DD:
            // s< (a - s>) / a with s = x + a/2
            g.terms.push_back({[a, h](double x) { return (h - x) / a; }, [h](double y) { return y + h; }});
            break;
        case BoundaryCondition::ND:
            g.terms.push_back({[h](double x) { return h - x; }, [](double) { return 1.0; }});
            break;
        case BoundaryCondition::DN:
            g.terms.push_back({[](double) { return 1.0; }, [h](double y) { return y + h; }});
            break;
        case BoundaryCondition::NN:
            // a/3 - s> + (s<^2 + s>^2)/(2a)
            g.terms.push_back({[](double) { return 1.0; },
                               [a, h](double y) { return a / 3.0 + (y + h) * (y + h) / (2.0 * a); }});
            g.terms.push_back({[a, h](double x) { return -(x + h) + (x + h) * (x + h) / (2.0 * a); },
                               [](double) { return 1.0; }});
            break;
        case BoundaryCondition::PP:
            // d^2/(2a) - d/2 + a/12 with d = x> - x<
            g.terms.push_back({[a](double x) { return x * x / (2.0 * a) - 0.5 * x + a / 12.0; },
                               [](double) { return 1.0; }});
            g.terms.push_back({[](double) { return 1.0; }, [a](double y) { return y * y / (2.0 * a) + 0.5 * y; }});
            g.terms.push_back({[a](double x) { return -x / a; }, [](double y) { return y; }});
            break;
    }
    return g;
}

double GreenKernel::operator()(Point p, Point q) const {
    switch (form) {
        case Form::ClosedForm1D: return green_closed_1d(bc, domain, p.x, q.x);
        case Form::Regularized1D: return green_regularized_1d(bc, domain, p.x, q.x);
        case Form::GammaShifted1D: return green_gamma_nn_1d(domain, gamma, p.x, q.x);
        case Form::RectPartialSum: return green_rect_2d(domain, p.x, p.y, q.x, q.y, nx_max).value;
    }
    return 0.0;
}

}  // namespace helmspec
