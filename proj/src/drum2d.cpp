#include "helmspec/drum2d.hpp"

#include <cmath>
#include <numbers>

#include "helmspec/errors.hpp"
#include "helmspec/solvers.hpp"

namespace helmspec {

using std::numbers::pi;

namespace {

void check_args(double a, double b, double alpha) {
    if (!(a > 0.0) || !(b > 0.0)) fail(ErrorCode::InvalidArgument, "rectangle sides must be positive");
    if (std::abs(alpha) > 2.0 / a * (1.0 + 1e-14)) fail(ErrorCode::NonPositiveDensity, "need |alpha| <= 2/a");
}

}  // namespace

double bound0(double a, double b, double alpha, double beta) {
    check_args(a, b, alpha);
    const double pi2 = pi * pi, pi4 = pi2 * pi2;
    const double a2 = a * a, b2 = b * b;
    const double num = 20.0 * pi4 * (6.0 * a2 * beta * beta * (b2 - a2) + pi2 * (a2 + b2) * (a2 * beta * beta + 12.0));
    const double den = a2 * b2 *
                       (3.0 * (120.0 - 20.0 * pi2 + pi4) * a2 * a2 * alpha * alpha * beta * beta +
                        20.0 * pi2 * (pi2 - 6.0) * a2 * (alpha * alpha + 4.0 * alpha * beta + beta * beta) + 240.0 * pi4);
    return num / den;
}

double gamma_disc(double a, double b, double alpha) {
    const double pi2 = pi * pi, pi4 = pi2 * pi2;
    const double a2 = a * a, b2 = b * b, al2 = alpha * alpha;
    const double first = 300.0 * pi2 * std::pow(pi2 - 6.0, 2) * a2 * al2 * (a2 + b2) * ((pi2 - 6.0) * a2 + (6.0 + pi2) * b2);
    const double inner = std::pow(pi2 - 15.0, 2) * a2 * a2 * al2 + (315.0 - 45.0 * pi2 + pi4) * a2 * al2 * b2 - 180.0 * pi2 * b2;
    return first + inner * inner;
}

double beta_star(double a, double b, double alpha) {
    check_args(a, b, alpha);
    if (alpha == 0.0) return 0.0;
    const double pi2 = pi * pi, pi4 = pi2 * pi2;
    const double a2 = a * a, b2 = b * b, al2 = alpha * alpha;
    const double num = 45.0 * a2 * al2 * (5.0 * a2 + 7.0 * b2) + pi4 * a2 * al2 * (a2 + b2) -
                       15.0 * pi2 * (2.0 * a2 * a2 * al2 + 3.0 * b2 * (a2 * al2 + 4.0)) + std::sqrt(gamma_disc(a, b, alpha));
    const double den = 5.0 * (pi2 - 6.0) * a2 * alpha * ((pi2 - 6.0) * a2 + (6.0 + pi2) * b2);
    return num / den;
}

Bound1Result bound1(double a, double b, double alpha, double beta, int nx_max) {
    check_args(a, b, alpha);
    if (nx_max < 2) fail(ErrorCode::InvalidArgument, "nx_max must be at least 2");
    QuadratureOptions opt;
    opt.nx_max = nx_max;
    const auto ctx = OperatorContext::create(Domain::rectangle(a, b), BoundaryCondition::DD, DensitySpec::parabolic(alpha), opt);
    const Mode ground = product_mode(ctx->domain(), 1, 1);
    const auto& ss = ctx->sqrt_sigma();
    std::vector<double> xi0(ctx->size()), g(ctx->size());
    for (std::size_t i = 0; i < xi0.size(); ++i) {
        const Point p = ctx->points()[i];
        xi0[i] = (1.0 + beta * p.x) * ss[i] * ground(p);
        g[i] = ss[i] * xi0[i];
    }
    const GridFunction z(ctx, xi0);
    const auto rayleigh = [&](int modes) {
        auto u = ctx->apply_green(g, modes);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= ss[i];
        const GridFunction x1(ctx, std::move(u));
        return x1.dot(z) / x1.dot(x1);
    };
    const double full = rayleigh(nx_max);
    const double half = rayleigh(nx_max / 2);
    return {full, std::abs(full - half)};
}

VariationalBound variational_bound(double a, double b, double alpha, double beta, bool with_bound1, int nx_max) {
    VariationalBound v;
    v.a = a;
    v.b = b;
    v.alpha = alpha;
    v.beta = beta;
    v.bound0_value = bound0(a, b, alpha, beta);
    v.beta_star = beta_star(a, b, alpha);
    v.gamma_disc = gamma_disc(a, b, alpha);
    if (with_bound1) v.bound1_value = bound1(a, b, alpha, beta, nx_max).value;
    return v;
}

DrumReference drum_rr_reference(double a, double b, double alpha, int n, int n_check) {
    check_args(a, b, alpha);
    QuadratureOptions opt;
    opt.nx_max = 1;  // the matrix engine does not use the kernel grid
    const auto ctx = OperatorContext::create(Domain::rectangle(a, b), BoundaryCondition::DD, DensitySpec::parabolic(alpha), opt);
    const double e = rr_matrix_solve(*ctx, n, MatrixEngine::WInv, 1).front().eigenvalue;
    double delta = 0.0;
    if (n_check > 0) delta = std::abs(rr_matrix_solve(*ctx, n_check, MatrixEngine::WInv, 1).front().eigenvalue - e);
    return {e, delta};
}

}  // namespace helmspec
