#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helmspec/drum2d.hpp"
#include "oracles.hpp"

using namespace helmspec;
using std::numbers::pi;

namespace {

// <Xi|O|Xi>/<Xi|Xi> for Xi = (1 + beta x) sqrt(Sigma) psi_1(x) phi_1(y): the numerator is the
// Dirichlet energy of (1 + beta x) psi_1 phi_1, the denominator its Sigma-weighted norm.
double bound0_quadrature(double a, double b, double alpha, double beta) {
    const auto psi = [&](double x) { return std::sqrt(2.0 / a) * std::cos(pi * x / a); };
    const auto dpsi = [&](double x) { return -std::sqrt(2.0 / a) * (pi / a) * std::sin(pi * x / a); };
    const double ky2 = pi * pi / (b * b);
    const double num = oracle::simpson(
        [&](double x) {
            const double f = (1.0 + beta * x) * psi(x);
            const double df = beta * psi(x) + (1.0 + beta * x) * dpsi(x);
            return df * df + ky2 * f * f;
        },
        -a / 2, a / 2, 20000);
    const double den = oracle::simpson(
        [&](double x) {
            const double f = (1.0 + beta * x) * psi(x);
            return (1.0 + alpha * x) * (1.0 + alpha * x) * f * f;
        },
        -a / 2, a / 2, 20000);
    return num / den;
}

}  // namespace

TEST_CASE("closed-form bound examples") {
    CHECK(bound0(1.0, 0.5, 0.0, 0.0) == doctest::Approx(5.0 * pi * pi).epsilon(1e-14));
    for (double alpha : {-2.0, -0.7, 0.5, 1.3, 2.0})
        for (double beta : {-1.5, 0.0, 0.8, 2.5})
            CHECK(bound0(1.0, 0.5, alpha, beta) == doctest::Approx(bound0_quadrature(1.0, 0.5, alpha, beta)).epsilon(1e-11));
    CHECK(bound0(2.0, 0.7, 0.6, 0.4) == doctest::Approx(bound0_quadrature(2.0, 0.7, 0.6, 0.4)).epsilon(1e-11));
    const double bs = beta_star(1.0, 0.5, 2.0);
    CHECK(bound0(1.0, 0.5, 2.0, bs) < bound0(1.0, 0.5, 2.0, 0.0));
}

TEST_CASE("beta star is a stationary minimum") {
    for (double alpha : {0.3, 1.0, 2.0, -1.4}) {
        const double bs = beta_star(1.0, 0.5, alpha);
        const double h = 1e-4;
        const double e0 = bound0(1.0, 0.5, alpha, bs);
        const double d = (bound0(1.0, 0.5, alpha, bs + h) - bound0(1.0, 0.5, alpha, bs - h)) / (2 * h);
        CHECK(std::abs(d) < 1e-6 * std::abs(e0));
        for (double db : {-1.0, -0.1, 0.1, 1.0}) CHECK(e0 <= bound0(1.0, 0.5, alpha, bs + db));
    }
    CHECK(beta_star(1.0, 0.5, 0.0) == 0.0);
    CHECK(bound0(1.0, 0.5, 1e-4, beta_star(1.0, 0.5, 1e-4)) == doctest::Approx(5.0 * pi * pi).epsilon(1e-6));
    CHECK(gamma_disc(1.0, 0.5, 2.0) > 0.0);
}

TEST_CASE("property: reflection symmetry") {
    oracle::Sampler rng(61);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.2, 1.5);
        const double alpha = rng.uniform(-2.0 / a, 2.0 / a), beta = rng.uniform(-3.0, 3.0);
        const double l = bound0(a, b, alpha, beta), r = bound0(a, b, -alpha, -beta);
        CHECK(std::abs(l - r) <= 1e-12 * std::abs(l));
    }
}

TEST_CASE("one inverse iteration tightens the bound") {
    const auto flat = bound1(1.0, 0.5, 0.0, 0.0);
    CHECK(flat.value == doctest::Approx(5.0 * pi * pi).epsilon(1e-8));
    const double bs = beta_star(1.0, 0.5, 2.0);
    const auto b0 = bound1(1.0, 0.5, 2.0, 0.0);
    const auto bstar = bound1(1.0, 0.5, 2.0, bs);
    CHECK(b0.value <= bound0(1.0, 0.5, 2.0, 0.0));
    CHECK(bstar.value <= b0.value);
    CHECK(b0.truncation_estimate < 1e-6);
}

TEST_CASE("chain of bounds against the Rayleigh-Ritz reference") {
    for (double alpha : {1.0, 2.0}) {
        const double rr = drum_rr_reference(1.0, 0.5, alpha, 400, 0).eigenvalue;
        for (double beta : {0.0, beta_star(1.0, 0.5, alpha), -0.5}) {
            const double e1 = bound1(1.0, 0.5, alpha, beta).value;
            const double e0 = bound0(1.0, 0.5, alpha, beta);
            CHECK(rr <= e1 + 1e-9);
            CHECK(e1 <= e0 + 1e-9);
        }
    }
}

TEST_CASE("variational bound record") {
    const auto v = variational_bound(1.0, 0.5, 2.0, 0.0, true);
    CHECK(v.bound0_value == bound0(1.0, 0.5, 2.0, 0.0));
    CHECK(v.beta_star == beta_star(1.0, 0.5, 2.0));
    REQUIRE(v.bound1_value);
    CHECK(*v.bound1_value <= v.bound0_value);
    CHECK_FALSE(variational_bound(1.0, 0.5, 2.0, 0.0, false).bound1_value);
}
