#pragma once

#include <optional>

#include "helmspec/operators.hpp"

namespace helmspec {

// Rayleigh quotient of (1 + beta x) sqrt(Sigma) psi_1(x) phi_1(y) on the rectangle
// with Sigma = (1 + alpha x)^2, in closed form.
double bound0(double a, double b, double alpha, double beta);

// Discriminant under the square root of the beta* formula.
double gamma_disc(double a, double b, double alpha);

// Minimizer of bound0 over beta; 0 for alpha == 0 by convention.
double beta_star(double a, double b, double alpha);

struct Bound1Result {
    double value;
    double truncation_estimate;  // |R(nx_max) - R(nx_max/2)|
};

// Rayleigh quotient after one inverse application of the rectangle kernel.
Bound1Result bound1(double a, double b, double alpha, double beta, int nx_max = 80);

struct VariationalBound {
    double a = 1.0;
    double b = 0.5;
    double alpha = 0.0;
    double beta = 0.0;
    double bound0_value = 0.0;
    double beta_star = 0.0;
    double gamma_disc = 0.0;
    std::optional<double> bound1_value;
};

VariationalBound variational_bound(double a, double b, double alpha, double beta, bool with_bound1, int nx_max = 80);

struct DrumReference {
    double eigenvalue;
    double convergence_delta;  // |E(N) - E(N_check)|
};

// Rayleigh-Ritz ground eigenvalue on N product modes, checked against N_check.
DrumReference drum_rr_reference(double a, double b, double alpha, int n = 400, int n_check = 600);

}  // namespace helmspec
