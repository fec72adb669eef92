#pragma once

#include <vector>

#include "helmspec/accel.hpp"
#include "helmspec/operators.hpp"
#include "helmspec/solvers.hpp"

namespace helmspec {

// Parabolic string ansatz N sqrt(Sigma) psi_1^DD with N = 2 sqrt(3) / sqrt((1 - 6/pi^2) alpha^2 + 12).
GridFunction ansatz_parabolic_dd(const ContextPtr& ctx, double alpha);

// (sqrt(105)/8)(2x + 1)(1 - 4x^2); equals sqrt(Sigma) times a Dirichlet polynomial when alpha = 2.
GridFunction ansatz_parabolic_dd2(const ContextPtr& ctx);

// 2x + 1, used for the Neumann and periodic strings.
GridFunction ansatz_parabolic_nn(const ContextPtr& ctx);

// sqrt(Sigma) phi for an arbitrary mode.
GridFunction ansatz_mode(const ContextPtr& ctx, const Mode& m);

struct Table1Column {
    double alpha;
    std::vector<double> rayleigh;  // <O>_1 .. <O>_p
    std::vector<double> msd;
    ShanksTable shanks;
};

// Power iteration on the parabolic Dirichlet string of unit length, fixed p iterations.
Table1Column table1_column(double alpha, int iterations = 10, int shanks_levels = 3, int nodes_per_panel = 12);

}  // namespace helmspec
