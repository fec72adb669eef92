#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "helmspec/errors.hpp"
#include "helmspec/operators.hpp"

namespace helmspec {

struct IterationOptions {
    int p_max = 64;
    double tol = 1e-12;
    bool fixed_count = false;  // run exactly p_max iterations
};

// Overlap data of one inverse-power step, Xi_p = O^{-1} Xi_{p-1}.
struct IterateState {
    int p = 0;
    double norm_sq = 0.0;       // <Xi_p, Xi_p>
    double overlap_prev = 0.0;  // <Xi_p, Xi_{p-1}>
    double prev_norm_sq = 0.0;  // <Xi_{p-1}, Xi_{p-1}>
    double rayleigh = 0.0;      // <O>_p
    double msd = 0.0;           // Delta^(p)
};

struct LanczosState {
    int p = 0;
    double eta = 0.0;
    double upsilon = 0.0;
    double epsilon_q = 0.0;
    double delta = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double residual = 0.0;  // || O^{-1} V2 - e2 V2 ||
};

struct SolveReport {
    std::string engine;
    std::vector<double> eigenvalues;  // estimate after each iteration
    std::vector<double> msd;          // spread estimate after each iteration
    std::vector<IterateState> iterates;   // power and block paths
    std::vector<LanczosState> lanczos;    // Lanczos path
    bool converged = false;
    std::string status = "ok";
    std::optional<GridFunction> eigenfunction;  // Psi = Xi / sqrt(Sigma), integral Sigma Psi^2 = 1
    double wall_seconds = 0.0;

    double eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
};

// Inverse-power iteration. NN/PP follow the zero-mode path: each step applies the
// regularized kernel and projects; the first Rayleigh quotient accounts for the
// zero-mode content of a raw ansatz.
SolveReport power_iterate(const GridFunction& ansatz, const IterationOptions& opt = {});

// Two-dimensional Krylov update of the inverse operator (DD/ND/DN).
SolveReport lanczos_iterate(const GridFunction& ansatz, const IterationOptions& opt = {});

// Block iteration with modified Gram-Schmidt, members sorted by <O>_1.
std::vector<SolveReport> block_iterate(const std::vector<GridFunction>& ansatzes, const IterationOptions& opt = {});

// Raised by block_iterate; carries the reports accumulated so far.
class BlockFailure : public Error {
public:
    BlockFailure(ErrorCode code, const std::string& what, std::vector<SolveReport> partial)
        : Error(code, what), partial_(std::move(partial)) {}
    const std::vector<SolveReport>& partial() const { return partial_; }

private:
    std::vector<SolveReport> partial_;
};

struct RitzPair {
    double eigenvalue;  // Helmholtz E = 1 / lambda
    Eigen::VectorXd coefficients;
};

// k lowest Helmholtz eigenvalues from the dense spectral matrix, ascending.
std::vector<RitzPair> rr_matrix_solve(const OperatorContext& ctx, int n, MatrixEngine engine, int k);
std::vector<RitzPair> rr_matrix_solve(const SpectralMatrix& m, int k);

struct MatrixEigenpair {
    double eigenvalue;  // of the inverse-operator matrix
    Eigen::VectorXd vector;
    int iterations;
};

MatrixEigenpair matrix_power_method(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& trial,
                                    std::span<const Eigen::VectorXd> deflate_against = {}, int p_max = 5000,
                                    double tol = 1e-14);
MatrixEigenpair matrix_power_method(const SpectralMatrix& matrix, const Eigen::VectorXd& trial,
                                    std::span<const Eigen::VectorXd> deflate_against = {}, int p_max = 5000,
                                    double tol = 1e-14);

}  // namespace helmspec
