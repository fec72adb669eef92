#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace helmspec {

// Gauss-Legendre rule on [-1, 1] plus the indefinite-integration matrix
// left(i, j) = integral from -1 to t_i of the j-th Lagrange basis polynomial.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    Eigen::MatrixXd left;
    Eigen::MatrixXd right;  // integral from t_i to 1
};

const GaussLegendre& gauss_legendre(int n);

// Composite rule on [lo, hi] with uniform panels.
class PanelRule1D {
public:
    PanelRule1D() = default;
    PanelRule1D(double lo, double hi, int panels, int nodes_per_panel);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int panels() const { return panels_; }
    int nodes_per_panel() const { return npp_; }
    std::size_t size() const { return x_.size(); }
    double panel_width() const { return (hi_ - lo_) / panels_; }
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& weights() const { return w_; }
    const GaussLegendre& reference() const { return gauss_legendre(npp_); }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
    int panels_ = 0;
    int npp_ = 0;
    std::vector<double> x_;
    std::vector<double> w_;
};

// Kernel K(x, y) = exp(-decay |x - y|) * sum_k U_k(max(x,y)) V_k(min(x,y)).
// Every 1D Green kernel used here has this form, with the kink on x = y.
struct SemiSeparableKernel {
    struct Term {
        std::function<double(double)> u;
        std::function<double(double)> v;
    };
    std::vector<Term> terms;
    double decay = 0.0;

    double operator()(double x, double y) const;
};

// u(x_i) = integral over [lo, hi] of K(x_i, y) g(y) dy at every node. The integral
// is split at y = x_i: left and right pieces are cumulative panel integrals of the
// nodal interpolant, accumulated from their own end so that no subtraction occurs.
std::vector<double> apply_semi_separable(const PanelRule1D& rule, const SemiSeparableKernel& kernel,
                                         std::span<const double> g);

// Same with precomputed U/V samples (rows: terms, columns: nodes).
std::vector<double> apply_semi_separable(const PanelRule1D& rule, const Eigen::MatrixXd& u_samples,
                                         const Eigen::MatrixXd& v_samples, double decay,
                                         std::span<const double> g);

}  // namespace helmspec
