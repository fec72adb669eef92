#pragma once

#include <string_view>
#include <vector>

#include "helmspec/domain.hpp"
#include "helmspec/quadrature.hpp"

namespace helmspec {

enum class BoundaryCondition { DD, ND, DN, NN, PP };

bool has_zero_mode(BoundaryCondition bc);
std::string_view to_string(BoundaryCondition bc);
BoundaryCondition parse_bc(std::string_view text);

// Normalized eigenfunction of -d^2/dx^2 on an interval, or a product
// psi_nx(x) phi_ny(y) of Dirichlet modes on a rectangle.
class Mode {
public:
    BoundaryCondition bc() const { return bc_; }
    int n() const { return n_; }
    int u() const { return u_; }
    int ny() const { return ny_; }
    double eigenvalue() const { return eigenvalue_; }
    bool is_zero_mode() const { return eigenvalue_ == 0.0; }
    bool is_product() const { return ny_ > 0; }

    double operator()(double x) const;
    double operator()(Point p) const;

private:
    friend Mode mode(BoundaryCondition, const Domain&, int, int);
    friend Mode product_mode(const Domain&, int, int);
    BoundaryCondition bc_ = BoundaryCondition::DD;
    int n_ = 1;
    int u_ = 1;
    int ny_ = 0;
    double a_ = 1.0;
    double b_ = 0.0;
    double eigenvalue_ = 0.0;
};

// DD/ND/DN: n >= 1, u = 1. NN: (0,1) is the zero mode, u=1 cosines, u=2 odd sines.
// PP: (0,1) zero mode, u=1 cos(2n pi x/a), u=2 sin(2n pi x/a).
Mode mode(BoundaryCondition bc, const Domain& domain, int n, int u = 1);

// Dirichlet product mode on a rectangle.
Mode product_mode(const Domain& rectangle, int nx, int ny);

// The `count` lowest nonzero modes sorted by eigenvalue, ties by (n, u).
std::vector<Mode> lowest_modes(BoundaryCondition bc, const Domain& interval, int count);

// The `count` lowest Dirichlet product modes, ties by (nx, ny).
std::vector<Mode> lowest_product_modes(const Domain& rectangle, int count);

// Closed-form Green kernel for DD/ND/DN.
double green_closed_1d(BoundaryCondition bc, const Domain& domain, double x, double y);

// Regularized kernel G0 = sum over nonzero modes of phi_n(x) phi_n(y) / eps_n, NN/PP.
double green_regularized_1d(BoundaryCondition bc, const Domain& domain, double x, double y);

// Resolvent of (-d^2/dx^2 + gamma) with Neumann ends; ~ 1/(a gamma) + G0_NN + O(gamma).
double green_gamma_nn_1d(const Domain& domain, double gamma, double x, double y);

// Resolvent with Dirichlet ends, sinh(k s<) sinh(k (a - s>)) / (k sinh(k a)); tends to G_DD.
double green_gamma_dd_1d(const Domain& domain, double gamma, double x, double y);

struct TruncatedValue {
    double value;
    double first_omitted;  // magnitude of the first dropped term
};

// Partial sum over nx <= nx_max of g_nx(y, y') psi_nx(x) psi_nx(x'), Dirichlet rectangle.
TruncatedValue green_rect_2d(const Domain& rectangle, double x, double y, double xp, double yp, int nx_max);

// Semi-separable representation of the 1D kernel (closed form or regularized).
SemiSeparableKernel green_kernel_1d(BoundaryCondition bc, const Domain& domain);

// The y-kernel g_n of the rectangle, for wavenumber k = n pi / a, in scaled form.
SemiSeparableKernel rect_y_kernel(double k, double b);

}  // namespace helmspec

namespace helmspec {

// A kernel choice bound to a domain, evaluable at pairs of points.
struct GreenKernel {
    enum class Form { ClosedForm1D, Regularized1D, GammaShifted1D, RectPartialSum };

    BoundaryCondition bc;
    Domain domain;
    Form form;
    double gamma = 0.0;
    int nx_max = 80;

    double operator()(Point p, Point q) const;
};

}  // namespace helmspec
