#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "helmspec/density.hpp"
#include "helmspec/domain.hpp"
#include "helmspec/quadrature.hpp"
#include "helmspec/spectral_basis.hpp"

namespace helmspec {

struct QuadratureOptions {
    int nodes_per_panel = 12;
    int min_panels = 16;  // per axis
    int nx_max = 80;      // rectangle kernel truncation
};

// Tensor (or single-axis) composite Gauss-Legendre rule. Flattened index i * ny + j.
struct QuadratureRule {
    PanelRule1D x;
    std::optional<PanelRule1D> y;

    std::size_t size() const { return x.size() * (y ? y->size() : 1); }
    double weight_sum() const;
};

class OperatorContext;
using ContextPtr = std::shared_ptr<const OperatorContext>;

class OperatorContext {
public:
    static ContextPtr create(const Domain& domain, BoundaryCondition bc, const DensitySpec& density,
                             const QuadratureOptions& options = {});

    const Domain& domain() const { return domain_; }
    BoundaryCondition bc() const { return bc_; }
    const DensitySpec& density() const { return density_; }
    const QuadratureRule& quadrature() const { return rule_; }
    const QuadratureOptions& options() const { return options_; }
    bool is_2d() const { return domain_.is_rectangle(); }
    std::size_t size() const { return points_.size(); }

    const std::vector<Point>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& sigma() const { return sigma_; }
    const std::vector<double>& sqrt_sigma() const { return sqrt_sigma_; }

    // u(x) = integral of G(x, y) g(y) dy at every node; G is the closed-form kernel,
    // the regularized kernel for NN/PP, or the truncated rectangle kernel.
    std::vector<double> apply_green(const std::vector<double>& g, int modes_used = 0) const;

private:
    OperatorContext(const Domain& d, BoundaryCondition bc, const DensitySpec& s, const QuadratureOptions& o);
    void build();

    Domain domain_;
    BoundaryCondition bc_;
    DensitySpec density_;
    QuadratureOptions options_;
    QuadratureRule rule_;
    std::vector<Point> points_;
    std::vector<double> weights_;
    std::vector<double> sigma_;
    std::vector<double> sqrt_sigma_;

    // 1D kernel samples
    Eigen::MatrixXd u_samples_;
    Eigen::MatrixXd v_samples_;
    // rectangle: x-mode projection and per-mode y-kernel samples
    Eigen::MatrixXd x_modes_;           // nx_max x Nx, psi_n(x_i)
    Eigen::MatrixXd x_modes_weighted_;  // psi_n(x_i) w_i
    std::vector<Eigen::MatrixXd> y_u_;
    std::vector<Eigen::MatrixXd> y_v_;
};

class GridFunction {
public:
    GridFunction(ContextPtr ctx, std::vector<double> values);

    static GridFunction zeros(ContextPtr ctx);
    static GridFunction sample(ContextPtr ctx, const std::function<double(Point)>& f);
    static GridFunction sample(ContextPtr ctx, const std::function<double(double)>& f);

    const ContextPtr& context() const { return ctx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    // Quadrature inner product and norm on the context grid.
    double dot(const GridFunction& other) const;
    double norm() const;
    double integral() const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double s);
    // pointwise product
    GridFunction times(const std::vector<double>& w) const;
    GridFunction divided_by(const std::vector<double>& w) const;

private:
    void check_same(const GridFunction& o) const;
    ContextPtr ctx_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction l, const GridFunction& r);
GridFunction operator-(GridFunction l, const GridFunction& r);
GridFunction operator*(double s, GridFunction f);
GridFunction operator*(GridFunction f, double s);

// sqrt(Sigma) * G(sqrt(Sigma) f). For NN/PP, f must already be orthogonal to sqrt(Sigma),
// and the result is the projected regularized application.
GridFunction apply_inverse(const GridFunction& f);

// P sqrt(Sigma) G0 sqrt(Sigma) P f, the inverse restricted to the complement of the
// zero mode. NN/PP only.
GridFunction apply_inverse_regularized(const GridFunction& f);

// sqrt(Sigma) G0 (sqrt(Sigma) f) without any projection. NN/PP only.
GridFunction apply_regularized_kernel(const GridFunction& f);

// f - sqrt(Sigma) (integral sqrt(Sigma) f) / (integral Sigma), NN/PP only.
GridFunction project_out_zero_mode(const GridFunction& f);

// Sigma^{-1/2} sum_n eps_n <phi_n | Sigma^{-1/2} g> phi_n over the n_modes lowest
// nonzero modes: the forward operator restricted to a finite basis (1D contexts).
GridFunction apply_forward_spectral(const GridFunction& g, int n_modes);

// integral of phi_m Sigma phi_n, with a rule refined to resolve both modes.
double density_overlap(const OperatorContext& ctx, const Mode& m, const Mode& n);

enum class MatrixEngine { OInv, WInv, WInvDeflated };

struct SpectralMatrix {
    int size = 0;
    MatrixEngine engine = MatrixEngine::WInv;
    int internal_truncation = 0;  // R for OInv
    double truncation_change = 0.0;  // OInv: max entry change from R to 2R
    std::vector<Mode> basis;
    Eigen::MatrixXd entries;
    Eigen::MatrixXd density_overlaps;  // <n|Sigma|m> over `basis`
};

// WInv/OInv on DD/ND/DN or rectangles: N lowest nonzero modes.
// WInvDeflated on NN/PP: N states counting the zero mode, matrix dimension N - 1.
SpectralMatrix build_spectral_matrix(const OperatorContext& ctx, int n, MatrixEngine engine, int r = 0);

// Gram matrix integral of phi_row * weight * phi_col, weight = Sigma or sqrt(Sigma).
enum class OverlapWeight { Sigma, SqrtSigma };
Eigen::MatrixXd weighted_gram(const Domain& domain, const DensitySpec& density, const std::vector<Mode>& rows,
                              const std::vector<Mode>& cols, OverlapWeight weight, int nodes_per_panel = 12);

}  // namespace helmspec
