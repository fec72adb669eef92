#include "helmspec/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helmspec/errors.hpp"

namespace helmspec {

using std::numbers::pi;

namespace {

// Highest angular wavenumber of the density along an axis (0 for smooth kinds).
double density_wavenumber(const DensitySpec& spec, bool y_axis) {
    if (const auto* osc = spec.as<DensitySpec::Oscillating>()) return y_axis ? 0.0 : 2.0 * pi / osc->epsilon;
    if (const auto* sep = spec.as<DensitySpec::Separable2D>())
        return y_axis ? density_wavenumber(*sep->y_factor, false) : density_wavenumber(*sep->x_factor, false);
    return 0.0;
}

int panels_for(double length, double wavenumber, double per_panel_phase, int min_panels) {
    const double need = std::ceil(length * wavenumber / per_panel_phase - 1e-9);
    return std::max(min_panels, static_cast<int>(need));
}

}  // namespace

double QuadratureRule::weight_sum() const {
    double sx = 0.0;
    for (double w : x.weights()) sx += w;
    if (!y) return sx;
    double sy = 0.0;
    for (double w : y->weights()) sy += w;
    return sx * sy;
}

OperatorContext::OperatorContext(const Domain& d, BoundaryCondition bc, const DensitySpec& s,
                                 const QuadratureOptions& o)
    : domain_(d), bc_(bc), density_(s), options_(o) {}

ContextPtr OperatorContext::create(const Domain& domain, BoundaryCondition bc, const DensitySpec& density,
                                   const QuadratureOptions& options) {
    if (options.nodes_per_panel < 2 || options.nodes_per_panel > 40)
        fail(ErrorCode::InvalidArgument, "nodes per panel must be in [2, 40]");
    if (options.min_panels < 1) fail(ErrorCode::InvalidArgument, "min_panels must be positive");
    if (domain.is_rectangle()) {
        if (bc != BoundaryCondition::DD) fail(ErrorCode::UnsupportedModel, "rectangles support dd only");
        if (options.nx_max < 1) fail(ErrorCode::InvalidArgument, "nx_max must be positive");
    }
    validate_density(density, domain);
    std::shared_ptr<OperatorContext> ctx(new OperatorContext(domain, bc, density, options));
    ctx->build();
    return ctx;
}

void OperatorContext::build() {
    const int npp = options_.nodes_per_panel;
    const double a = domain_.a();
    // Oscillating densities: panel width <= eps/4, i.e. a quarter period (phase pi/2).
    int px = panels_for(a, density_wavenumber(density_, false), 0.5 * pi, options_.min_panels);
    if (domain_.is_rectangle()) {
        const double kmax = options_.nx_max * pi / a;
        px = std::max(px, panels_for(a, kmax, 3.0, options_.min_panels));
        const double b = domain_.b();
        int py = panels_for(b, density_wavenumber(density_, true), 0.5 * pi, options_.min_panels);
        // y-kernels decay like exp(-k |y - y'|); keep k * width <= 1.5.
        py = std::max(py, panels_for(b, kmax, 1.5, options_.min_panels));
        rule_.x = PanelRule1D(-0.5 * a, 0.5 * a, px, npp);
        rule_.y = PanelRule1D(-0.5 * b, 0.5 * b, py, npp);
    } else {
        rule_.x = PanelRule1D(-0.5 * a, 0.5 * a, px, npp);
    }

    const auto& xs = rule_.x.nodes();
    const auto& wx = rule_.x.weights();
    if (rule_.y) {
        const auto& ys = rule_.y->nodes();
        const auto& wy = rule_.y->weights();
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < ys.size(); ++j) {
                points_.push_back({xs[i], ys[j]});
                weights_.push_back(wx[i] * wy[j]);
            }
    } else {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            points_.push_back({xs[i], 0.0});
            weights_.push_back(wx[i]);
        }
    }
    sigma_.reserve(points_.size());
    sqrt_sigma_.reserve(points_.size());
    for (const auto& p : points_) {
        sigma_.push_back(eval_density(density_, p));
        sqrt_sigma_.push_back(eval_sqrt_density(density_, p));
    }

    if (!rule_.y) {
        const auto kernel = green_kernel_1d(bc_, domain_);
        u_samples_.resize(static_cast<Eigen::Index>(kernel.terms.size()), static_cast<Eigen::Index>(xs.size()));
        v_samples_.resizeLike(u_samples_);
        for (std::size_t k = 0; k < kernel.terms.size(); ++k)
            for (std::size_t i = 0; i < xs.size(); ++i) {
                u_samples_(k, i) = kernel.terms[k].u(xs[i]);
                v_samples_(k, i) = kernel.terms[k].v(xs[i]);
            }
        return;
    }

    const int m = options_.nx_max;
    const auto& ys = rule_.y->nodes();
    x_modes_.resize(m, static_cast<Eigen::Index>(xs.size()));
    x_modes_weighted_.resizeLike(x_modes_);
    const Domain line = Domain::interval(a);
    for (int n = 1; n <= m; ++n) {
        const Mode psi = mode(BoundaryCondition::DD, line, n);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            x_modes_(n - 1, i) = psi(xs[i]);
            x_modes_weighted_(n - 1, i) = psi(xs[i]) * wx[i];
        }
        const auto g = rect_y_kernel(n * pi / a, domain_.b());
        Eigen::MatrixXd u(1, static_cast<Eigen::Index>(ys.size())), v(1, static_cast<Eigen::Index>(ys.size()));
        for (std::size_t j = 0; j < ys.size(); ++j) {
            u(0, j) = g.terms[0].u(ys[j]);
            v(0, j) = g.terms[0].v(ys[j]);
        }
        y_u_.push_back(std::move(u));
        y_v_.push_back(std::move(v));
    }
}

std::vector<double> OperatorContext::apply_green(const std::vector<double>& g, int modes_used) const {
    if (g.size() != size()) fail(ErrorCode::InvalidArgument, "grid size mismatch");
    if (!rule_.y) return apply_semi_separable(rule_.x, u_samples_, v_samples_, 0.0, g);

    const auto nx = static_cast<Eigen::Index>(rule_.x.size());
    const auto ny = static_cast<Eigen::Index>(rule_.y->size());
    const int m = modes_used > 0 ? std::min(modes_used, options_.nx_max) : options_.nx_max;
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> f(g.data(), nx, ny);
    RowMajor c = x_modes_weighted_.topRows(m) * f;
    RowMajor h(m, ny);
    for (int n = 0; n < m; ++n) {
        std::vector<double> row(c.row(n).data(), c.row(n).data() + ny);
        const auto out = apply_semi_separable(*rule_.y, y_u_[n], y_v_[n], (n + 1) * pi / domain_.a(), row);
        h.row(n) = Eigen::Map<const Eigen::RowVectorXd>(out.data(), ny);
    }
    std::vector<double> result(static_cast<std::size_t>(nx * ny));
    Eigen::Map<RowMajor> r(result.data(), nx, ny);
    r.noalias() = x_modes_.topRows(m).transpose() * h;
    return result;
}

GridFunction::GridFunction(ContextPtr ctx, std::vector<double> values) : ctx_(std::move(ctx)), values_(std::move(values)) {
    if (!ctx_) fail(ErrorCode::InvalidArgument, "grid function needs a context");
    if (values_.size() != ctx_->size()) fail(ErrorCode::InvalidArgument, "grid function length mismatch");
}

GridFunction GridFunction::zeros(ContextPtr ctx) {
    const auto n = ctx->size();
    return GridFunction(std::move(ctx), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::sample(ContextPtr ctx, const std::function<double(Point)>& f) {
    std::vector<double> v;
    v.reserve(ctx->size());
    for (const auto& p : ctx->points()) v.push_back(f(p));
    return GridFunction(std::move(ctx), std::move(v));
}

GridFunction GridFunction::sample(ContextPtr ctx, const std::function<double(double)>& f) {
    return sample(std::move(ctx), std::function<double(Point)>([&f](Point p) { return f(p.x); }));
}

void GridFunction::check_same(const GridFunction& o) const {
    if (o.ctx_ != ctx_) fail(ErrorCode::InvalidArgument, "grid functions live on different contexts");
}

double GridFunction::dot(const GridFunction& o) const {
    check_same(o);
    const auto& w = ctx_->weights();
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += w[i] * values_[i] * o.values_[i];
    return s;
}

double GridFunction::norm() const { return std::sqrt(dot(*this)); }

double GridFunction::integral() const {
    const auto& w = ctx_->weights();
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += w[i] * values_[i];
    return s;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

GridFunction GridFunction::times(const std::vector<double>& w) const {
    GridFunction out = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] *= w[i];
    return out;
}

GridFunction GridFunction::divided_by(const std::vector<double>& w) const {
    GridFunction out = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] /= w[i];
    return out;
}

GridFunction operator+(GridFunction l, const GridFunction& r) { return l += r; }
GridFunction operator-(GridFunction l, const GridFunction& r) { return l -= r; }
GridFunction operator*(double s, GridFunction f) { return f *= s; }
GridFunction operator*(GridFunction f, double s) { return f *= s; }

namespace {

GridFunction sandwich(const GridFunction& f) {
    const auto& ctx = *f.context();
    const auto& ss = ctx.sqrt_sigma();
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = ss[i] * f[i];
    auto u = ctx.apply_green(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= ss[i];
    return GridFunction(f.context(), std::move(u));
}

void require_zero_mode(const OperatorContext& ctx, const char* what) {
    if (!has_zero_mode(ctx.bc())) fail(ErrorCode::InvalidArgument, std::string(what) + " needs nn or pp");
}

}  // namespace

GridFunction apply_inverse(const GridFunction& f) {
    const auto& ctx = *f.context();
    if (has_zero_mode(ctx.bc())) {
        const GridFunction root(f.context(), ctx.sqrt_sigma());
        const double overlap = root.dot(f);
        if (std::abs(overlap) > 1e-10 * root.norm() * f.norm())
            fail(ErrorCode::ZeroModePresent, "input has a zero-mode component; project it or use apply_inverse_regularized");
        return apply_inverse_regularized(f);
    }
    return sandwich(f);
}

GridFunction apply_inverse_regularized(const GridFunction& f) {
    require_zero_mode(*f.context(), "apply_inverse_regularized");
    return project_out_zero_mode(sandwich(project_out_zero_mode(f)));
}

GridFunction apply_regularized_kernel(const GridFunction& f) {
    require_zero_mode(*f.context(), "apply_regularized_kernel");
    return sandwich(f);
}

GridFunction project_out_zero_mode(const GridFunction& f) {
    const auto& ctx = *f.context();
    require_zero_mode(ctx, "project_out_zero_mode");
    const GridFunction root(f.context(), ctx.sqrt_sigma());
    const double c = root.dot(f) / root.dot(root);
    GridFunction out = f;
    auto& v = out.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * ctx.sqrt_sigma()[i];
    return out;
}

GridFunction apply_forward_spectral(const GridFunction& g, int n_modes) {
    const auto& ctx = *g.context();
    if (ctx.is_2d()) fail(ErrorCode::InvalidArgument, "spectral forward operator is provided for intervals");
    if (n_modes < 1) fail(ErrorCode::InvalidArgument, "need at least one mode");
    const auto modes = lowest_modes(ctx.bc(), ctx.domain(), n_modes);
    const double kmax = std::sqrt(modes.back().eigenvalue());
    if (kmax * ctx.quadrature().x.panel_width() > 4.0)
        fail(ErrorCode::ResolutionTooLow, "quadrature panels too wide for the requested modes");
    const auto& x = ctx.quadrature().x.nodes();
    const auto& w = ctx.weights();
    const auto& ss = ctx.sqrt_sigma();
    std::vector<double> out(g.size(), 0.0);
    for (const auto& m : modes) {
        double c = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) c += w[i] * m(x[i]) * g[i] / ss[i];
        c *= m.eigenvalue();
        for (std::size_t i = 0; i < x.size(); ++i) out[i] += c * m(x[i]);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= ss[i];
    return GridFunction(g.context(), std::move(out));
}

namespace {

double axis_weight(const DensitySpec& spec, double t, OverlapWeight w) {
    return w == OverlapWeight::Sigma ? eval_density(spec, t) : eval_sqrt_density(spec, t);
}

// Gram matrix of 1D modes with weight from a 1D density.
Eigen::MatrixXd gram_1d(const Domain& line, const DensitySpec& spec, const std::vector<Mode>& rows,
                        const std::vector<Mode>& cols, OverlapWeight weight, int npp) {
    double k = 0.0;
    for (const auto& m : rows) k = std::max(k, std::sqrt(m.eigenvalue()));
    double kc = 0.0;
    for (const auto& m : cols) kc = std::max(kc, std::sqrt(m.eigenvalue()));
    k += kc + density_wavenumber(spec, false);
    // sqrt of an oscillating density carries harmonics beyond the base frequency
    if (weight == OverlapWeight::SqrtSigma) k += 2.0 * density_wavenumber(spec, false);
    const int panels = panels_for(line.a(), k, 3.0, 16);
    const PanelRule1D rule(-0.5 * line.a(), 0.5 * line.a(), panels, npp);
    const auto& x = rule.nodes();
    const auto& w = rule.weights();
    const auto nq = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd br(nq, static_cast<Eigen::Index>(rows.size()));
    Eigen::MatrixXd bc(nq, static_cast<Eigen::Index>(cols.size()));
    Eigen::VectorXd wt(nq);
    for (Eigen::Index i = 0; i < nq; ++i) {
        wt(i) = w[i] * axis_weight(spec, x[i], weight);
        for (std::size_t r = 0; r < rows.size(); ++r) br(i, r) = rows[r](x[i]);
        for (std::size_t c = 0; c < cols.size(); ++c) bc(i, c) = cols[c](x[i]);
    }
    return br.transpose() * wt.asDiagonal() * bc;
}

std::vector<Mode> dirichlet_line_modes(double length, int count) {
    std::vector<Mode> out;
    const Domain line = Domain::interval(length);
    for (int n = 1; n <= count; ++n) out.push_back(mode(BoundaryCondition::DD, line, n));
    return out;
}

}  // namespace

Eigen::MatrixXd weighted_gram(const Domain& domain, const DensitySpec& density, const std::vector<Mode>& rows,
                              const std::vector<Mode>& cols, OverlapWeight weight, int npp) {
    if (domain.is_interval()) return gram_1d(domain, density, rows, cols, weight, npp);

    const double a = domain.a();
    const double b = domain.b();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    if (density.is_separable()) {
        const auto* sep = density.as<DensitySpec::Separable2D>();
        const DensitySpec fx = sep ? *sep->x_factor : density;
        const DensitySpec fy = sep ? *sep->y_factor : DensitySpec::constant(1.0);
        int mx = 0, my = 0;
        for (const auto* set : {&rows, &cols})
            for (const auto& m : *set) {
                mx = std::max(mx, m.n());
                my = std::max(my, m.ny());
            }
        const auto lx = dirichlet_line_modes(a, mx);
        const auto ly = dirichlet_line_modes(b, my);
        const Eigen::MatrixXd gx = gram_1d(Domain::interval(a), fx, lx, lx, weight, npp);
        Eigen::MatrixXd gy;
        if (const auto* c = fy.as<DensitySpec::Constant>())
            gy = Eigen::MatrixXd::Identity(my, my) * (weight == OverlapWeight::Sigma ? c->c : std::sqrt(c->c));
        else
            gy = gram_1d(Domain::interval(b), fy, ly, ly, weight, npp);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                out(r, c) = gx(rows[r].n() - 1, cols[c].n() - 1) * gy(rows[r].ny() - 1, cols[c].ny() - 1);
        return out;
    }

    // Non-separable: tensor rule resolving the highest mode on each axis.
    int mx = 0, my = 0;
    for (const auto* set : {&rows, &cols})
        for (const auto& m : *set) {
            mx = std::max(mx, m.n());
            my = std::max(my, m.ny());
        }
    const PanelRule1D rx(-0.5 * a, 0.5 * a, panels_for(a, 2.0 * mx * pi / a, 3.0, 16), npp);
    const PanelRule1D ry(-0.5 * b, 0.5 * b, panels_for(b, 2.0 * my * pi / b, 3.0, 16), npp);
    const auto nq = static_cast<Eigen::Index>(rx.size() * ry.size());
    Eigen::MatrixXd br(nq, static_cast<Eigen::Index>(rows.size()));
    Eigen::MatrixXd bc(nq, static_cast<Eigen::Index>(cols.size()));
    Eigen::VectorXd wt(nq);
    Eigen::Index q = 0;
    for (std::size_t i = 0; i < rx.size(); ++i)
        for (std::size_t j = 0; j < ry.size(); ++j, ++q) {
            const Point p{rx.nodes()[i], ry.nodes()[j]};
            wt(q) = rx.weights()[i] * ry.weights()[j] *
                    (weight == OverlapWeight::Sigma ? eval_density(density, p) : eval_sqrt_density(density, p));
            for (std::size_t r = 0; r < rows.size(); ++r) br(q, r) = rows[r](p);
            for (std::size_t c = 0; c < cols.size(); ++c) bc(q, c) = cols[c](p);
        }
    return br.transpose() * wt.asDiagonal() * bc;
}

double density_overlap(const OperatorContext& ctx, const Mode& m, const Mode& n) {
    const Eigen::MatrixXd g = weighted_gram(ctx.domain(), ctx.density(), {m}, {n}, OverlapWeight::Sigma,
                                            ctx.options().nodes_per_panel);
    return g(0, 0);
}

namespace {

std::vector<Mode> basis_for(const OperatorContext& ctx, int count) {
    if (ctx.is_2d()) return lowest_product_modes(ctx.domain(), count);
    return lowest_modes(ctx.bc(), ctx.domain(), count);
}

Eigen::MatrixXd oinv_entries(const OperatorContext& ctx, const std::vector<Mode>& basis, int r) {
    const auto inner = basis_for(ctx, r);
    const Eigen::MatrixXd t = weighted_gram(ctx.domain(), ctx.density(), basis, inner, OverlapWeight::SqrtSigma,
                                            ctx.options().nodes_per_panel);
    Eigen::VectorXd inv_eps(r);
    for (int k = 0; k < r; ++k) inv_eps(k) = 1.0 / inner[k].eigenvalue();
    return t * inv_eps.asDiagonal() * t.transpose();
}

}  // namespace

SpectralMatrix build_spectral_matrix(const OperatorContext& ctx, int n, MatrixEngine engine, int r) {
    if (n < 2) fail(ErrorCode::InvalidArgument, "spectral matrix needs N >= 2");
    const bool zero = !ctx.is_2d() && has_zero_mode(ctx.bc());
    SpectralMatrix out;
    out.engine = engine;
    const int npp = ctx.options().nodes_per_panel;

    if (engine == MatrixEngine::WInvDeflated) {
        if (!zero) fail(ErrorCode::InvalidArgument, "deflated engine is for nn|pp");
        out.size = n - 1;
        out.basis = lowest_modes(ctx.bc(), ctx.domain(), n - 1);
        std::vector<Mode> with_zero{mode(ctx.bc(), ctx.domain(), 0, 1)};
        with_zero.insert(with_zero.end(), out.basis.begin(), out.basis.end());
        const Eigen::MatrixXd s = weighted_gram(ctx.domain(), ctx.density(), with_zero, with_zero, OverlapWeight::Sigma, npp);
        const Eigen::VectorXd s0 = s.col(0).tail(n - 1);
        out.density_overlaps = s.bottomRightCorner(n - 1, n - 1);
        const Eigen::MatrixXd d = out.density_overlaps - s0 * s0.transpose() / s(0, 0);
        Eigen::VectorXd scale(n - 1);
        for (int k = 0; k < n - 1; ++k) scale(k) = 1.0 / std::sqrt(out.basis[k].eigenvalue());
        out.entries = scale.asDiagonal() * d * scale.asDiagonal();
        out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
        return out;
    }

    if (zero) fail(ErrorCode::ZeroModePresent, "use the deflated engine for nn|pp");
    out.size = n;
    out.basis = basis_for(ctx, n);
    out.density_overlaps = weighted_gram(ctx.domain(), ctx.density(), out.basis, out.basis, OverlapWeight::Sigma, npp);
    if (engine == MatrixEngine::WInv) {
        Eigen::VectorXd scale(n);
        for (int k = 0; k < n; ++k) scale(k) = 1.0 / std::sqrt(out.basis[k].eigenvalue());
        out.entries = scale.asDiagonal() * out.density_overlaps * scale.asDiagonal();
    } else {
        if (r == 0) r = 2 * n;
        if (r < n) fail(ErrorCode::InsufficientTruncation, "OInv needs R >= N");
        out.internal_truncation = r;
        out.entries = oinv_entries(ctx, out.basis, r);
        out.truncation_change = (oinv_entries(ctx, out.basis, 2 * r) - out.entries).cwiseAbs().maxCoeff();
    }
    out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
    return out;
}

}  // namespace helmspec
