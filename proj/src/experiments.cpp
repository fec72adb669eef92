#include "helmspec/experiments.hpp"

#include <cmath>
#include <numbers>

namespace helmspec {

using std::numbers::pi;

GridFunction ansatz_parabolic_dd(const ContextPtr& ctx, double alpha) {
    const double norm = 2.0 * std::sqrt(3.0) / std::sqrt((1.0 - 6.0 / (pi * pi)) * alpha * alpha + 12.0);
    const Mode psi = mode(BoundaryCondition::DD, ctx->domain(), 1);
    return GridFunction::sample(ctx, [&](Point p) { return norm * (1.0 + alpha * p.x) * psi(p.x); });
}

GridFunction ansatz_parabolic_dd2(const ContextPtr& ctx) {
    const double c = std::sqrt(105.0) / 8.0;
    return GridFunction::sample(ctx, [c](Point p) { return c * (2.0 * p.x + 1.0) * (1.0 - 4.0 * p.x * p.x); });
}

GridFunction ansatz_parabolic_nn(const ContextPtr& ctx) {
    return GridFunction::sample(ctx, [](Point p) { return 2.0 * p.x + 1.0; });
}

GridFunction ansatz_mode(const ContextPtr& ctx, const Mode& m) {
    std::vector<double> v(ctx->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ctx->sqrt_sigma()[i] * m(ctx->points()[i]);
    return GridFunction(ctx, std::move(v));
}

Table1Column table1_column(double alpha, int iterations, int shanks_levels, int nodes_per_panel) {
    QuadratureOptions opt;
    opt.nodes_per_panel = nodes_per_panel;
    const auto ctx = OperatorContext::create(Domain::interval(1.0), BoundaryCondition::DD, DensitySpec::parabolic(alpha), opt);
    IterationOptions it;
    it.p_max = iterations;
    it.fixed_count = true;
    const auto rep = power_iterate(ansatz_parabolic_dd(ctx, alpha), it);
    Table1Column col;
    col.alpha = alpha;
    col.rayleigh = rep.eigenvalues;
    col.msd = rep.msd;
    col.shanks = shanks_table(col.rayleigh, shanks_levels);
    return col;
}

}  // namespace helmspec
