#include "helmspec/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "helmspec/accel.hpp"
#include "helmspec/asymptotics.hpp"
#include "helmspec/density.hpp"
#include "helmspec/drum2d.hpp"
#include "helmspec/experiments.hpp"
#include "helmspec/format.hpp"
#include "helmspec/operators.hpp"
#include "helmspec/solvers.hpp"
#include "helmspec/spectral_basis.hpp"

namespace helmspec {

using std::numbers::pi;

namespace {

struct Runner {
    std::vector<SelfTestResult> results;

    void check(const std::string& name, const std::function<double()>& got, double want, double tol) {
        try {
            const double v = got();
            const bool ok = std::abs(v - want) <= tol;
            results.push_back({name, ok, "got " + format_double(v) + ", want " + format_double(want)});
        } catch (const std::exception& e) {
            results.push_back({name, false, e.what()});
        }
    }

    void check_true(const std::string& name, const std::function<bool()>& pred) {
        try {
            results.push_back({name, pred(), ""});
        } catch (const std::exception& e) {
            results.push_back({name, false, e.what()});
        }
    }
};

double max_abs_diff(const GridFunction& f, const std::function<double(double)>& g) {
    double m = 0.0;
    const auto& pts = f.context()->points();
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g(pts[i].x)));
    return m;
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
    Runner r;
    const Domain unit = Domain::interval(1.0);
    const auto one = DensitySpec::constant(1.0);

    r.check("density parabolic alpha=2 at 0", [] { return eval_density(DensitySpec::parabolic(2.0), 0.0); }, 1.0, 1e-15);
    r.check("density oscillating sine zero", [] { return eval_density(DensitySpec::oscillating(0.1, 1.0), -0.55); }, 2.0, 1e-14);
    r.check("sqrt density constant 4", [] { return eval_sqrt_density(DensitySpec::constant(4.0), 0.3); }, 2.0, 1e-15);
    r.check("sqrt density parabolic alpha=1 at 0.5", [] { return eval_sqrt_density(DensitySpec::parabolic(1.0), 0.5); }, 1.5, 1e-15);
    r.check("sqrt density oscillating sine -1", [] { return eval_sqrt_density(DensitySpec::oscillating(0.1, 1.0), -0.525); }, 1.0, 1e-7);

    r.check("nn zero mode value", [&] { return mode(BoundaryCondition::NN, unit, 0, 1)(0.123); }, 1.0, 1e-15);
    r.check("nn zero mode eigenvalue", [&] { return mode(BoundaryCondition::NN, unit, 0, 1).eigenvalue(); }, 0.0, 0.0);
    r.check("dd kernel at Dirichlet end", [&] { return green_closed_1d(BoundaryCondition::DD, unit, -0.5, 0.3); }, 0.0, 1e-16);
    r.check("pp regularized kernel integrates to zero", [&] {
        const PanelRule1D rule(-0.5, 0.5, 16, 12);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.weights()[i] * green_regularized_1d(BoundaryCondition::PP, unit, 0.0, rule.nodes()[i]);
        return s;
    }, 0.0, 1e-13);
    r.check("gamma kernel symmetry", [&] {
        return green_gamma_nn_1d(unit, 3.0, 0.3, -0.2) - green_gamma_nn_1d(unit, 3.0, -0.2, 0.3);
    }, 0.0, 1e-15);
    const Domain rect = Domain::rectangle(1.0, 0.5);
    r.check("rectangle kernel at x=-1/2", [&] { return green_rect_2d(rect, -0.5, 0.1, 0.2, -0.1, 80).value; }, 0.0, 1e-15);
    r.check("rectangle kernel symmetry", [&] {
        return green_rect_2d(rect, 0.1, 0.05, -0.2, 0.15, 80).value - green_rect_2d(rect, -0.2, 0.15, 0.1, 0.05, 80).value;
    }, 0.0, 1e-13);

    const auto dd1 = OperatorContext::create(unit, BoundaryCondition::DD, one);
    const Mode phi1 = mode(BoundaryCondition::DD, unit, 1);
    r.check("inverse of phi_1 on unit string", [&] {
        return max_abs_diff(apply_inverse(ansatz_mode(dd1, phi1)), [&](double x) { return phi1(x) / (pi * pi); });
    }, 0.0, 1e-12);
    r.check("inverse with constant density 3", [&] {
        const auto ctx = OperatorContext::create(unit, BoundaryCondition::DD, DensitySpec::constant(3.0));
        const double c = 3.0;
        const auto f = GridFunction::sample(ctx, [&](double x) { return std::sqrt(c) * phi1(x); });
        return max_abs_diff(apply_inverse(f), [&](double x) { return c / (pi * pi) * std::sqrt(c) * phi1(x); });
    }, 0.0, 1e-12);
    const auto nn2 = OperatorContext::create(unit, BoundaryCondition::NN, DensitySpec::parabolic(1.0));
    r.check("regularized inverse annihilates sqrt(Sigma)", [&] {
        const GridFunction root(nn2, nn2->sqrt_sigma());
        const auto& v = apply_inverse_regularized(root).values();
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }, 0.0, 1e-10);
    r.check("periodic inverse of cos(2 pi x)", [&] {
        const auto ctx = OperatorContext::create(unit, BoundaryCondition::PP, one);
        const auto f = GridFunction::sample(ctx, [](double x) { return std::cos(2.0 * pi * x); });
        return max_abs_diff(apply_inverse_regularized(f), [](double x) { return std::cos(2.0 * pi * x) / (4.0 * pi * pi); });
    }, 0.0, 1e-12);
    r.check("projection removes sqrt(Sigma)", [&] {
        return project_out_zero_mode(GridFunction(nn2, nn2->sqrt_sigma())).norm();
    }, 0.0, 1e-13);
    r.check("projection is idempotent", [&] {
        const auto f = project_out_zero_mode(GridFunction::sample(nn2, [](double x) { return std::exp(x); }));
        return (project_out_zero_mode(f) - f).norm();
    }, 0.0, 1e-13);
    r.check("overlaps with unit density", [&] {
        const auto ctx = OperatorContext::create(unit, BoundaryCondition::DD, one);
        double m = 0.0;
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                m = std::max(m, std::abs(density_overlap(*ctx, mode(BoundaryCondition::DD, unit, i),
                                                         mode(BoundaryCondition::DD, unit, j)) - (i == j ? 1.0 : 0.0)));
        return m;
    }, 0.0, 1e-13);
    r.check("WInv with unit density is diagonal", [&] {
        const auto m = build_spectral_matrix(*dd1, 3, MatrixEngine::WInv);
        Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
        for (int k = 0; k < 3; ++k) want(k, k) = 1.0 / ((k + 1) * (k + 1) * pi * pi);
        return (m.entries - want).cwiseAbs().maxCoeff();
    }, 0.0, 1e-15);

    r.check("power iteration on phi_1 + 0.5 phi_3", [&] {
        const Mode phi3 = mode(BoundaryCondition::DD, unit, 3);
        const auto f = GridFunction::sample(dd1, [&](double x) { return phi1(x) + 0.5 * phi3(x); });
        return power_iterate(f).eigenvalue();
    }, pi * pi, 1e-10);
    r.check("Lanczos on an exact eigenfunction", [&] {
        return lanczos_iterate(ansatz_mode(dd1, phi1)).eigenvalue();
    }, pi * pi, 1e-10);
    r.check_true("block iteration on three modes", [&] {
        std::vector<GridFunction> a;
        for (int n = 1; n <= 3; ++n) a.push_back(ansatz_mode(dd1, mode(BoundaryCondition::DD, unit, n)));
        const auto reps = block_iterate(a);
        for (int n = 1; n <= 3; ++n)
            if (std::abs(reps[n - 1].eigenvalue() - n * n * pi * pi) > 1e-9) return false;
        return true;
    });
    r.check_true("Rayleigh-Ritz on unit string", [&] {
        const auto rr = rr_matrix_solve(*dd1, 10, MatrixEngine::WInv, 3);
        for (int n = 1; n <= 3; ++n)
            if (std::abs(rr[n - 1].eigenvalue - n * n * pi * pi) > 1e-12 * n * n * pi * pi) return false;
        return true;
    });
    r.check("matrix power method on a diagonal matrix", [] {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
        for (int k = 0; k < 3; ++k) d(k, k) = 1.0 / ((k + 1) * (k + 1) * pi * pi);
        return matrix_power_method(d, Eigen::Vector3d(1, 1, 1)).eigenvalue;
    }, 1.0 / (pi * pi), 1e-15);

    r.check_true("Shanks on 1 + 2^-n", [] {
        std::vector<double> s;
        for (int n = 0; n <= 4; ++n) s.push_back(1.0 + std::pow(2.0, -n));
        for (const auto& e : shanks_once(std::span<const double>(s)))
            if (!e.valid || e.value != 1.0) return false;
        return true;
    });
    r.check_true("Shanks flags a constant sequence", [] {
        const std::vector<double> s(5, 2.5);
        for (const auto& e : shanks_once(std::span<const double>(s)))
            if (e.valid) return false;
        return true;
    });

    r.check("bound0 homogeneous limit", [] { return bound0(1.0, 0.5, 0.0, 0.0); }, 5.0 * pi * pi, 1e-12);
    r.check_true("bound0 at beta* below beta=0", [] {
        return bound0(1.0, 0.5, 2.0, beta_star(1.0, 0.5, 2.0)) <= bound0(1.0, 0.5, 2.0, 0.0);
    });
    r.check("bound0 continuity at small alpha", [] { return bound0(1.0, 0.5, 1e-4, beta_star(1.0, 0.5, 1e-4)); },
            5.0 * pi * pi, 1e-6);
    r.check("bound1 homogeneous limit", [] { return bound1(1.0, 0.5, 0.0, 0.0, 40).value; }, 5.0 * pi * pi, 1e-8);

    r.check("nd msd vanishes with its cosine", [] {
        const double eps = 0.1;
        return eval_msd_asymptotic(BoundaryCondition::ND, 1, eps, 1.0 + 0.5 * eps);
    }, 0.0, 1e-15);
    r.check("validity bound at eps=1", [] { return excited_validity_bound(1.0); }, 1.25, 1e-15);
    r.check("validity bound at eps=0.0625", [] { return excited_validity_bound(0.0625); }, 5.0, 1e-15);
    return r.results;
}

}  // namespace helmspec
