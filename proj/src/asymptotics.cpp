#include "helmspec/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "helmspec/errors.hpp"
#include "helmspec/operators.hpp"
#include "helmspec/solvers.hpp"

namespace helmspec {

using std::numbers::pi;

int max_order(const AsymptoticModel& m) {
    if (m.n < 1) fail(ErrorCode::UnsupportedModel, "state index starts at 1");
    switch (m.bc) {
        case BoundaryCondition::DD: return m.n == 1 ? 5 : 3;
        case BoundaryCondition::ND: return 1;
        case BoundaryCondition::DN:
        case BoundaryCondition::NN:
        case BoundaryCondition::PP:
            if (m.n != 1) fail(ErrorCode::UnsupportedModel, "only the lowest state is catalogued for this bc");
            return 1;
    }
    fail(ErrorCode::UnsupportedModel, "unknown model");
}

namespace {

double nd_value(int n, double eps, double eta, int order) {
    const double q = std::pow(1.0 - 2.0 * n, 2);
    double e = pi * pi / 8.0 * q;
    if (order >= 1) e -= pi / 16.0 * eps * q * std::cos(pi * (1.0 - eta) / eps);
    return e;
}

}  // namespace

double eval_asymptotic(const AsymptoticModel& m, double eps, double eta) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
    const int top = max_order(m);
    const int order = m.order < 0 ? top : m.order;
    if (order > top) fail(ErrorCode::UnsupportedModel, "requested order beyond the catalogued expansion");
    const double s1 = std::sin(pi / eps) * std::sin(pi * eta / eps);
    switch (m.bc) {
        case BoundaryCondition::DD: {
            const double n2 = double(m.n) * m.n, n4 = n2 * n2;
            double e = pi * pi * n2 / 2.0;
            if (order >= 2) e -= pi * pi * eps * eps * n4 / 64.0;
            if (order >= 3) e += 0.25 * pi * std::pow(eps, 3) * n4 * s1;
            if (order >= 4) e -= 15.0 * pi * pi * std::pow(eps, 4) / 1024.0;
            if (order >= 5)
                e += pi * std::pow(eps, 5) / 512.0 *
                     (116.0 * s1 + 5.0 * std::sin(2.0 * pi / eps) * std::cos(2.0 * pi * eta / eps));
            return e;
        }
        case BoundaryCondition::ND: return nd_value(m.n, eps, eta, order);
        case BoundaryCondition::DN: {
            double e = pi * pi / 8.0;
            if (order >= 1) e += pi / 16.0 * eps * std::cos(pi * (eta + 1.0) / eps);
            return e;
        }
        case BoundaryCondition::NN: {
            double e = pi * pi / 2.0;
            if (order >= 1) e -= 0.5 * pi * eps * s1;
            return e;
        }
        case BoundaryCondition::PP: {
            double e = 2.0 * pi * pi;
            if (order >= 1) e -= 2.0 * pi * eps * s1 * std::pow(std::cos(m.phi), 2);
            return e;
        }
    }
    fail(ErrorCode::UnsupportedModel, "unknown model");
}

double reduced_pp_msd(double phi) {
    const double r = std::pow(pi, 4) - 45.0 * std::cos(2.0 * phi) - 45.0;
    return std::abs(std::cos(phi)) * std::sqrt(std::max(r, 0.0));
}

[[noreturn]] static void no_msd_formula() { fail(ErrorCode::UnsupportedModel, "no mean-square-deviation formula for this case"); }

double eval_msd_asymptotic(BoundaryCondition bc, int k, double eps, double eta, int n, double phi) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (n < 1) fail(ErrorCode::UnsupportedModel, "state index starts at 1");
    const double pi2 = pi * pi, pi4 = pi2 * pi2, pi6 = pi4 * pi2, pi8 = pi4 * pi4;
    switch (bc) {
        case BoundaryCondition::DD:
            if (k == 1) return std::sqrt(7.0) / 64.0 * pi2 * eps * eps * std::pow(double(n), 4);
            if (k == 2 && n == 1) {
                const double c = std::cos(2.0 * pi * eta / eps), c2 = std::cos(2.0 * pi / eps);
                const double cm = std::cos(2.0 * pi / eps - 2.0 * pi * eta / eps);
                const double cp = std::cos(2.0 * pi * eta / eps + 2.0 * pi / eps);
                const double br = (30240.0 - 31.0 * pi6) * c + (16.0 * pi6 - 15120.0) * cm +
                                  (16.0 * pi6 - 15120.0) * cp + (30240.0 - 31.0 * pi6) * c2 + 32.0 * pi6 - 30240.0;
                return pi * std::pow(eps, 3) / (96.0 * std::sqrt(210.0)) * std::sqrt(std::max(br, 0.0));
            }
            no_msd_formula();
        case BoundaryCondition::ND:
        case BoundaryCondition::DN: {
            // DN follows from ND under eps -> -eps, eta -> -eta.
            const double arg = bc == BoundaryCondition::ND ? pi * (eta - 1.0) / eps : pi * (eta + 1.0) / eps;
            const double pref = std::abs(eps * std::cos(arg));
            if (k == 1 && n == 1) return pref * pi / 64.0 * std::sqrt((pi4 - 96.0) / 6.0);
            if (k == 2 && n == 1) return pref * pi / 768.0 * std::sqrt(17.0 * pi8 / 70.0 - 2304.0);
            if (k == 1 && bc == BoundaryCondition::ND) {
                const double q = std::pow(1.0 - 2.0 * n, 2);
                return pi * q / (64.0 * std::sqrt(6.0)) * std::sqrt(pi4 * q * q - 96.0) * pref;
            }
            no_msd_formula();
        }
        case BoundaryCondition::NN: {
            if (k != 1 || n != 1) no_msd_formula();
            const double br = -360.0 * std::cos(2.0 * pi * (eta - 1.0) / eps) +
                              (720.0 - 7.0 * pi4) * std::cos(2.0 * pi * eta / eps) +
                              std::cos(2.0 * pi / eps) * (8.0 * pi4 * std::cos(2.0 * pi * eta / eps) - 7.0 * pi4 + 720.0) +
                              8.0 * (-45.0 * std::cos(2.0 * pi * (eta + 1.0) / eps) + pi4 - 90.0);
            return pi * std::abs(eps) / (48.0 * std::sqrt(5.0)) * std::sqrt(std::max(br, 0.0));
        }
        case BoundaryCondition::PP: {
            if (k != 1 || n != 1) no_msd_formula();
            const double s = std::abs(eps * std::sin(pi / eps) * std::sin(pi * eta / eps));
            return std::sqrt(2.0 / 5.0) * pi / 3.0 * s * reduced_pp_msd(phi);
        }
    }
    no_msd_formula();
    return 0.0;
}

double excited_validity_bound(double eps) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
    return 1.25 / std::sqrt(eps);
}

int default_sweep_basis(const SweepConfig& c) {
    double eps_min = 1.0;
    for (double e : c.epsilons) eps_min = std::min(eps_min, e);
    // odd count keeps periodic pairs complete (zero mode + pairs)
    int n = std::max(256, static_cast<int>(std::ceil(8.0 / eps_min)));
    return n % 2 == 0 ? n + 1 : n;
}

namespace {

std::vector<SweepRecord> sweep_point(const SweepConfig& c, double eps, int basis) {
    const Domain line = Domain::interval(1.0);
    QuadratureOptions opt;
    opt.min_panels = 1;
    const auto ctx = OperatorContext::create(line, c.bc, DensitySpec::oscillating(eps, c.eta), opt);
    std::vector<SweepRecord> out;
    const auto record = [&](int n, double phi, double numeric, double asym, double msd) {
        out.push_back({c.bc, c.eta, phi, eps, n, numeric, asym, std::abs(numeric - asym), msd});
    };
    switch (c.bc) {
        case BoundaryCondition::DD:
        case BoundaryCondition::ND: {
            const int cap = std::max(1, static_cast<int>(std::floor(excited_validity_bound(eps))));
            const int states = std::min(c.states, cap);
            const auto ritz = rr_matrix_solve(*ctx, basis, MatrixEngine::WInv, states);
            for (int n = 1; n <= states; ++n) {
                const AsymptoticModel m{c.bc, n, 0.0, -1};
                record(n, 0.0, ritz[n - 1].eigenvalue, eval_asymptotic(m, eps, c.eta),
                       eval_msd_asymptotic(c.bc, 1, eps, c.eta, n));
            }
            break;
        }
        case BoundaryCondition::DN: {
            const auto ritz = rr_matrix_solve(*ctx, basis, MatrixEngine::WInv, 1);
            record(1, 0.0, ritz[0].eigenvalue, eval_asymptotic({c.bc, 1, 0.0, -1}, eps, c.eta),
                   eval_msd_asymptotic(c.bc, 1, eps, c.eta));
            break;
        }
        case BoundaryCondition::NN: {
            const auto ritz = rr_matrix_solve(*ctx, basis, MatrixEngine::WInvDeflated, 1);
            record(1, 0.0, ritz[0].eigenvalue, eval_asymptotic({c.bc, 1, 0.0, -1}, eps, c.eta),
                   eval_msd_asymptotic(c.bc, 1, eps, c.eta));
            break;
        }
        case BoundaryCondition::PP: {
            // The two lowest nonzero levels; each angle is matched to the nearest one.
            const auto ritz = rr_matrix_solve(*ctx, basis, MatrixEngine::WInvDeflated, 2);
            for (double phi : c.phis) {
                const double asym = eval_asymptotic({c.bc, 1, phi, -1}, eps, c.eta);
                const double e = std::abs(ritz[0].eigenvalue - asym) <= std::abs(ritz[1].eigenvalue - asym)
                                     ? ritz[0].eigenvalue
                                     : ritz[1].eigenvalue;
                record(1, phi, e, asym, eval_msd_asymptotic(c.bc, 1, eps, c.eta, 1, phi));
            }
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<SweepRecord> sweep_epsilon(const SweepConfig& c) {
    if (c.epsilons.empty()) fail(ErrorCode::InvalidArgument, "empty epsilon grid");
    for (double e : c.epsilons)
        if (!(e > 0.0 && e <= 1.0)) fail(ErrorCode::InvalidArgument, "epsilon grid values must lie in (0, 1]");
    if (c.states < 1) fail(ErrorCode::InvalidArgument, "states must be positive");
    const int basis = c.basis > 0 ? c.basis : default_sweep_basis(c);
    for (double e : c.epsilons)
        if (basis < 2.0 / e) fail(ErrorCode::ResolutionTooLow, "basis cannot resolve the density period");

    const std::size_t m = c.epsilons.size();
    std::vector<std::vector<SweepRecord>> parts(m);
    std::vector<std::exception_ptr> errors(m);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < m; i = next++) {
            try {
                parts[i] = sweep_point(c, c.epsilons[i], basis);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int threads = std::clamp(c.threads, 1, static_cast<int>(m));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::vector<SweepRecord> out;
    for (std::size_t i = 0; i < m; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.insert(out.end(), parts[i].begin(), parts[i].end());
    }
    return out;
}

double power_second_opinion(BoundaryCondition bc, double eps, double eta, int p_max) {
    if (bc == BoundaryCondition::PP) fail(ErrorCode::UnsupportedModel, "power second opinion covers dd|nd|dn|nn");
    const Domain line = Domain::interval(1.0);
    const auto ctx = OperatorContext::create(line, bc, DensitySpec::oscillating(eps, eta));
    const Mode m = lowest_modes(bc, line, 1).front();
    GridFunction ansatz = GridFunction::sample(ctx, [&](Point p) { return eval_sqrt_density(ctx->density(), p) * m(p.x); });
    if (has_zero_mode(bc)) ansatz = project_out_zero_mode(ansatz);
    IterationOptions opt;
    opt.p_max = p_max;
    opt.tol = 1e-13;
    return power_iterate(ansatz, opt).eigenvalue();
}

}  // namespace helmspec
