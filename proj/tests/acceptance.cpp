// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "helmspec/accel.hpp"
#include "helmspec/asymptotics.hpp"
#include "helmspec/drum2d.hpp"
#include "helmspec/experiments.hpp"
#include "helmspec/operators.hpp"
#include "helmspec/solvers.hpp"
#include "oracles.hpp"

using namespace helmspec;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Reference table: rows <O>_1..10, s1_1..8, s2_1..6, s3_1..4; columns alpha = 1/2, 1, 2.
const double kTable1[28][3] = {
    {9.69310365089956, 9.21037410544234, 7.76924315857119}, {9.68737359122776, 9.19238760347104, 7.73502742410347},
    {9.68702664891476, 9.19138111461443, 7.73341903683425}, {9.68700556297997, 9.19132401578685, 7.73334058319427},
    {9.68700428051026, 9.19132076814843, 7.73333673246089}, {9.68700420249783, 9.19132058333956, 7.73333654324603},
    {9.68700419775222, 9.19132057282190, 7.73333653394665}, {9.68700419746353, 9.19132057222331, 7.73333653348959},
    {9.68700419744597, 9.19132057218925, 7.73333653346713}, {9.68700419744490, 9.19132057218731, 7.73333653346602},
    {9.68700428845695, 9.19132145507167, 7.73333970165889}, {9.6870041985241, 9.19132058171233, 7.73333656016117},
    {9.6870041974577, 9.191320572291, 7.7333365336999},     {9.68700419744499, 9.19132057218833, 7.73333653346805},
    {9.68700419744484, 9.1913205721872, 7.73333653346599},  {9.68700419744483, 9.19132057218719, 7.73333653346597},
    {9.68700419744483, 9.19132057218719, 7.73333653346597}, {9.68700419744483, 9.19132057218719, 7.73333653346597},
    {9.68700419744490, 9.19132057218826, 7.73333653347512}, {9.68700419744483, 9.19132057218720, 7.73333653346600},
    {9.68700419744483, 9.19132057218719, 7.73333653346597}, {9.68700419744483, 9.19132057218719, 7.73333653346597},
    {9.68700419744483, 9.19132057218719, 7.73333653346597}, {9.68700419744483, 9.19132057218719, 7.73333653346597},
    {9.68700419744483, 9.19132057218719, 7.73333653346597}, {9.68700419744483, 9.19132057218719, 7.73333653346597},
    {9.68700419744483, 9.19132057218719, 7.73333653346597}, {9.68700419744483, 9.19132057218719, 7.73333653346597},
};
const double kAlphas[3] = {0.5, 1.0, 2.0};

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [fail: " << what << "]";
        }
    }
};

ContextPtr parabolic_context(BoundaryCondition bc, double alpha, int min_panels = 16) {
    QuadratureOptions q;
    q.min_panels = min_panels;
    return OperatorContext::create(Domain::interval(1.0), bc, DensitySpec::parabolic(alpha), q);
}

// Reference-table comparison shared by criteria 1 and 9.
struct Table1Check {
    double max_rayleigh_err = 0.0;
    double max_shanks_err = 0.0;
    int flagged = 0;
    double seconds = 0.0;
};

Table1Check check_table1() {
    Table1Check c;
    const auto t0 = Clock::now();
    for (int col = 0; col < 3; ++col) {
        const auto t = table1_column(kAlphas[col], 10, 3);
        for (int i = 0; i < 10; ++i) c.max_rayleigh_err = std::max(c.max_rayleigh_err, std::abs(t.rayleigh[i] - kTable1[i][col]));
        int row = 10;
        for (const auto& level : t.shanks.levels)
            for (const auto& e : level) {
                c.max_shanks_err = std::max(c.max_shanks_err, std::abs(e.value - kTable1[row++][col]));
                if (!e.valid) ++c.flagged;
            }
        if (row != 28) c.max_shanks_err = INFINITY;
    }
    c.seconds = seconds_since(t0);
    return c;
}

void criterion1(Verdict& v) {
    const auto c = check_table1();
    v.detail << "max |<O>_p - table| = " << c.max_rayleigh_err << ", max |s - table| = " << c.max_shanks_err
             << ", flagged entries " << c.flagged << ", " << c.seconds << " s";
    v.require(c.max_rayleigh_err <= 1e-10, "rayleigh entries");
    v.require(c.max_shanks_err <= 1e-10, "shanks entries");
    v.require(c.seconds < 60.0, "runtime");
}

void criterion2(Verdict& v) {
    IterationOptions it;
    it.p_max = 200;
    const auto dd = parabolic_context(BoundaryCondition::DD, 2.0);
    const auto nn = parabolic_context(BoundaryCondition::NN, 2.0);
    const auto pp = parabolic_context(BoundaryCondition::PP, 2.0);
    const double edd = power_iterate(ansatz_parabolic_dd(dd, 2.0), it).eigenvalue();
    const double enn = power_iterate(ansatz_parabolic_nn(nn), it).eigenvalue();
    const double epp = power_iterate(ansatz_parabolic_nn(pp), it).eigenvalue();
    v.detail.precision(16);
    v.detail << "DD " << edd << ", NN " << enn << ", PP " << epp;
    v.require(std::abs(edd - 7.73333653346597) <= 1e-10, "DD");
    v.require(std::abs(enn - 12.1871394680951) <= 1e-9, "NN");
    v.require(std::abs(epp - 26.5925558293200) <= 1e-9, "PP");
}

void criterion3(Verdict& v) {
    const double expected[3] = {9.687015834, 9.191446083, 7.733951650};
    IterationOptions one;
    one.p_max = 1;
    one.fixed_count = true;
    v.detail.precision(12);
    for (int i = 0; i < 3; ++i) {
        const auto ctx = parabolic_context(BoundaryCondition::DD, kAlphas[i]);
        const double e = lanczos_iterate(ansatz_parabolic_dd(ctx, kAlphas[i]), one).eigenvalues.front();
        v.detail << "alpha " << kAlphas[i] << ": " << e << "  ";
        v.require(std::abs(e - expected[i]) <= 1e-8, "alpha " + std::to_string(kAlphas[i]));
    }
}

void criterion4(Verdict& v) {
    IterationOptions it;
    it.p_max = 200;
    double spread = 0.0;
    for (double alpha : kAlphas) {
        const auto ctx = parabolic_context(BoundaryCondition::DD, alpha);
        const auto ansatz = ansatz_parabolic_dd(ctx, alpha);
        const double ep = power_iterate(ansatz, it).eigenvalue();
        const double el = lanczos_iterate(ansatz, it).eigenvalue();
        const double eb = block_iterate({ansatz}, it).front().eigenvalue();
        const double er = rr_matrix_solve(*ctx, 40, MatrixEngine::WInv, 1).front().eigenvalue;
        const double hi = std::max({ep, el, eb, er}), lo = std::min({ep, el, eb, er});
        spread = std::max(spread, hi - lo);
    }
    v.detail << "max engine spread " << spread;
    v.require(spread <= 1e-8, "engine agreement");

    // matrix power method against the dense decomposition, N = 30, parabolic alpha = 1
    const auto ctx = parabolic_context(BoundaryCondition::DD, 1.0);
    const auto m = build_spectral_matrix(*ctx, 30, MatrixEngine::WInv);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.entries);
    const Eigen::VectorXd trial = Eigen::VectorXd::Ones(30);
    const auto first = matrix_power_method(m, trial);
    const std::vector<Eigen::VectorXd> found{first.vector};
    const auto second = matrix_power_method(m, trial, found);
    double value_err = 0.0, vector_err = 0.0;
    const MatrixEigenpair got[2] = {first, second};
    for (int k = 0; k < 2; ++k) {
        const double lam = es.eigenvalues()(29 - k);
        Eigen::VectorXd vec = es.eigenvectors().col(29 - k);
        if (vec.dot(got[k].vector) < 0.0) vec = -vec;
        value_err = std::max(value_err, std::abs(got[k].eigenvalue - lam) / lam);
        vector_err = std::max(vector_err, (got[k].vector - vec).norm());
    }
    v.detail << ", matrix power vs dense: eigenvalue rel " << value_err << ", vector " << vector_err;
    v.require(value_err <= 1e-12, "matrix power eigenvalues");
    v.require(vector_err <= 1e-10, "matrix power eigenvectors");
}

// f = Sigma^{-1/2} b with b a fixed combination of the six lowest nonzero modes.
void criterion5(Verdict& v) {
    const double coeffs[6] = {1.0, -0.7, 0.5, 0.35, -0.25, 0.15};
    const BoundaryCondition bcs[5] = {BoundaryCondition::DD, BoundaryCondition::ND, BoundaryCondition::DN,
                                      BoundaryCondition::NN, BoundaryCondition::PP};
    const DensitySpec densities[2] = {DensitySpec::parabolic(1.0), DensitySpec::oscillating(0.25, 1.0)};
    double worst = 0.0;
    QuadratureOptions q;
    q.min_panels = 64;
    for (const auto& dens : densities)
        for (auto bc : bcs) {
            const auto ctx = OperatorContext::create(Domain::interval(1.0), bc, dens, q);
            const auto modes = lowest_modes(bc, ctx->domain(), 6);
            auto f = GridFunction::sample(ctx, [&](Point p) {
                double s = 0.0;
                for (int k = 0; k < 6; ++k) s += coeffs[k] * modes[k](p.x);
                return s / eval_sqrt_density(dens, p);
            });
            if (has_zero_mode(bc)) f = project_out_zero_mode(f);
            const auto back = apply_forward_spectral(apply_inverse(f), 60);
            GridFunction diff = back - f;
            if (has_zero_mode(bc)) diff = project_out_zero_mode(diff);
            const double rel = diff.norm() / f.norm();
            worst = std::max(worst, rel);
            v.detail << to_string(bc) << "/" << dens.describe() << " " << rel << "  ";
        }
    v.require(worst < 1e-6, "relative error");
}

struct BenchRun {
    std::string label;
    GridFunction ansatz;
    ContextPtr ctx;
    std::function<double(double)> sigma;
};

oracle::Bc oracle_bc(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::DD: return oracle::Bc::DD;
        case BoundaryCondition::ND: return oracle::Bc::ND;
        case BoundaryCondition::DN: return oracle::Bc::DN;
        case BoundaryCondition::NN: return oracle::Bc::NN;
        case BoundaryCondition::PP: return oracle::Bc::PP;
    }
    return oracle::Bc::DD;
}

void criterion6(Verdict& v) {
    const auto parabolic = [](double alpha) {
        return [alpha](double x) { return (1.0 + alpha * x) * (1.0 + alpha * x); };
    };
    const auto oscillating = [](double x) { return 2.0 + std::sin(2.0 * pi * (x + 0.5) / 0.1); };
    std::vector<BenchRun> runs;
    for (double alpha : kAlphas) {
        auto ctx = parabolic_context(BoundaryCondition::DD, alpha);
        runs.push_back({"dd parabolic", ansatz_parabolic_dd(ctx, alpha), ctx, parabolic(alpha)});
    }
    {
        auto ctx = parabolic_context(BoundaryCondition::DD, 2.0);
        runs.push_back({"dd parabolic ansatz2", ansatz_parabolic_dd2(ctx), ctx, parabolic(2.0)});
    }
    for (auto bc : {BoundaryCondition::NN, BoundaryCondition::PP}) {
        auto ctx = parabolic_context(bc, 2.0);
        runs.push_back({"zero-mode parabolic", ansatz_parabolic_nn(ctx), ctx, parabolic(2.0)});
    }
    for (auto bc : {BoundaryCondition::DD, BoundaryCondition::ND, BoundaryCondition::DN, BoundaryCondition::NN,
                    BoundaryCondition::PP}) {
        auto ctx = OperatorContext::create(Domain::interval(1.0), bc, DensitySpec::oscillating(0.1, 1.0));
        runs.push_back({"oscillating", ansatz_mode(ctx, lowest_modes(bc, ctx->domain(), 1).front()), ctx, oscillating});
    }

    double worst_descent = -INFINITY, worst_ascent = -INFINITY, worst_bracket = -INFINITY;
    IterationOptions it;
    it.p_max = 60;
    for (const auto& r : runs) {
        const auto rep = power_iterate(r.ansatz, it);
        for (std::size_t p = 1; p < rep.eigenvalues.size(); ++p)
            worst_descent = std::max(worst_descent, rep.eigenvalues[p] - rep.eigenvalues[p - 1]);
        if (!has_zero_mode(r.ctx->bc())) {
            const auto lz = lanczos_iterate(r.ansatz, it);
            for (std::size_t p = 1; p < lz.lanczos.size(); ++p)
                worst_ascent = std::max(worst_ascent, lz.lanczos[p - 1].eta - lz.lanczos[p].eta);
        }
        const auto spectrum = oracle::galerkin_eigenvalues(oracle_bc(r.ctx->bc()), r.sigma, 100);
        for (std::size_t p = 0; p < rep.eigenvalues.size(); ++p) {
            double gap = INFINITY;
            for (double e : spectrum) gap = std::min(gap, std::abs(rep.eigenvalues[p] - e));
            worst_bracket = std::max(worst_bracket, gap - rep.msd[p]);
        }
    }
    v.detail << runs.size() << " runs; max rise " << worst_descent << ", max eta drop " << worst_ascent
             << ", max (gap - msd) " << worst_bracket;
    v.require(worst_descent <= 1e-12, "Rayleigh descent");
    v.require(worst_ascent <= 1e-12, "Lanczos ascent");
    v.require(worst_bracket <= 1e-9, "msd bracketing");
}

void criterion7(Verdict& v) {
    const double a = 1.0, b = 0.5;
    double worst = -INFINITY;
    v.detail.precision(10);
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
        const double rr = drum_rr_reference(a, b, alpha, 400, 0).eigenvalue;
        for (double beta : {0.0, beta_star(a, b, alpha)}) {
            const double b1 = bound1(a, b, alpha, beta).value;
            const double b0 = bound0(a, b, alpha, beta);
            worst = std::max({worst, rr - b1, b1 - b0});
        }
    }
    const double homogeneous = std::abs(bound0(a, b, 0.0, 0.0) - 5.0 * pi * pi);
    v.detail << "max chain violation " << worst << ", |bound0(0,0) - 5 pi^2| = " << homogeneous;
    v.require(worst <= 1e-9, "bound chain");
    v.require(homogeneous <= 1e-12, "homogeneous limit");
}

double residual_at(const std::vector<SweepRecord>& recs, double eps, double phi = 0.0) {
    for (const auto& r : recs)
        if (r.epsilon == eps && r.phi == phi && r.n == 1) return r.residual;
    return NAN;
}

void criterion8(Verdict& v) {
    const auto t0 = Clock::now();
    std::vector<SweepRecord> all;
    for (auto bc : {BoundaryCondition::DD, BoundaryCondition::ND, BoundaryCondition::DN, BoundaryCondition::NN,
                    BoundaryCondition::PP})
        for (double eta : {0.0, 0.5, 1.0}) {
            SweepConfig c;
            c.bc = bc;
            c.eta = eta;
            if (bc == BoundaryCondition::PP) c.phis = {0.0, pi / 2.0};
            const auto recs = sweep_epsilon(c);
            all.insert(all.end(), recs.begin(), recs.end());
        }
    const double seconds = seconds_since(t0);

    std::vector<SweepRecord> dd1, nd1, pp1;
    for (const auto& r : all) {
        if (r.eta != 1.0) continue;
        if (r.bc == BoundaryCondition::DD) dd1.push_back(r);
        if (r.bc == BoundaryCondition::ND) nd1.push_back(r);
        if (r.bc == BoundaryCondition::PP) pp1.push_back(r);
    }
    const double ratio = residual_at(dd1, 0.1) / residual_at(dd1, 0.05);
    double nd_err = NAN;
    for (const auto& r : nd1)
        if (r.epsilon == 0.05 && r.n == 1) nd_err = std::abs(r.e_numeric - pi * pi / 8.0);
    const double nd_bound = 2.0 * std::abs(pi / 16.0 * 0.05);
    // PP: numeric pair vs the two branches at eps = 0.05, eta = 1
    double flat = 0.0, osc = 0.0;
    for (const auto& r : pp1)
        if (r.epsilon == 0.05) {
            const double rel = r.residual / std::abs(r.e_asymptotic);
            (r.phi == 0.0 ? osc : flat) = rel;
        }
    v.detail << "DD residual ratio " << ratio << ", ND error " << nd_err << " (bound " << nd_bound << "), PP rel "
             << flat << " (flat) " << osc << " (oscillating), sweep " << seconds << " s";
    v.require(ratio >= 20.0, "DD residual ratio");
    v.require(nd_err <= nd_bound, "ND limit");
    v.require(flat <= 5e-2 && osc <= 5e-2, "PP branches");
    v.require(seconds < 300.0, "runtime");
}

void criterion9(Verdict& v) {
    double worst = 0.0;
    for (double r : {0.5, -0.3, 0.9, 0.1, -0.85})
        for (double A : {1.0, -3.5, 7.75}) {
            const double B = 2.25;
            std::vector<double> s;
            for (int n = 0; n < 8; ++n) s.push_back(A + B * std::pow(r, n));
            for (const auto& e : shanks_once(s)) worst = std::max(worst, std::abs(e.value - A) / std::abs(A));
        }
    const auto t = check_table1();
    v.detail << "geometric recovery rel err " << worst << ", table shanks max err " << t.max_shanks_err;
    v.require(worst <= 1e-12, "geometric recovery");
    v.require(t.max_shanks_err <= 1e-10, "table shanks rows");
}

}  // namespace

int main() {
    const std::function<void(Verdict&)> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};
    int failures = 0;
    for (int i = 0; i < 9; ++i) {
        Verdict v;
        try {
            criteria[i](v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        std::printf("criterion %d: %s - %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.str().c_str());
        std::fflush(stdout);
        if (!v.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
