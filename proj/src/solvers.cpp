#include "helmspec/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace helmspec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool uses_zero_mode_path(const OperatorContext& ctx) { return !ctx.is_2d() && has_zero_mode(ctx.bc()); }

// Psi = Xi / sqrt(Sigma) with integral Sigma Psi^2 = 1 and largest sample positive.
GridFunction to_psi(const GridFunction& xi) {
    GridFunction psi = xi * (1.0 / xi.norm());
    psi = psi.divided_by(xi.context()->sqrt_sigma());
    const auto& v = psi.values();
    const auto it = std::max_element(v.begin(), v.end(), [](double l, double r) { return std::abs(l) < std::abs(r); });
    if (it != v.end() && *it < 0.0) psi *= -1.0;
    return psi;
}

// One inverse application plus the image of the input under O, as needed by the
// overlap identities. For the zero-mode path O Xi_p = Xi_{p-1} - m Sigma^{-1/2}.
struct Step {
    GridFunction next;
    GridFunction image;  // O applied to `next`
};

Step inverse_step(const GridFunction& prev) {
    const auto& ctx = *prev.context();
    if (!uses_zero_mode_path(ctx)) return {apply_inverse(prev), prev};
    const GridFunction root(prev.context(), ctx.sqrt_sigma());
    const double m = root.dot(prev) / ctx.domain().volume();
    GridFunction image = prev;
    if (m != 0.0) {
        auto& v = image.values();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= m / ctx.sqrt_sigma()[i];
    }
    return {project_out_zero_mode(apply_regularized_kernel(prev)), std::move(image)};
}

IterateState measure(int p, const GridFunction& next, const GridFunction& image, const GridFunction& prev) {
    IterateState s;
    s.p = p;
    s.norm_sq = next.dot(next);
    s.overlap_prev = next.dot(prev);
    s.prev_norm_sq = prev.dot(prev);
    s.rayleigh = next.dot(image) / s.norm_sq;
    // Delta^2 = <O^2> - <O>^2, evaluated as a residual norm to avoid cancellation.
    s.msd = (image - s.rayleigh * next).norm() / std::sqrt(s.norm_sq);
    return s;
}

}  // namespace

SolveReport power_iterate(const GridFunction& ansatz, const IterationOptions& opt) {
    const auto t0 = Clock::now();
    if (opt.p_max < 1 || !(opt.tol > 0.0)) fail(ErrorCode::InvalidArgument, "p_max >= 1 and tol > 0 required");
    const double n0 = ansatz.norm();
    if (!(n0 > 0.0)) fail(ErrorCode::LostOverlap, "ansatz has zero norm");

    SolveReport rep;
    rep.engine = "power";
    GridFunction prev = ansatz * (1.0 / n0);
    for (int p = 1; p <= opt.p_max; ++p) {
        Step st = inverse_step(prev);
        const double nrm = st.next.norm();
        if (!(nrm >= 1e-300)) fail(ErrorCode::LostOverlap, "iterate norm collapsed; ansatz has no overlap with the target");
        const IterateState s = measure(p, st.next, st.image, prev);
        rep.iterates.push_back(s);
        rep.eigenvalues.push_back(s.rayleigh);
        rep.msd.push_back(s.msd);
        prev = st.next * (1.0 / nrm);
        if (opt.fixed_count) {
            rep.converged = p == opt.p_max;
            continue;
        }
        if (p >= 2 && std::abs(rep.eigenvalues[p - 1] - rep.eigenvalues[p - 2]) < opt.tol) {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged) rep.status = "NoConvergence";
    rep.eigenfunction = to_psi(prev);
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

SolveReport lanczos_iterate(const GridFunction& ansatz, const IterationOptions& opt) {
    const auto t0 = Clock::now();
    const auto& ctx = *ansatz.context();
    if (uses_zero_mode_path(ctx)) fail(ErrorCode::ZeroModePresent, "Lanczos iteration is implemented for dd|nd|dn");
    if (opt.p_max < 1 || !(opt.tol > 0.0)) fail(ErrorCode::InvalidArgument, "p_max >= 1 and tol > 0 required");
    const double n0 = ansatz.norm();
    if (!(n0 > 0.0)) fail(ErrorCode::LostOverlap, "ansatz has zero norm");

    SolveReport rep;
    rep.engine = "lanczos";
    GridFunction xi = ansatz * (1.0 / n0);
    for (int p = 0; p < opt.p_max; ++p) {
        const GridFunction w = apply_inverse(xi);
        LanczosState st;
        st.p = p;
        st.eta = xi.dot(w);
        GridFunction r = w - st.eta * xi;
        st.upsilon = r.norm();
        if (!(st.eta > 1e-300)) fail(ErrorCode::LostOverlap, "inverse operator annihilated the iterate");
        if (st.upsilon < 1e-14 * st.eta) {
            st.e1 = st.e2 = st.eta;
            rep.lanczos.push_back(st);
            rep.eigenvalues.push_back(1.0 / st.eta);
            rep.msd.push_back(st.upsilon / (st.eta * st.eta));
            rep.converged = true;
            rep.status = "DegenerateSubspace";
            break;
        }
        const GridFunction chi = r * (1.0 / st.upsilon);
        const GridFunction a_chi = apply_inverse(chi);
        st.epsilon_q = chi.dot(a_chi);
        const double diff = st.eta - st.epsilon_q;
        st.delta = std::sqrt(diff * diff + 4.0 * st.upsilon * st.upsilon);
        st.e2 = 0.5 * (st.eta + st.epsilon_q + st.delta);
        st.e1 = 0.5 * (st.eta + st.epsilon_q - st.delta);
        // Upper eigenvector of [[eta, ups], [ups, eps]]: both forms equal the closed form
        // with coefficients sqrt((+-(eta - eps) + Delta) / (2 Delta)); pick the one without cancellation.
        double c1, c2;
        if (diff >= 0.0) {
            c1 = 0.5 * (diff + st.delta);
            c2 = st.upsilon;
        } else {
            c1 = st.upsilon;
            c2 = 0.5 * (st.delta - diff);
        }
        const double cn = std::hypot(c1, c2);
        c1 /= cn;
        c2 /= cn;
        GridFunction v2 = c1 * xi + c2 * chi;
        const GridFunction av2 = c1 * w + c2 * a_chi;
        st.residual = (av2 - st.e2 * v2).norm();
        rep.lanczos.push_back(st);
        rep.eigenvalues.push_back(1.0 / st.e2);
        rep.msd.push_back(st.residual / (st.e2 * st.e2));
        xi = v2 * (1.0 / v2.norm());
        const auto k = rep.eigenvalues.size();
        if (k >= 2 && std::abs(rep.eigenvalues[k - 1] - rep.eigenvalues[k - 2]) < opt.tol) {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged) rep.status = "NoConvergence";
    rep.eigenfunction = to_psi(xi);
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

std::vector<SolveReport> block_iterate(const std::vector<GridFunction>& ansatzes, const IterationOptions& opt) {
    const auto t0 = Clock::now();
    if (ansatzes.empty()) fail(ErrorCode::InvalidArgument, "block iteration needs at least one ansatz");
    if (opt.p_max < 1 || !(opt.tol > 0.0)) fail(ErrorCode::InvalidArgument, "p_max >= 1 and tol > 0 required");
    const std::size_t k = ansatzes.size();
    std::vector<GridFunction> y;
    for (const auto& a : ansatzes) {
        const double n = a.norm();
        if (!(n > 0.0)) fail(ErrorCode::LostOverlap, "ansatz has zero norm");
        y.push_back(a * (1.0 / n));
    }
    std::vector<SolveReport> reps(k);
    for (auto& r : reps) r.engine = "block";

    bool done = false;
    for (int p = 1; p <= opt.p_max && !done; ++p) {
        std::vector<GridFunction> x, z;
        for (const auto& yj : y) {
            Step st = inverse_step(yj);
            x.push_back(std::move(st.next));
            z.push_back(std::move(st.image));
        }
        if (p == 1) {
            // Ascending <O>_1, the first Rayleigh quotients available without differentiating.
            std::vector<double> r1(k);
            for (std::size_t j = 0; j < k; ++j) r1[j] = x[j].dot(z[j]) / x[j].dot(x[j]);
            std::vector<std::size_t> order(k);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return r1[l] < r1[r]; });
            std::vector<GridFunction> xs, zs, ys;
            for (auto j : order) {
                xs.push_back(x[j]);
                zs.push_back(z[j]);
                ys.push_back(y[j]);
            }
            x = std::move(xs);
            z = std::move(zs);
            y = std::move(ys);
        }
        for (std::size_t j = 0; j < k; ++j) {
            const double pre = x[j].norm();
            if (!(pre >= 1e-300)) throw BlockFailure(ErrorCode::LostOverlap, "member norm collapsed", reps);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < j; ++i) {
                    const double c = x[i].dot(x[j]);
                    x[j] -= c * x[i];
                    z[j] -= c * z[i];
                }
            }
            const double post = x[j].norm();
            if (post < 1e-12 * pre)
                throw BlockFailure(ErrorCode::RankCollapse, "member " + std::to_string(j) + " lost independence", reps);
            x[j] *= 1.0 / post;
            z[j] *= 1.0 / post;
        }
        done = p >= 2;
        for (std::size_t j = 0; j < k; ++j) {
            IterateState s;
            s.p = p;
            s.norm_sq = x[j].dot(x[j]);
            s.overlap_prev = x[j].dot(y[j]);
            s.prev_norm_sq = y[j].dot(y[j]);
            s.rayleigh = x[j].dot(z[j]) / s.norm_sq;
            s.msd = (z[j] - s.rayleigh * x[j]).norm() / std::sqrt(s.norm_sq);
            auto& r = reps[j];
            if (!r.eigenvalues.empty() && std::abs(s.rayleigh - r.eigenvalues.back()) >= opt.tol) done = false;
            r.iterates.push_back(s);
            r.eigenvalues.push_back(s.rayleigh);
            r.msd.push_back(s.msd);
        }
        y = std::move(x);
    }
    for (std::size_t j = 0; j < k; ++j) {
        reps[j].converged = done;
        reps[j].status = done ? "ok" : "NoConvergence";
        reps[j].eigenfunction = to_psi(y[j]);
        reps[j].wall_seconds = seconds_since(t0);
    }
    return reps;
}

std::vector<RitzPair> rr_matrix_solve(const SpectralMatrix& m, int k) {
    if (k < 1 || k > m.size) fail(ErrorCode::InvalidArgument, "need 1 <= k <= N");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.entries);
    if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "dense eigensolver failed");
    std::vector<RitzPair> out;
    const auto n = m.entries.rows();
    for (int j = 0; j < k; ++j) {
        const double lambda = es.eigenvalues()(n - 1 - j);
        if (!(lambda > 0.0)) fail(ErrorCode::NoConvergence, "non-positive inverse-operator eigenvalue");
        out.push_back({1.0 / lambda, es.eigenvectors().col(n - 1 - j)});
    }
    return out;
}

std::vector<RitzPair> rr_matrix_solve(const OperatorContext& ctx, int n, MatrixEngine engine, int k) {
    const int dim = engine == MatrixEngine::WInvDeflated ? n - 1 : n;
    if (k < 1 || k > dim) fail(ErrorCode::InvalidArgument, "need 1 <= k <= N");
    return rr_matrix_solve(build_spectral_matrix(ctx, n, engine), k);
}

MatrixEigenpair matrix_power_method(const Eigen::MatrixXd& a, const Eigen::VectorXd& trial,
                                    std::span<const Eigen::VectorXd> deflate_against, int p_max, double tol) {
    if (a.rows() != a.cols() || a.rows() != trial.size()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
    // Orthonormal copy of the deflation set.
    std::vector<Eigen::VectorXd> q;
    for (const auto& d : deflate_against) {
        Eigen::VectorXd v = d;
        for (const auto& b : q) v -= b.dot(v) * b;
        const double n = v.norm();
        if (n > 0.0) q.push_back(v / n);
    }
    const auto deflate = [&q](Eigen::VectorXd& v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : q) v -= b.dot(v) * b;
    };
    Eigen::VectorXd v = trial;
    deflate(v);
    if (!(v.norm() > 1e-14 * trial.norm())) fail(ErrorCode::LostOverlap, "trial vector lies in the deflated subspace");
    v.normalize();
    for (int it = 1; it <= p_max; ++it) {
        Eigen::VectorXd w = a * v;
        deflate(w);
        const double nw = w.norm();
        if (!(nw >= 1e-300)) fail(ErrorCode::LostOverlap, "iterate collapsed");
        w /= nw;
        const double change = (w - v).norm();
        v = std::move(w);
        if (change < tol) {
            Eigen::VectorXd av = a * v;
            deflate(av);
            return {v.dot(av), v, it};
        }
    }
    fail(ErrorCode::NoConvergence, "matrix power method reached p_max");
}

MatrixEigenpair matrix_power_method(const SpectralMatrix& m, const Eigen::VectorXd& trial,
                                    std::span<const Eigen::VectorXd> deflate_against, int p_max, double tol) {
    return matrix_power_method(m.entries, trial, deflate_against, p_max, tol);
}

}  // namespace helmspec
