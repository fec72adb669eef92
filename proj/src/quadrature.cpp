#include "helmspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <boost/math/special_functions/legendre.hpp>

#include "helmspec/errors.hpp"

namespace helmspec {

namespace {

// P_0..P_{m} at t by the three-term recurrence.
std::vector<double> legendre_values(int m, double t) {
    std::vector<double> p(static_cast<std::size_t>(m) + 1);
    p[0] = 1.0;
    if (m >= 1) p[1] = t;
    for (int k = 1; k < m; ++k) p[k + 1] = ((2 * k + 1) * t * p[k] - k * p[k - 1]) / (k + 1);
    return p;
}

GaussLegendre build_rule(int n) {
    GaussLegendre g;
    auto zeros = boost::math::legendre_p_zeros<double>(n);
    for (double z : zeros) {
        g.nodes.push_back(z);
        if (z != 0.0) g.nodes.push_back(-z);
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    for (double t : g.nodes) {
        const double dp = boost::math::legendre_p_prime(n, t);
        g.weights.push_back(2.0 / ((1.0 - t * t) * dp * dp));
    }
    g.left.resize(n, n);
    g.right.resize(n, n);
    std::vector<std::vector<double>> p_nodes;
    for (double t : g.nodes) p_nodes.push_back(legendre_values(n, t));
    for (int i = 0; i < n; ++i) {
        const double ti = g.nodes[i];
        const auto& pi = p_nodes[i];
        for (int j = 0; j < n; ++j) {
            const auto& pj = p_nodes[j];
            // int_{-1}^{t} P_k = (P_{k+1} - P_{k-1}) / (2k+1), and the Lagrange
            // basis is w_j sum_k (2k+1)/2 P_k(t_j) P_k(t).
            double tail = 0.0;
            for (int k = 1; k < n; ++k) tail += 0.5 * pj[k] * (pi[k + 1] - pi[k - 1]);
            g.left(i, j) = g.weights[j] * (0.5 * (ti + 1.0) + tail);
            g.right(i, j) = g.weights[j] * (0.5 * (1.0 - ti) - tail);
        }
    }
    return g;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1 || n > 64) fail(ErrorCode::InvalidArgument, "nodes per panel must be in [1, 64]");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendre>(build_rule(n));
    return *slot;
}

PanelRule1D::PanelRule1D(double lo, double hi, int panels, int nodes_per_panel)
    : lo_(lo), hi_(hi), panels_(panels), npp_(nodes_per_panel) {
    if (!(hi > lo) || panels < 1) fail(ErrorCode::InvalidArgument, "panel rule needs hi > lo and at least one panel");
    const auto& ref = gauss_legendre(nodes_per_panel);
    const double width = (hi - lo) / panels;
    x_.reserve(static_cast<std::size_t>(panels) * nodes_per_panel);
    w_.reserve(x_.capacity());
    for (int p = 0; p < panels; ++p) {
        const double left = lo + p * width;
        for (int j = 0; j < nodes_per_panel; ++j) {
            x_.push_back(left + 0.5 * width * (ref.nodes[j] + 1.0));
            w_.push_back(0.5 * width * ref.weights[j]);
        }
    }
}

double SemiSeparableKernel::operator()(double x, double y) const {
    const double hi = std::max(x, y);
    const double lo = std::min(x, y);
    double s = 0.0;
    for (const auto& t : terms) s += t.u(hi) * t.v(lo);
    return decay == 0.0 ? s : s * std::exp(-decay * (hi - lo));
}

std::vector<double> apply_semi_separable(const PanelRule1D& rule, const SemiSeparableKernel& kernel,
                                         std::span<const double> g) {
    const auto& x = rule.nodes();
    Eigen::MatrixXd u(kernel.terms.size(), x.size());
    Eigen::MatrixXd v(kernel.terms.size(), x.size());
    for (std::size_t k = 0; k < kernel.terms.size(); ++k) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            u(k, i) = kernel.terms[k].u(x[i]);
            v(k, i) = kernel.terms[k].v(x[i]);
        }
    }
    return apply_semi_separable(rule, u, v, kernel.decay, g);
}

std::vector<double> apply_semi_separable(const PanelRule1D& rule, const Eigen::MatrixXd& u_samples,
                                         const Eigen::MatrixXd& v_samples, double decay,
                                         std::span<const double> g) {
    const std::size_t n_total = rule.size();
    if (g.size() != n_total || static_cast<std::size_t>(u_samples.cols()) != n_total ||
        static_cast<std::size_t>(v_samples.cols()) != n_total || u_samples.rows() != v_samples.rows())
        fail(ErrorCode::InvalidArgument, "semi-separable apply: size mismatch");

    const int n = rule.nodes_per_panel();
    const auto& ref = rule.reference();
    const double h = 0.5 * rule.panel_width();

    // Panel-local weights including the exponential factor; identical for every
    // panel because panels are uniform.
    Eigen::MatrixXd m_left(n, n), m_right(n, n);
    Eigen::VectorXd to_left_edge(n), to_right_edge(n), from_left(n), from_right(n);
    for (int i = 0; i < n; ++i) {
        const double ti = ref.nodes[i];
        for (int j = 0; j < n; ++j) {
            const double tj = ref.nodes[j];
            m_left(i, j) = h * ref.left(i, j) * std::exp(-decay * h * (ti - tj));
            m_right(i, j) = h * ref.right(i, j) * std::exp(-decay * h * (tj - ti));
        }
        to_right_edge(i) = h * ref.weights[i] * std::exp(-decay * h * (1.0 - ti));
        to_left_edge(i) = h * ref.weights[i] * std::exp(-decay * h * (ti + 1.0));
        from_left(i) = std::exp(-decay * h * (ti + 1.0));
        from_right(i) = std::exp(-decay * h * (1.0 - ti));
    }
    const double panel_decay = std::exp(-2.0 * decay * h);

    std::vector<double> out(n_total, 0.0);
    Eigen::VectorXd q(n), loc(n);
    const int panels = rule.panels();
    for (Eigen::Index k = 0; k < u_samples.rows(); ++k) {
        double carry = 0.0;
        for (int p = 0; p < panels; ++p) {
            const std::size_t off = static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) q(j) = v_samples(k, off + j) * g[off + j];
            loc = m_left * q + carry * from_left;
            for (int i = 0; i < n; ++i) out[off + i] += u_samples(k, off + i) * loc(i);
            carry = panel_decay * carry + to_right_edge.dot(q);
        }
        carry = 0.0;
        for (int p = panels - 1; p >= 0; --p) {
            const std::size_t off = static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) q(j) = u_samples(k, off + j) * g[off + j];
            loc = m_right * q + carry * from_right;
            for (int i = 0; i < n; ++i) out[off + i] += v_samples(k, off + i) * loc(i);
            carry = panel_decay * carry + to_left_edge.dot(q);
        }
    }
    return out;
}

}  // namespace helmspec
