#pragma once

// Deterministic numerical integration kernels: adaptive Gauss-Kronrod on
// finite intervals/rectangles and fixed Gauss-Laguerre / Gauss-Hermite
// expectation rules with cached nodes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wssus {

struct Tolerance {
    double rel = 1e-9;
    double abs = 0.0;
    int max_subdivisions = 2000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error bound
};

/// Subdivision budget exhausted; carries the best estimate so far.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(double estimate, double error_bound)
        : std::runtime_error("quadrature did not converge within the subdivision budget "
                             "(best estimate " + std::to_string(estimate) +
                             ", error bound " + std::to_string(error_bound) + ")"),
          best_estimate(estimate),
          error_bound(error_bound) {}

    double best_estimate;
    double error_bound;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1] (positive half; the rule is
// symmetric, xgk[7] = 0 is the centre node).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Embedded 7-point Gauss weights (nodes are kGk15Nodes[1], [3], [5], [7]).
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// One GK15 evaluation on [a,b] with the QUADPACK-style error estimate.
template <class F>
Panel gk15(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double centre = 0.5 * (a + b);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(centre - half * kGk15Nodes[i]);
        fv[14 - i] = f(centre + half * kGk15Nodes[i]);
    }
    fv[7] = f(centre);

    double resk = kGk15Weights[7] * fv[7];
    double resg = kG7Weights[3] * fv[7];
    double resabs = kGk15Weights[7] * std::fabs(fv[7]);
    for (int i = 0; i < 7; ++i) {
        const double sum = fv[i] + fv[14 - i];
        resk += kGk15Weights[i] * sum;
        resabs += kGk15Weights[i] * (std::fabs(fv[i]) + std::fabs(fv[14 - i]));
        if (i % 2 == 1) resg += kG7Weights[i / 2] * sum;
    }

    const double mean = resk * 0.5;
    double resasc = kGk15Weights[7] * std::fabs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kGk15Weights[i] * (std::fabs(fv[i] - mean) + std::fabs(fv[14 - i] - mean));

    double err = std::fabs(resk - resg) * half;
    resasc *= half;
    resabs *= half;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);

    return Panel{a, b, resk * half, err};
}

}  // namespace detail

/// Globally adaptive GK15 on [a,b]: bisect the worst panel until the summed
/// error estimate drops below max(tol.abs, tol.rel*|integral|).
template <class F>
QuadResult integrate_1d(F&& f, double a, double b, Tolerance tol = {}) {
    if (!(a < b)) throw std::invalid_argument("integrate_1d: requires a < b");
    if (tol.rel <= 0.0 && tol.abs <= 0.0)
        throw std::invalid_argument("integrate_1d: tolerance must be positive");
    if (tol.max_subdivisions < 1)
        throw std::invalid_argument("integrate_1d: max_subdivisions must be >= 1");

    std::priority_queue<detail::Panel> panels;
    detail::Panel first = detail::gk15(f, a, b);
    double total = first.value;
    double total_err = first.error;
    panels.push(first);

    int used = 1;
    while (total_err > std::max(tol.abs, tol.rel * std::fabs(total))) {
        if (used >= tol.max_subdivisions) throw NonConvergence(total, total_err);
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)  // interval no longer splittable
            throw NonConvergence(total, total_err);
        detail::Panel left = detail::gk15(f, worst.a, mid);
        detail::Panel right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++used;
    }
    return {total, total_err};
}

/// Axis-aligned integration rectangle [x_lo,x_hi] x [y_lo,y_hi].
struct Rect {
    double x_lo, x_hi;
    double y_lo, y_hi;
};

/// Tensorized adaptive 2-D integration: the outer rule integrates over y the
/// inner 1-D integrals over x, each side running at half the requested
/// tolerance.
template <class F>
QuadResult integrate_2d(F&& f, Rect r, Tolerance tol = {}) {
    if (!(r.x_lo < r.x_hi) || !(r.y_lo < r.y_hi))
        throw std::invalid_argument("integrate_2d: degenerate rectangle");

    Tolerance inner{0.5 * tol.rel, 0.25 * tol.abs / (r.y_hi - r.y_lo), tol.max_subdivisions};
    Tolerance outer{0.5 * tol.rel, 0.5 * tol.abs, tol.max_subdivisions};

    double worst_inner = 0.0;
    auto marginal = [&](double y) {
        QuadResult inner_res =
            integrate_1d([&](double x) { return f(x, y); }, r.x_lo, r.x_hi, inner);
        worst_inner = std::max(worst_inner, inner_res.error);
        return inner_res.value;
    };
    QuadResult outer_res = integrate_1d(marginal, r.y_lo, r.y_hi, outer);
    return {outer_res.value, outer_res.error + worst_inner * (r.y_hi - r.y_lo)};
}

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix,
// weights are beta0 * (first eigenvector component)^2.
inline std::unique_ptr<const GaussRule> solve_jacobi(const Eigen::VectorXd& diag,
                                                     const Eigen::VectorXd& subdiag,
                                                     double beta0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss rule: tridiagonal eigensolve failed");
    auto rule = std::make_unique<GaussRule>();
    const int n = static_cast<int>(diag.size());
    rule->nodes.resize(n);
    rule->weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule->nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule->weights[i] = beta0 * v0 * v0;
    }
    return rule;
}

template <class Make>
const GaussRule& cached_rule(std::map<int, std::unique_ptr<const GaussRule>>& cache,
                             std::mutex& mtx, int order, Make&& make) {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make(order)).first;
    return *it->second;
}

}  // namespace detail

/// n-point Gauss-Laguerre rule for integral_0^inf f(x) e^{-x} dx.
inline const GaussRule& gauss_laguerre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_laguerre: order must be >= 1");
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<const GaussRule>> cache;
    return detail::cached_rule(cache, mtx, order, [](int n) {
        Eigen::VectorXd diag(n), sub(std::max(0, n - 1));
        for (int i = 0; i < n; ++i) diag(i) = 2.0 * i + 1.0;
        for (int i = 0; i + 1 < n; ++i) sub(i) = i + 1.0;
        return detail::solve_jacobi(diag, sub, 1.0);
    });
}

/// n-point Gauss-Hermite rule for integral f(t) e^{-t^2} dt (physicists').
inline const GaussRule& gauss_hermite(int order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<const GaussRule>> cache;
    return detail::cached_rule(cache, mtx, order, [](int n) {
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd sub(std::max(0, n - 1));
        for (int i = 0; i + 1 < n; ++i) sub(i) = std::sqrt(0.5 * (i + 1.0));
        return detail::solve_jacobi(diag, sub, std::sqrt(M_PI));
    });
}

/// E[g(X)] for X exponential with the given mean, by Gauss-Laguerre.
template <class G>
double expect_exponential(G&& g, double mean, int order = 64) {
    if (!(mean > 0.0)) throw std::invalid_argument("expect_exponential: mean must be > 0");
    const GaussRule& rule = gauss_laguerre(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * g(mean * rule.nodes[i]);
    return acc;
}

/// E[g(Re z, Im z)] for z ~ CN(0,1) (per-axis variance 1/2), by a tensor
/// Gauss-Hermite rule.
template <class G>
double expect_complex_gaussian_2d(G&& g, int order = 32) {
    const GaussRule& rule = gauss_hermite(order);
    const double inv_pi = 1.0 / M_PI;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            row += rule.weights[j] * g(rule.nodes[i], rule.nodes[j]);
        acc += rule.weights[i] * row;
    }
    return acc * inv_pi;
}

}  // namespace wssus
