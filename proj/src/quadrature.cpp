#include "spde/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

#include "spde/errors.hpp"

namespace spde {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix, weights
// come from the first component of each eigenvector.
QuadratureRule golub_welsch(const Eigen::VectorXd& off_diagonal, int order, double mass) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 0; k + 1 < order; ++k) {
        jacobi(k, k + 1) = off_diagonal(k);
        jacobi(k + 1, k) = off_diagonal(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mass * v0 * v0;
    }
    // Symmetrize: the exact rules are symmetric about 0.
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

template <typename Build>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& mutex, int order,
                             Build build) {
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build(order)).first;
    return it->second;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    return cached(cache, mutex, order, [](int n) {
        Eigen::VectorXd off(std::max(n - 1, 0));
        for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
        return golub_welsch(off, n, 2.0);
    });
}

const QuadratureRule& gauss_hermite(int order) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    return cached(cache, mutex, order, [](int n) {
        Eigen::VectorXd off(std::max(n - 1, 0));
        for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
        return golub_welsch(off, n, 1.0);
    });
}

double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                int order, int panels) {
    const QuadratureRule& rule = gauss_legendre(order);
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
        }
        total += 0.5 * width * sum;
    }
    return total;
}

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    const SimpsonOptions& options;
    long evaluations = 0;

    double eval(double x) {
        if (++evaluations > options.max_evaluations) {
            throw QuadratureFailure("adaptive Simpson exceeded its evaluation budget");
        }
        return f(x);
    }

    double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                  int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol || depth >= options.max_depth) {
            if (depth >= options.max_depth && std::abs(delta) > 15.0 * tol && tol > 0.0 &&
                std::abs(delta) > 1e-6 * std::abs(left + right)) {
                throw QuadratureFailure("adaptive Simpson hit its depth limit without converging");
            }
            return left + right + delta / 15.0;
        }
        return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& options) {
    if (a == b) return 0.0;
    SimpsonState state{f, options};
    const double fa = state.eval(a);
    const double fb = state.eval(b);
    const double m = 0.5 * (a + b);
    const double fm = state.eval(m);
    // Split once up front so that a symmetric integrand cannot fool the first test.
    const double flm = state.eval(0.5 * (a + m));
    const double frm = state.eval(0.5 * (m + b));
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    return state.refine(a, m, fa, flm, fm, left, 0.5 * options.tolerance, 1) +
           state.refine(m, b, fm, frm, fb, right, 0.5 * options.tolerance, 1);
}

}  // namespace spde
