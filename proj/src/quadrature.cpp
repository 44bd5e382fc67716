#include "innerlab/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <utility>

#include "innerlab/common.hpp"

namespace innerlab::quad {

namespace {

// Legendre P_n(x) and its derivative.
std::pair<double, double> legendre(int n, double x)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

Rule gauss_legendre(int n)
{
    if (n < 1) throw ValidationError("gauss_legendre: n must be positive");
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double dp = legendre(n, x).second;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

Rule gauss_jacobi(int n, double a, double b)
{
    if (n < 1) throw ValidationError("gauss_jacobi: n must be positive");
    if (a <= -1.0 || b <= -1.0) throw ValidationError("gauss_jacobi: exponents must exceed -1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        double s = 2.0 * k + a + b;
        double diag = (s == 0.0 || (s + 2.0) == 0.0) ? (b - a) / (a + b + 2.0)
                                                      : (b * b - a * a) / (s * (s + 2.0));
        J(k, k) = diag;
        if (k + 1 < n) {
            double k1 = k + 1.0;
            double s1 = 2.0 * k1 + a + b;
            double off = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
            J(k, k + 1) = J(k + 1, k) = std::sqrt(off);
        }
    }
    if (n == 1) J(0, 0) = (b - a) / (a + b + 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                          std::lgamma(a + b + 2.0));
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = es.eigenvalues()(k);
        double v = es.eigenvectors()(0, k);
        r.weights[k] = mu0 * v * v;
    }
    return r;
}

Rule composite(double lo, double hi, int panels, int order)
{
    if (panels < 1) throw ValidationError("composite: panels must be positive");
    Rule base = gauss_legendre(order);
    Rule r;
    double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = lo + p * h;
        for (int i = 0; i < order; ++i) {
            r.nodes.push_back(a + 0.5 * h * (base.nodes[i] + 1.0));
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

Rule graded_to_zero(double hi, int levels, int order, double ratio)
{
    if (levels < 1) throw ValidationError("graded_to_zero: levels must be positive");
    Rule base = gauss_legendre(order);
    Rule r;
    double b = hi;
    for (int l = 0; l < levels; ++l) {
        double a = (l + 1 == levels) ? 0.0 : b * ratio;
        for (int i = 0; i < order; ++i) {
            r.nodes.push_back(a + 0.5 * (b - a) * (base.nodes[i] + 1.0));
            r.weights.push_back(0.5 * (b - a) * base.weights[i]);
        }
        b = a;
    }
    return r;
}

}  // namespace innerlab::quad
