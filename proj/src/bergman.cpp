#include "innerlab/bergman.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "innerlab/outer.hpp"
#include "innerlab/parallel.hpp"
#include "innerlab/quadrature.hpp"

namespace innerlab::bergman {

namespace {

constexpr double kZeroExclusion = 1e-9;

// Gauss-Legendre panels on [a, b], split into pieces no wider than max_width.
void add_panel(std::vector<double>& x, std::vector<double>& w, double a, double b, const quad::Rule& base,
               double max_width)
{
    int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    double h = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
        double lo = a + p * h;
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            x.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
            w.push_back(0.5 * h * base.weights[i]);
        }
    }
}

void validate_quad(const QuadratureSpec& q)
{
    if (q.radial_levels < 2 || q.radial_levels > 50) throw ValidationError("QuadratureSpec: radial_levels must be in [2, 50]");
    if (q.order < 4 || q.order > 64) throw ValidationError("QuadratureSpec: order must be in [4, 64]");
    if (q.n_theta < 16) throw ValidationError("QuadratureSpec: n_theta must be at least 16");
    if (q.angular_levels < 1 || q.angular_levels > 30) throw ValidationError("QuadratureSpec: angular_levels must be in [1, 30]");
}

QuadratureSpec refined(const QuadratureSpec& q)
{
    QuadratureSpec r = q;
    r.radial_levels = std::min(50, 2 * q.radial_levels);
    r.angular_levels = std::min(30, 2 * q.angular_levels);
    r.n_theta = 2 * q.n_theta;
    return r;
}

// Σ_i wr_i Σ_j wt_j g(r_i e^{iθ_j}), with rows evaluated in parallel and summed in order.
double integrate(const DiskRule& rule, const std::function<double(Complex)>& g)
{
    const auto& r = rule.radii();
    const auto& t = rule.angles();
    std::vector<Complex> dirs(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) dirs[j] = std::polar(1.0, t[j]);
    std::vector<double> rows(r.size(), 0.0);
    parallel_for(r.size(), [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) s += rule.angular_weights()[j] * g(r[i] * dirs[j]);
        rows[i] = s;
    });
    double total = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) total += rule.radial_weights()[i] * rows[i];
    return total;
}

DiskRule make_rule(double alpha, const QuadratureSpec& q, int frequency)
{
    QuadratureSpec s = q;
    s.n_theta = std::max(q.n_theta, 4 * (frequency + 1));
    return DiskRule(alpha, s);
}

}  // namespace

void BergmanSpaceSpec::validate() const
{
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("BergmanSpaceSpec: p must lie in [1, inf)");
    if (!(alpha > -1.0) || !std::isfinite(alpha)) throw ValidationError("BergmanSpaceSpec: alpha must exceed -1");
    validate_quad(quad);
}

DiskRule::DiskRule(double alpha, const QuadratureSpec& q)
{
    validate_quad(q);
    if (!(alpha > -1.0)) throw ValidationError("DiskRule: alpha must exceed -1");
    const quad::Rule base = quad::gauss_legendre(q.order);
    // Frequency the panels must resolve: n_theta / 4 as a count of oscillations per turn.
    const double freq = q.n_theta / 4.0;
    const double max_dtheta = 0.5 * q.order / freq;

    std::vector<double> x, w;
    add_panel(x, w, 0.0, 0.5, base, 0.5);
    for (int j = 1; j < q.radial_levels; ++j) {
        double a = 1.0 - std::ldexp(1.0, -j), b = 1.0 - std::ldexp(1.0, -j - 1);
        // r^k with k <= 2 freq varies by e^{k log(b/a)} across the panel.
        double pieces = std::max(1.0, std::ceil(4.0 * freq * std::log(b / a) / q.order));
        add_panel(x, w, a, b, base, (b - a) / pieces);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        r_.push_back(x[i]);
        wr_.push_back(w[i] * x[i] * std::pow(1.0 - x[i], alpha));
    }
    const double h = std::ldexp(1.0, -q.radial_levels);
    const quad::Rule jac = quad::gauss_jacobi(q.order, alpha, 0.0);
    const double scale = std::pow(0.5 * h, alpha + 1.0);
    for (std::size_t i = 0; i < jac.nodes.size(); ++i) {
        double rr = 1.0 - 0.5 * h * (1.0 - jac.nodes[i]);
        r_.push_back(rr);
        wr_.push_back(jac.weights[i] * scale * rr);
    }

    if (q.focus.empty()) {
        for (int j = 0; j < q.n_theta; ++j) {
            t_.push_back(kTwoPi * j / q.n_theta);
            wt_.push_back(kTwoPi / q.n_theta);
        }
        return;
    }
    std::vector<double> f;
    for (double a : q.focus) f.push_back(wrap_angle(a));
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end(), [](double a, double b) { return b - a < 1e-14; }), f.end());
    for (std::size_t n = 0; n < f.size(); ++n) {
        double a = f[n];
        double b = n + 1 < f.size() ? f[n + 1] : f[0] + kTwoPi;
        double half = 0.5 * (b - a);
        std::vector<double> cuts{0.0};
        for (int l = q.angular_levels; l >= 0; --l) cuts.push_back(half * std::pow(0.25, l));
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            add_panel(t_, wt_, a + cuts[c], a + cuts[c + 1], base, max_dtheta);
            add_panel(t_, wt_, b - cuts[c + 1], b - cuts[c], base, max_dtheta);
        }
    }
}

NormReport bergman_norm(const Evaluable& f, const BergmanSpaceSpec& spec)
{
    spec.validate();
    auto run = [&](const QuadratureSpec& q) {
        DiskRule rule(spec.alpha, q);
        double s = integrate(rule, [&](Complex z) { return std::pow(std::abs(f(z)), spec.p); });
        return std::pow(s, 1.0 / spec.p);
    };
    NormReport out;
    out.value = run(spec.quad);
    out.refined = run(refined(spec.quad));
    out.divergent = !std::isfinite(out.value) || !std::isfinite(out.refined) ||
                    std::abs(out.refined - out.value) > 1e-4 * std::abs(out.refined);
    return out;
}

LittlewoodPaley h2_norm_and_lp(const inner::FiniteBlaschke& f)
{
    if (std::abs(f(0.0)) > 1e-12) throw ValidationError("h2_norm_and_lp: F(0) must vanish");
    LittlewoodPaley out;
    const int nc = 4096;
    double s = 0.0;
    for (int j = 0; j < nc; ++j) s += std::norm(f(std::polar(1.0, kTwoPi * j / nc)));
    out.h2_squared = s / nc;

    quad::Rule inner_part = quad::graded_to_zero(0.5, 24, 16);
    quad::Rule outer_part = quad::composite(0.5, 1.0, 32, 16);
    std::vector<double> r = inner_part.nodes, w = inner_part.weights;
    r.insert(r.end(), outer_part.nodes.begin(), outer_part.nodes.end());
    w.insert(w.end(), outer_part.weights.begin(), outer_part.weights.end());
    const int nt = 1024;
    std::vector<double> rows(r.size(), 0.0);
    parallel_for(r.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (int j = 0; j < nt; ++j) acc += std::norm(f.derivative(std::polar(r[i], kTwoPi * j / nt)));
        rows[i] = acc * kTwoPi / nt;
    });
    double lp = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) lp += w[i] * r[i] * (-2.0 * std::log(r[i])) * rows[i];
    out.lp = lp / kPi;
    return out;
}

DistanceReport distance_to_one(const SubspaceProbe& probe, const BergmanSpaceSpec& spec)
{
    spec.validate();
    if (spec.p != 2.0) throw ValidationError("distance_to_one: only p = 2 is supported");
    if (probe.m < 0 || probe.m > 60) throw ValidationError("distance_to_one: m must lie in [0, 60]");
    const int m = probe.m;
    const auto& I = probe.generator;

    QuadratureSpec q = spec.quad;
    for (const auto& a : I.singular()) q.focus.push_back(a.angle);
    DiskRule rule = make_rule(spec.alpha, q, 2 * m + 2);
    const auto& r = rule.radii();
    const auto& t = rule.angles();
    const auto& wt = rule.angular_weights();
    const std::size_t L = static_cast<std::size_t>(2 * m + 1);

    // Per ring: c(ℓ) = ∫ e^{iℓθ} |I|^2 dθ for ℓ = -m..m and d(k) = ∫ e^{-ikθ} conj(I) dθ for k = 0..m.
    std::vector<std::vector<Complex>> c(r.size()), d(r.size());
    parallel_for(r.size(), [&](std::size_t i) {
        std::vector<Complex> ci(L, 0.0), di(static_cast<std::size_t>(m + 1), 0.0);
        for (std::size_t j = 0; j < t.size(); ++j) {
            Complex z = std::polar(r[i], t[j]);
            Complex v = I(z);
            double a2 = std::norm(v);
            Complex e = std::polar(1.0, t[j]);
            Complex pw = 1.0;
            for (int l = 0; l <= m; ++l) {
                Complex term = wt[j] * pw;
                ci[static_cast<std::size_t>(m + l)] += term * a2;
                if (l > 0) ci[static_cast<std::size_t>(m - l)] += std::conj(term) * a2;
                di[static_cast<std::size_t>(l)] += std::conj(term * v);
                pw *= e;
            }
        }
        c[i] = std::move(ci);
        d[i] = std::move(di);
    });

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(m + 1);
    double one = 0.0;
    double wsum = 0.0;
    for (double x : wt) wsum += x;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double wr = rule.radial_weights()[i];
        one += wr * wsum;
        std::vector<double> pw(static_cast<std::size_t>(2 * m + 1), 1.0);
        for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * r[i];
        for (int j = 0; j <= m; ++j) {
            b(j) += wr * pw[static_cast<std::size_t>(j)] * d[i][static_cast<std::size_t>(j)];
            for (int k = 0; k <= m; ++k)
                // A(j, k) = <z^k I, z^j I> = ∫ r^{j+k} e^{i(k-j)θ} |I|^2.
                A(j, k) += wr * pw[static_cast<std::size_t>(j + k)] * c[i][static_cast<std::size_t>(m + k - j)];
        }
    }
    A = 0.5 * (A + A.adjoint()).eval();

    DistanceReport out;
    out.norm_one = std::sqrt(one);
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    auto degenerate = [&]() {
        if (llt.info() != Eigen::Success) return true;
        const auto& Lm = llt.matrixLLT();
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int k = 0; k <= m; ++k) {
            double v = std::norm(Lm(k, k));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return !(lo > 1e-15 * hi);
    };
    if (degenerate()) {
        out.regularized = true;
        A.diagonal().array() += 1e-14 * A.diagonal().real().sum() / (m + 1);
        llt.compute(A);
        if (llt.info() != Eigen::Success) throw NumericalError("distance_to_one: Gram matrix is not positive definite");
    }
    Eigen::VectorXcd y = llt.matrixL().solve(b);
    double acc = 0.0;
    for (int k = 0; k <= m; ++k) {
        acc += std::norm(y(k));
        out.distances.push_back(std::sqrt(std::max(0.0, one - acc)));
    }
    return out;
}

DivisionReport divide(const Evaluable& f, const inner::InnerFunction& I, const bc::BCSet& e, double delta,
                      const BergmanSpaceSpec& spec)
{
    spec.validate();
    if (!(delta > 0.0)) throw ValidationError("divide: delta must be positive");
    outer::OuterFunction phi(e);
    DiskRule rule(spec.alpha, spec.quad);
    const auto& zeros = I.blaschke().zeros();
    auto near_zero = [&](Complex z) {
        for (Complex a : zeros)
            if (std::abs(z - a) < kZeroExclusion) return true;
        return false;
    };
    DivisionReport out;
    for (double rr : rule.radii())
        for (double th : rule.angles())
            if (near_zero(std::polar(rr, th))) ++out.skipped;
    double sf = integrate(rule, [&](Complex z) { return near_zero(z) ? 0.0 : std::pow(std::abs(f(z)), spec.p); });
    double sd = integrate(rule, [&](Complex z) {
        if (near_zero(z)) return 0.0;
        double lg = delta * phi.log_abs(z) + std::log(std::abs(f(z))) - I.log_abs(z);
        return std::exp(spec.p * lg);
    });
    out.norm_f = std::pow(sf, 1.0 / spec.p);
    out.norm_divided = std::pow(sd, 1.0 / spec.p);
    out.ratio = out.norm_divided / out.norm_f;
    return out;
}

double monomial_norm(int n, double p, double alpha)
{
    if (n < 0) throw ValidationError("monomial_norm: n must be nonnegative");
    double a = n * p + 2.0, b = alpha + 1.0;
    double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return std::exp((std::log(kTwoPi) + lb) / p);
}

Beta admissible_beta(double p, double alpha)
{
    if (!(p >= 1.0) || !(alpha > -1.0)) throw ValidationError("admissible_beta: need p >= 1 and alpha > -1");
    Beta out;
    out.beta = (alpha + 1.0) / p;
    // n^β ‖z^n‖ → (2π Γ(α+1))^{1/p} p^{-β}.
    double limit = std::exp((std::log(kTwoPi) + std::lgamma(alpha + 1.0)) / p) * std::pow(p, -out.beta);
    out.constant = limit;
    for (int n = 1; n <= 100000; ++n) out.constant = std::max(out.constant, monomial_norm(n, p, alpha) * std::pow(n, out.beta));
    return out;
}

double d_recursion(const std::vector<double>& ns, double beta)
{
    if (!(beta > 0.0)) throw ValidationError("d_recursion: beta must be positive");
    double D = 0.0;
    for (auto it = ns.rbegin(); it != ns.rend(); ++it) {
        if (!(*it > 0.0)) throw ValidationError("d_recursion: entries must be positive");
        D = std::pow(*it, beta / 3.0) * D + std::pow(*it, -2.0 * beta / 3.0);
        if (!std::isfinite(D)) throw NumericalError("d_recursion: overflow");
    }
    return D;
}

}  // namespace innerlab::bergman
