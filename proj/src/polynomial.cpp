#include "innerlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace innerlab::poly {

Complex eval(const Poly& p, Complex z)
{
    Complex s = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * z + *it;
    return s;
}

Poly multiply(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly derivative(const Poly& p)
{
    if (p.size() <= 1) return {0.0};
    Poly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<double>(i) * p[i];
    return d;
}

Poly subtract(const Poly& a, const Poly& b)
{
    Poly c(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    return c;
}

Poly truncate(Poly p, std::size_t degree)
{
    if (p.size() > degree + 1) p.resize(degree + 1);
    return p;
}

Poly from_roots(const std::vector<Complex>& roots)
{
    Poly p{1.0};
    for (auto r : roots) p = multiply(p, Poly{-r, 1.0});
    return p;
}

namespace {

// Newton correction p(z)/p'(z), evaluated through the reversed polynomial when |z| > 1.
Complex newton_ratio(const Poly& p, Complex z)
{
    const std::size_t m = p.size() - 1;
    if (std::abs(z) <= 1.0) {
        Complex v = 0.0, d = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) {
            d = d * z + v;
            v = v * z + *it;
        }
        return v / d;
    }
    Complex y = 1.0 / z;
    Complex r = 0.0, dr = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
        dr = dr * y + r;
        r = r * y + p[j];
    }
    return z * r / (static_cast<double>(m) * r - y * dr);
}

double relative_residual(const Poly& p, Complex z)
{
    double scale = 0.0, az = std::abs(z), pw = 1.0;
    if (az <= 1.0) {
        for (const auto& c : p) {
            scale += std::abs(c) * pw;
            pw *= az;
        }
        return std::abs(eval(p, z)) / scale;
    }
    Complex y = 1.0 / z;
    double ay = 1.0 / az;
    Complex r = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) r = r * y + p[j];
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        scale += std::abs(*it) * pw;
        pw *= ay;
    }
    return std::abs(r) / scale;
}

bool aberth(const Poly& p, std::vector<Complex>& z, int max_iter)
{
    const std::size_t m = z.size();
    int polish = -1;
    for (int it = 0; it < max_iter; ++it) {
        double worst = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            Complex ratio = newton_ratio(p, z[k]);
            if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) return false;
            Complex s = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            Complex w = ratio / (1.0 - ratio * s);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
            z[k] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1.0, std::abs(z[k])));
        }
        // Steps stall at rounding level; a few extra sweeps after that settle every root.
        if (polish > 0 && --polish == 0) return true;
        if (polish < 0 && worst < 1e-12) polish = 3;
        if (worst == 0.0) return true;
    }
    return false;
}

}  // namespace

std::vector<Complex> roots(const Poly& input, const RootOptions& opt)
{
    Poly p = input;
    while (!p.empty() && p.back() == Complex(0.0)) p.pop_back();
    if (p.empty()) throw NumericalError("roots: zero polynomial");
    std::vector<Complex> out;
    std::size_t lead_zeros = 0;
    while (lead_zeros < p.size() && p[lead_zeros] == Complex(0.0)) ++lead_zeros;
    out.assign(lead_zeros, 0.0);
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lead_zeros));
    const std::size_t m = p.size() - 1;
    if (m == 0) return out;
    if (m == 1) {
        out.push_back(-p[0] / p[1]);
        return out;
    }

    double radius = std::pow(std::abs(p[0]) / std::abs(p[m]), 1.0 / static_cast<double>(m));
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    std::vector<Complex> z(m);
    bool ok = false;
    for (int attempt = 0; attempt <= opt.restarts && !ok; ++attempt) {
        for (std::size_t k = 0; k < m; ++k) {
            double ang = kTwoPi * (static_cast<double>(k) + 0.25) / static_cast<double>(m) + 0.4;
            double rad = radius;
            if (attempt > 0) {
                ang += jitter(rng);
                rad *= std::exp(jitter(rng));
            }
            z[k] = std::polar(rad, ang);
        }
        ok = aberth(p, z, opt.max_iterations);
        if (ok)
            for (auto& r : z)
                if (relative_residual(p, r) > opt.residual_tol) ok = false;
    }
    if (!ok) throw NumericalError("roots: simultaneous iteration did not converge");

    // Group near-coincident roots and replace each group by its mean.
    std::vector<int> group(m, -1);
    int groups = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (group[i] >= 0) continue;
        group[i] = groups;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < m; ++b)
                if (group[b] < 0 && std::abs(z[a] - z[b]) <= opt.cluster_radius * std::max(1.0, std::abs(z[a]))) {
                    group[b] = groups;
                    stack.push_back(b);
                }
        }
        ++groups;
    }
    for (int g = 0; g < groups; ++g) {
        Complex mean = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (group[i] == g) {
                mean += z[i];
                ++count;
            }
        mean /= static_cast<double>(count);
        if (count == 1) {
            for (int it = 0; it < 3; ++it) {
                Complex w = newton_ratio(p, mean);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) break;
                mean -= w;
            }
        }
        out.insert(out.end(), static_cast<std::size_t>(count), mean);
    }
    return out;
}

}  // namespace innerlab::poly
