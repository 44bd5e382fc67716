#include "innerlab/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace innerlab::inner {

double green(Complex z, Complex a)
{
    if (z == a) throw NumericalError("green: z coincides with the pole");
    return std::log(std::abs(1.0 - z * std::conj(a))) - std::log(std::abs(z - a));
}

double green_truncated(Complex z, Complex a)
{
    if (z == a) return 1.0;
    return std::min(green(z, a), 1.0);
}

double poisson_kernel(Complex z, double angle)
{
    return (1.0 - std::norm(z)) / std::norm(std::polar(1.0, angle) - z);
}

Complex mobius(Complex a, Complex z)
{
    return (z - a) / (1.0 - std::conj(a) * z);
}

double log_abs_inner(const meas::DiskMeasure& w, Complex z)
{
    double s = 0.0;
    for (const auto& a : w.interior()) {
        if (a.location == z) throw NumericalError("log_abs_inner: evaluation at an interior atom");
        s -= a.mass * green(z, a.location);
    }
    for (const auto& b : w.boundary()) s -= b.mass * poisson_kernel(z, b.angle);
    return s;
}

FiniteBlaschke::FiniteBlaschke(std::vector<Complex> zeros, Complex rotation) : zeros_(std::move(zeros))
{
    for (const auto& a : zeros_)
        if (!(std::abs(a) < 1.0)) throw ValidationError("FiniteBlaschke: zeros must lie in the open disk");
    if (!(std::abs(std::abs(rotation) - 1.0) < 1e-12))
        throw ValidationError("FiniteBlaschke: rotation must be unimodular");
    rotation_ = rotation / std::abs(rotation);
}

FiniteBlaschke FiniteBlaschke::with_multiplicities(const std::vector<Zero>& zeros, Complex rotation)
{
    std::vector<Complex> flat;
    for (const auto& z : zeros) {
        if (z.multiplicity < 1) throw ValidationError("FiniteBlaschke: multiplicities must be at least 1");
        flat.insert(flat.end(), static_cast<std::size_t>(z.multiplicity), z.location);
    }
    return FiniteBlaschke(std::move(flat), rotation);
}

std::vector<Zero> FiniteBlaschke::grouped_zeros() const
{
    std::vector<Zero> out;
    for (const auto& a : zeros_) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Zero& z) { return z.location == a; });
        if (it != out.end()) ++it->multiplicity;
        else out.push_back({a, 1});
    }
    return out;
}

Complex FiniteBlaschke::operator()(Complex z) const
{
    Complex v = rotation_;
    for (const auto& a : zeros_) v *= mobius(a, z);
    return v;
}

Complex FiniteBlaschke::derivative(Complex z) const
{
    // Product rule with prefix and suffix products, valid at the zeros as well.
    const std::size_t n = zeros_.size();
    if (n == 0) return 0.0;
    std::vector<Complex> t(n), suffix(n + 1, 1.0);
    for (std::size_t k = 0; k < n; ++k) t[k] = mobius(zeros_[k], z);
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * t[k];
    Complex prefix = 1.0, sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        Complex a = zeros_[k];
        Complex den = 1.0 - std::conj(a) * z;
        Complex dk = (1.0 - std::norm(a)) / (den * den);
        sum += prefix * dk * suffix[k + 1];
        prefix *= t[k];
    }
    return rotation_ * sum;
}

double FiniteBlaschke::log_abs(Complex z) const
{
    double s = 0.0;
    for (const auto& a : zeros_) s += std::log(std::abs(mobius(a, z)));
    return s;
}

poly::Poly FiniteBlaschke::numerator() const
{
    poly::Poly p = poly::from_roots(zeros_);
    for (auto& c : p) c *= rotation_;
    return p;
}

poly::Poly FiniteBlaschke::denominator() const
{
    poly::Poly q{1.0};
    for (const auto& a : zeros_)
        if (a != Complex(0.0)) q = poly::multiply(q, poly::Poly{1.0, -std::conj(a)});
    return q;
}

std::vector<Complex> critical_points(const FiniteBlaschke& f, const poly::RootOptions& opt)
{
    const int n = f.degree();
    if (n < 1) throw ValidationError("critical_points: degree must be at least 1");
    if (n == 1) return {};
    poly::Poly P = f.numerator();
    poly::Poly Q = f.denominator();
    const std::size_t q = Q.size() - 1;
    // The z^{n+q-1} terms cancel exactly when every zero is nonzero.
    std::size_t degree = static_cast<std::size_t>(n) + q - (static_cast<std::size_t>(n) > q ? 1 : 2);
    poly::Poly N = poly::truncate(
        poly::subtract(poly::multiply(poly::derivative(P), Q), poly::multiply(P, poly::derivative(Q))), degree);
    auto all = poly::roots(N, opt);
    std::vector<Complex> inside;
    for (const auto& r : all)
        if (std::abs(r) < 1.0) inside.push_back(r);
    if (static_cast<int>(inside.size()) != n - 1)
        throw NumericalError("critical_points: found " + std::to_string(inside.size()) + " critical points, expected " +
                             std::to_string(n - 1));
    std::sort(inside.begin(), inside.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return inside;
}

FiniteBlaschke frostman_shift(const FiniteBlaschke& f, Complex x, const poly::RootOptions& opt)
{
    if (!(std::abs(x) < 1.0)) throw ValidationError("frostman_shift: x must lie in the open disk");
    if (x == Complex(0.0)) return f;
    const int n = f.degree();
    if (n == 0) throw ValidationError("frostman_shift: constant function");
    poly::Poly P = f.numerator();
    poly::Poly Q = f.denominator();
    for (auto& c : Q) c *= x;
    auto pre = poly::roots(poly::subtract(P, Q), opt);
    if (static_cast<int>(pre.size()) != n) throw NumericalError("frostman_shift: preimage count mismatch");
    for (const auto& y : pre) {
        if (!(std::abs(y) < 1.0)) throw NumericalError("frostman_shift: preimage outside the disk");
        if (std::abs(f(y) - x) > 1e-9) throw NumericalError("frostman_shift: preimage residual above tolerance");
    }
    FiniteBlaschke shifted(pre, 1.0);
    Complex target = mobius(x, f(1.0));
    Complex rot = target / shifted(1.0);
    return FiniteBlaschke(std::move(pre), rot / std::abs(rot));
}

double gamma(const std::vector<Complex>& critical, Complex z)
{
    double s = 0.0;
    for (const auto& c : critical) {
        if (c == z) throw NumericalError("gamma: evaluation at a critical point");
        s += green(z, c);
    }
    return s;
}

double gamma(const FiniteBlaschke& f, Complex z)
{
    return gamma(critical_points(f), z);
}

double jensen_entropy(const FiniteBlaschke& f)
{
    int at_origin = 0;
    for (const auto& a : f.zeros())
        if (a == Complex(0.0)) ++at_origin;
    if (at_origin != 1) throw ValidationError("jensen_entropy: requires F(0) = 0 with F'(0) != 0");
    double s = 0.0;
    if (f.degree() > 1)
        for (const auto& c : critical_points(f)) s += std::log(1.0 / std::abs(c));
    for (const auto& a : f.zeros())
        if (a != Complex(0.0)) s -= std::log(1.0 / std::abs(a));
    return s;
}

double circle_entropy_quadrature(const FiniteBlaschke& f, double tol, int max_points)
{
    if (f.degree() < 1) throw ValidationError("circle_entropy_quadrature: constant function");
    auto sample = [&](double t) { return std::log(std::abs(f.derivative(std::polar(1.0, t)))); };
    int n = 64;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += sample(kTwoPi * k / n);
    double prev = sum / n;
    while (n < max_points) {
        for (int k = 0; k < n; ++k) sum += sample(kTwoPi * (k + 0.5) / n);
        n *= 2;
        double cur = sum / n;
        if (!std::isfinite(cur)) throw NumericalError("circle_entropy_quadrature: F' vanishes on the circle");
        if (std::abs(cur - prev) <= tol) return cur;
        prev = cur;
    }
    throw NumericalError("circle_entropy_quadrature: resolution cap exceeded");
}

InnerFunction::InnerFunction(FiniteBlaschke blaschke, std::vector<meas::BoundaryAtom> singular)
    : blaschke_(std::move(blaschke)), singular_(std::move(singular))
{
    for (auto& b : singular_) {
        if (!(b.mass > 0.0) || !std::isfinite(b.mass)) throw ValidationError("InnerFunction: singular masses must be positive");
        b.angle = wrap_angle(b.angle);
    }
}

InnerFunction InnerFunction::from_measure(const meas::DiskMeasure& w, Complex rotation)
{
    std::vector<Zero> zeros;
    for (const auto& a : w.interior()) {
        double k = std::round(a.mass);
        if (std::abs(a.mass - k) > 1e-12 || k < 1.0)
            throw ValidationError("InnerFunction: interior masses must be integer multiplicities");
        zeros.push_back({a.location, static_cast<int>(k)});
    }
    return InnerFunction(FiniteBlaschke::with_multiplicities(zeros, rotation), w.boundary());
}

meas::DiskMeasure InnerFunction::zero_measure() const
{
    std::vector<meas::InteriorAtom> in;
    for (const auto& z : blaschke_.grouped_zeros()) in.push_back({z.location, static_cast<double>(z.multiplicity)});
    return meas::DiskMeasure(std::move(in), singular_);
}

Complex InnerFunction::operator()(Complex z) const
{
    Complex e = 0.0;
    for (const auto& b : singular_) {
        Complex zeta = std::polar(1.0, b.angle);
        if (z == zeta) return 0.0;
        e -= b.mass * (zeta + z) / (zeta - z);
    }
    return blaschke_(z) * std::exp(e);
}

double InnerFunction::log_abs(Complex z) const
{
    double s = blaschke_.log_abs(z);
    for (const auto& b : singular_) s -= b.mass * poisson_kernel(z, b.angle);
    return s;
}

NevanlinnaReport nevanlinna_gap(const InnerFunction& f, int ladder_levels)
{
    if (ladder_levels < 4) throw ValidationError("nevanlinna_gap: need at least 4 ladder levels");
    NevanlinnaReport rep;
    for (int k = 1; k <= ladder_levels; ++k) {
        double h = std::ldexp(1.0, -k);
        double r = 1.0 - h;
        int n = 256;
        while (n < 64.0 / h) n *= 2;
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += f.log_abs(std::polar(r, kTwoPi * (q + 0.5) / n));
        rep.radii.push_back(r);
        rep.averages.push_back(s / n);
    }
    // Two Richardson passes for an expansion in powers of (1 - r) halving per level.
    const auto& a = rep.averages;
    std::size_t m = a.size();
    std::vector<double> r1(m), r2(m);
    for (std::size_t k = 1; k < m; ++k) r1[k] = 2.0 * a[k] - a[k - 1];
    for (std::size_t k = 2; k < m; ++k) r2[k] = (4.0 * r1[k] - r1[k - 1]) / 3.0;
    double limit = r2[m - 1];
    double change = std::abs(r2[m - 1] - r2[m - 2]);
    if (!(change <= 1e-6 * std::max(1.0, std::abs(limit))))
        throw NumericalError("nevanlinna_gap: extrapolation did not settle");
    rep.gap = -limit;
    return rep;
}

}  // namespace innerlab::inner
