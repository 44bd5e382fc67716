#include "innerlab/bc_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "innerlab/quadrature.hpp"

namespace innerlab::bc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval on the real line, used after unwrapping arcs at a cut point.
struct Span {
    double lo;
    double hi;
};

// Offset of `angle` counterclockwise from `start`, in [0, 2π).
double ccw_offset(double angle, double start)
{
    return wrap_angle(angle - start);
}

// Unwraps arcs relative to the cut point p; arcs straddling p are split in two.
std::vector<Span> unwrap(const std::vector<CircleArc>& gaps, double p)
{
    std::vector<Span> out;
    for (const auto& g : gaps) {
        double lo = p + ccw_offset(g.start, p);
        double hi = lo + g.radians();
        if (hi > p + kTwoPi) {
            out.push_back({lo, p + kTwoPi});
            out.push_back({p, hi - kTwoPi});
        } else {
            out.push_back({lo, hi});
        }
    }
    std::sort(out.begin(), out.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
    return out;
}

std::vector<CircleArc> to_arcs(const std::vector<Span>& spans)
{
    std::vector<CircleArc> out;
    for (const auto& s : spans) {
        double len = (s.hi - s.lo) / kTwoPi;
        if (len <= 1e-15) continue;
        out.push_back({wrap_angle(s.lo), std::min(len, 1.0)});
    }
    return out;
}

}  // namespace

BCSet BCSet::from_gaps(std::vector<CircleArc> gaps)
{
    double total = 0.0;
    for (auto& g : gaps) {
        if (!(g.length > 0.0) || g.length > 1.0)
            throw ValidationError("BCSet: gap length must lie in (0, 1], got " + std::to_string(g.length));
        if (!std::isfinite(g.start)) throw ValidationError("BCSet: gap start must be finite");
        g.start = wrap_angle(g.start);
        total += g.length;
    }
    if (total > 1.0 + 1e-12) throw ValidationError("BCSet: gap lengths sum to more than the circle");
    std::sort(gaps.begin(), gaps.end(), [](const CircleArc& a, const CircleArc& b) { return a.start < b.start; });
    const double tol = 1e-12;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const auto& g = gaps[i];
        double next = (i + 1 < gaps.size()) ? gaps[i + 1].start : gaps.front().start + kTwoPi;
        if (g.end() > next + tol) throw ValidationError("BCSet: gaps overlap");
    }
    BCSet e;
    e.gaps_ = std::move(gaps);
    return e;
}

BCSet BCSet::from_points(std::span<const double> angles)
{
    if (angles.empty()) return empty_set();
    std::vector<double> a;
    a.reserve(angles.size());
    for (double x : angles) {
        if (!std::isfinite(x)) throw ValidationError("BCSet: point angle must be finite");
        a.push_back(wrap_angle(x));
    }
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::vector<CircleArc> gaps;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double next = (i + 1 < a.size()) ? a[i + 1] : a.front() + kTwoPi;
        double len = (next - a[i]) / kTwoPi;
        if (len > 0.0) gaps.push_back({a[i], std::min(len, 1.0)});
    }
    BCSet e;
    e.gaps_ = std::move(gaps);
    return e;
}

BCSet BCSet::whole_circle()
{
    return BCSet{};
}

BCSet BCSet::empty_set()
{
    BCSet e;
    e.empty_ = true;
    return e;
}

bool BCSet::contains(double angle) const
{
    return angular_distance(angle) == 0.0;
}

double BCSet::angular_distance(double angle) const
{
    if (empty_) return kInf;
    for (const auto& g : gaps_) {
        double t = ccw_offset(angle, g.start);
        double len = g.radians();
        if (t > 0.0 && t < len) return std::min(t, len - t);
    }
    return 0.0;
}

double BCSet::measure() const
{
    if (empty_) return 0.0;
    double total = 0.0;
    for (const auto& g : gaps_) total += g.length;
    return std::max(0.0, 1.0 - total);
}

BCSet BCSet::rotated(double phi) const
{
    BCSet e = *this;
    for (auto& g : e.gaps_) g.start = wrap_angle(g.start + phi);
    std::sort(e.gaps_.begin(), e.gaps_.end(), [](const CircleArc& a, const CircleArc& b) { return a.start < b.start; });
    return e;
}

double entropy(const BCSet& e)
{
    double s = 0.0;
    for (const auto& g : e.gaps()) s += g.length * std::log(1.0 / g.length);
    return s;
}

double local_entropy(const BCSet& e, double eta)
{
    if (!(eta > 0.0)) throw ValidationError("local_entropy: threshold must be positive");
    double s = 0.0;
    for (const auto& g : e.gaps())
        if (g.length < eta) s += g.length * std::log(1.0 / g.length);
    return s;
}

BCSet merge(const BCSet& a, const BCSet& b)
{
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    if (a.is_whole_circle() || b.is_whole_circle()) return BCSet::whole_circle();
    // The first gap start of `a` belongs to the union, so no intersected gap crosses it.
    double p = a.gaps().front().start;
    auto sa = unwrap(a.gaps(), p);
    auto sb = unwrap(b.gaps(), p);
    std::vector<Span> both;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        double lo = std::max(sa[i].lo, sb[j].lo);
        double hi = std::min(sa[i].hi, sb[j].hi);
        if (hi > lo) both.push_back({lo, hi});
        if (sa[i].hi < sb[j].hi) ++i;
        else ++j;
    }
    BCSet out = BCSet::from_gaps(to_arcs(both));
    return out;
}

double dist_to_set(Complex z, const BCSet& e)
{
    if (e.is_empty()) return kInf;
    double rho = std::abs(z);
    if (rho == 0.0) return 1.0;
    double delta = e.angular_distance(std::arg(z));
    if (std::abs(rho - 1.0) < 1e-15) return chord(delta);
    return std::sqrt(std::max(0.0, 1.0 + rho * rho - 2.0 * rho * std::cos(delta)));
}

namespace {

// sup over x in A of the angular distance from x to B.
double directed_hausdorff(const BCSet& a, const BCSet& b)
{
    double best = 0.0;
    for (const auto& g : b.gaps()) {
        double len = g.radians();
        double mid = g.start + 0.5 * len;
        if (a.contains(mid)) {
            best = std::max(best, 0.5 * len);
            continue;
        }
        for (const auto& h : a.gaps()) {
            for (double x : {h.start, h.end()}) {
                double t = ccw_offset(x, g.start);
                if (t > 0.0 && t < len) best = std::max(best, std::min(t, len - t));
            }
        }
    }
    return best;
}

}  // namespace

double hausdorff_distance(const BCSet& a, const BCSet& b)
{
    if (a.is_empty() || b.is_empty()) throw ValidationError("hausdorff_distance: sets must be nonempty");
    return chord(std::max(directed_hausdorff(a, b), directed_hausdorff(b, a)));
}

void StarSpec::validate() const
{
    if (!(order >= 1.0)) throw ValidationError("StarSpec: order must be at least 1");
    if (!(aperture > 0.0 && aperture <= 1.0)) throw ValidationError("StarSpec: aperture must lie in (0, 1]");
}

bool star_contains(const StarSpec& spec, Complex z)
{
    double rho = std::abs(z);
    if (spec.include_core && rho < std::sqrt(0.5)) return true;
    if (rho == 0.0) return false;
    if (spec.base.is_empty()) return false;
    double d = chord(spec.base.angular_distance(std::arg(z)));
    return 1.0 - rho + kStarSlack >= spec.aperture * std::pow(d, spec.order);
}

double star_area_integral(const StarSpec& spec, int resolution)
{
    spec.validate();
    if (resolution <= 0) throw ValidationError("star_area_integral: resolution must be positive");
    if (spec.base.is_empty()) throw ValidationError("star_area_integral: base set is empty");
    if (spec.base.is_whole_circle()) throw ValidationError("star_area_integral: base set is the whole circle");
    if (spec.base.measure() > 1e-12) return kInf;
    const double theta = spec.aperture;
    const double alpha = spec.order;
    // Beyond this angular offset the star has no points on the ray.
    double reach = std::pow(theta, -1.0 / alpha);
    double t_cut = reach >= 2.0 ? kPi : 2.0 * std::asin(0.5 * reach);
    auto g = [&](double t) {
        double x = theta * std::pow(chord(t), alpha);
        if (x >= 1.0) return 0.0;
        return -std::log(x) - 1.0 + x;
    };
    double total = 0.0;
    for (const auto& gap : spec.base.gaps()) {
        double hi = std::min(t_cut, 0.5 * gap.radians());
        quad::Rule rule = quad::graded_to_zero(hi, resolution, 10);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(rule.nodes[i]);
        total += 2.0 * s;
    }
    return total;
}

double hyperbolic_dist_to_star(Complex z, const StarSpec& spec, int density)
{
    spec.validate();
    if (density < 8) throw ValidationError("hyperbolic_dist_to_star: density must be at least 8");
    if (std::abs(z) >= 1.0) throw ValidationError("hyperbolic_dist_to_star: point must lie in the open disk");
    if (star_contains(spec, z)) return 0.0;
    double best = kInf;
    if (spec.include_core) best = std::atanh(std::abs(z)) - std::atanh(std::sqrt(0.5));
    if (spec.base.is_empty()) return best;
    for (int k = 0; k < density; ++k) {
        double psi = kTwoPi * k / density;
        double d = chord(spec.base.angular_distance(psi));
        double radius = 1.0 - spec.aperture * std::pow(d, spec.order);
        if (radius <= 0.0) continue;
        if (radius >= 1.0) radius = std::nextafter(1.0, 0.0);
        best = std::min(best, hyperbolic_distance(z, std::polar(radius, psi)));
    }
    return best;
}

}  // namespace innerlab::bc
