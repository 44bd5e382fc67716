#include "innerlab/outer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace innerlab::outer {

namespace {

constexpr int kTailDepth = 60;

double smoothstep5(double s)
{
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

bc::CircleArc piece_arc(const bc::CircleArc& gap, int k)
{
    const double L = gap.length;
    if (k == 0) return {wrap_angle(gap.start + kTwoPi * L / 3.0), L / 3.0};
    const double len = L / (3.0 * std::ldexp(1.0, std::abs(k)));
    const double offset = k > 0 ? L - 2.0 * len : len;
    return {wrap_angle(gap.start + kTwoPi * offset), len};
}

double entropy_term(double len)
{
    return len * std::log(1.0 / len);
}

void require_gaps(const bc::BCSet& e)
{
    if (e.is_empty() || e.is_whole_circle()) throw ValidationError("outer: E must be a proper closed subset with at least one gap");
}

}  // namespace

std::vector<Piece> subdivide(const bc::BCSet& e, int K)
{
    require_gaps(e);
    if (K < 1) throw ValidationError("subdivide: truncation K must be at least 1");
    std::vector<Piece> out;
    const auto& gaps = e.gaps();
    out.reserve(gaps.size() * static_cast<std::size_t>(2 * K + 1));
    for (std::size_t n = 0; n < gaps.size(); ++n)
        for (int k = -K; k <= K; ++k) out.push_back({piece_arc(gaps[n], k), static_cast<int>(n), k});
    return out;
}

double psi_bump(double t)
{
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    return 1.0 - smoothstep5(t - 1.0);
}

double phi_profile(double t)
{
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return t;
    double s = t - 1.0;
    return 1.0 + s * s * s * (6.0 + s * (-8.0 + 3.0 * s));
}

Complex right_angle_point(const bc::CircleArc& arc)
{
    double beta = 0.5 * arc.radians();
    double mid = arc.start + beta;
    return std::polar(std::cos(beta) + std::sin(beta), mid);
}

OuterFunction::OuterFunction(const bc::BCSet& e, OuterOptions opt)
{
    auto pieces = subdivide(e, opt.K);
    const auto& gaps = e.gaps();

    // Tail pieces J_{±k}, K < k <= K + kTailDepth, enter h_F and the lumped coefficient.
    std::vector<Piece> tail;
    for (std::size_t n = 0; n < gaps.size(); ++n)
        for (int side : {-1, 1})
            for (int k = opt.K + 1; k <= opt.K + kTailDepth; ++k)
                tail.push_back({piece_arc(gaps[n], side * k), static_cast<int>(n), side * k});

    std::vector<double> lengths;
    lengths.reserve(pieces.size() + tail.size());
    for (const auto& p : pieces) lengths.push_back(p.arc.length);
    for (const auto& p : tail) lengths.push_back(p.arc.length);
    std::sort(lengths.begin(), lengths.end());
    std::vector<double> prefix(lengths.size() + 1, 0.0);
    for (std::size_t i = 0; i < lengths.size(); ++i) prefix[i + 1] = prefix[i] + entropy_term(lengths[i]);

    auto h_of = [&](double len) {
        auto lo = std::upper_bound(lengths.begin(), lengths.end(), len);
        double h = prefix[static_cast<std::size_t>(lo - lengths.begin())];
        for (auto it = lo; it != lengths.end() && *it < 2.0 * len; ++it) h += psi_bump(*it / len) * entropy_term(*it);
        return h;
    };
    auto make_term = [&](const Piece& p) {
        Term t;
        t.piece = p;
        t.h = h_of(p.arc.length);
        t.lambda = phi_profile(std::log(1.0 / p.arc.length));
        t.coefficient = t.lambda * entropy_term(p.arc.length);
        t.pole = right_angle_point(p.arc);
        t.direction = std::polar(1.0, p.arc.start + 0.5 * p.arc.radians());
        return t;
    };

    terms_.reserve(pieces.size() + 2 * gaps.size());
    for (const auto& p : pieces) terms_.push_back(make_term(p));
    for (std::size_t base = 0; base < tail.size(); base += kTailDepth) {
        double mass = 0.0;
        for (int i = 0; i < kTailDepth; ++i) {
            const auto& p = tail[base + static_cast<std::size_t>(i)];
            mass += phi_profile(std::log(1.0 / p.arc.length)) * entropy_term(p.arc.length);
        }
        tail_mass_ += mass;
        if (opt.lump_tail) {
            Term t = make_term(tail[base]);
            t.coefficient = mass;
            terms_.push_back(t);
        }
    }
}

double OuterFunction::total_weight() const
{
    double s = 0.0;
    for (const auto& t : terms_) s += t.coefficient;
    return s;
}

Complex OuterFunction::log_value(Complex z) const
{
    if (!(std::abs(z) < 1.0)) throw ValidationError("OuterFunction: z must lie in the open disk");
    Complex s = 0.0;
    for (const auto& t : terms_) s -= t.coefficient * t.direction / (t.pole - z);
    return s;
}

Complex OuterFunction::operator()(Complex z) const
{
    return std::exp(log_value(z));
}

double decay_ratio_sup(const OuterFunction& phi, const bc::BCSet& e, int N, const std::vector<Complex>& probes)
{
    double best = -std::numeric_limits<double>::infinity();
    for (Complex z : probes) {
        double d = bc::dist_to_set(z, e);
        if (!(d > 0.0)) continue;
        best = std::max(best, phi.log_abs(z) - N * std::log(d));
    }
    return std::exp(best);
}

std::vector<Complex> near_set_probes(const bc::BCSet& e, int levels)
{
    require_gaps(e);
    std::vector<Complex> out;
    for (const auto& g : e.gaps())
        for (double a : {g.start, g.end()})
            for (int l = 1; l <= levels; ++l) {
                double t = std::pow(10.0, -l);
                out.push_back(std::polar(1.0 - t, a));
                out.push_back(std::polar(1.0 - t, a + t));
                out.push_back(std::polar(1.0 - t, a - t));
                out.push_back(std::polar(1.0 - t * t, a + t));
            }
    return out;
}

}  // namespace innerlab::outer
