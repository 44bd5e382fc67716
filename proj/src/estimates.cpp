#include "innerlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace innerlab::estimates {

namespace {

constexpr int kMaxAttempts = 200;

bool all_in_star(const bc::StarSpec& spec, const std::vector<Complex>& pts)
{
    return std::all_of(pts.begin(), pts.end(), [&](Complex z) { return bc::star_contains(spec, z); });
}

}  // namespace

bc::StarSpec star(const bc::BCSet& e, double order)
{
    return bc::StarSpec{e, order, 1.0, true};
}

std::vector<DecayCase> calibration_corpus(std::uint64_t seed, int count)
{
    if (count < 1) throw ValidationError("calibration_corpus: count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<DecayCase> out;
    for (int c = 0; c < count; ++c) {
        std::vector<double> pts;
        for (int i = 0; i < 2 + c % 3; ++i) pts.push_back(kTwoPi * U(rng));
        auto e = bc::BCSet::from_points(pts);
        auto k1 = star(e, 1.0);
        const int nz = 3 + c % 4;
        bool done = false;
        for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
            std::vector<Complex> zeros{0.0};
            while (static_cast<int>(zeros.size()) <= nz) {
                double p = pts[static_cast<std::size_t>(U(rng) * pts.size()) % pts.size()];
                double phi = 1e-3 * std::pow(300.0, U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
                double depth = std::min(0.9, chord(std::abs(phi)) * (1.0 + 2.0 * U(rng)));
                Complex z = std::polar(1.0 - depth, p + phi);
                if (bc::star_contains(k1, z)) zeros.push_back(z);
            }
            inner::FiniteBlaschke f(zeros, std::polar(1.0, kTwoPi * U(rng)));
            std::vector<Complex> crit;
            try {
                crit = inner::critical_points(f);
            } catch (const NumericalError&) {
                continue;
            }
            if (all_in_star(k1, crit)) {
                out.push_back({e, f});
                done = true;
            }
        }
        if (!done) throw NumericalError("calibration_corpus: no sample with critical points inside K_E");
    }
    return out;
}

std::vector<Complex> outside_star_samples(const bc::StarSpec& spec, int rings, int per_ring)
{
    std::vector<Complex> out;
    for (int k = 1; k <= rings; ++k)
        for (int j = 0; j < per_ring; ++j) {
            Complex z = std::polar(1.0 - std::pow(10.0, -k), kTwoPi * (j + 0.5) / per_ring);
            if (!bc::star_contains(spec, z)) out.push_back(z);
        }
    return out;
}

double zero_decay_ratio(const inner::FiniteBlaschke& f, const bc::BCSet& e, int density)
{
    double M = 0.0;
    for (Complex a : f.zeros()) M += 1.0 - std::abs(a);
    if (!(M > 0.0)) throw ValidationError("zero_decay_ratio: F has no zeros");
    auto k2 = star(e, 2.0);
    double best = 0.0;
    for (Complex z : outside_star_samples(k2)) {
        double d = bc::hyperbolic_dist_to_star(z, k2, density);
        best = std::max(best, -f.log_abs(z) / (M * std::exp(-d)));
    }
    return best;
}

double distortion_ratio(const inner::FiniteBlaschke& f, const bc::BCSet& e)
{
    double best = 0.0;
    for (Complex z : outside_star_samples(star(e, 4.0))) {
        double gap = -std::expm1(f.log_abs(z));
        best = std::max(best, gap / (1.0 - std::abs(z)) * std::pow(bc::dist_to_set(z, e), 4));
    }
    return best;
}

double boundary_derivative_ratio(const inner::FiniteBlaschke& f, const bc::BCSet& e, int n)
{
    if (n < 8) throw ValidationError("boundary_derivative_ratio: n must be at least 8");
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        Complex z = std::polar(1.0, kTwoPi * (j + 0.5) / n);
        best = std::max(best, std::abs(f.derivative(z)) * std::pow(bc::dist_to_set(z, e), 4));
    }
    return best;
}

meas::DiskMeasure annulus_box_measure(int n, double c, std::uint64_t seed)
{
    if (n < 4) throw ValidationError("annulus_box_measure: n must be at least 4");
    if (!(c > 0.0)) throw ValidationError("annulus_box_measure: c must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<meas::InteriorAtom> interior;
    std::vector<meas::BoundaryAtom> boundary;
    const double cap = c / n * std::log(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        double budget = cap * (0.5 + 0.5 * U(rng));
        int atoms = 1 + static_cast<int>(3.0 * U(rng)) % 3;
        for (int a = 0; a < atoms; ++a) {
            double mass = budget / atoms;
            double angle = kTwoPi * (k + U(rng)) / n;
            double depth = U(rng) < 0.3 ? 0.0 : U(rng) / n;
            if (depth == 0.0)
                boundary.push_back({angle, mass});
            else
                interior.push_back({std::polar(1.0 - depth, angle), mass / depth});
        }
    }
    return meas::DiskMeasure(std::move(interior), std::move(boundary));
}

double comparison_exponent(const meas::DiskMeasure& mu, double r_max, int rings, int per_ring)
{
    if (!(r_max > 0.0 && r_max < 1.0)) throw ValidationError("comparison_exponent: r_max must lie in (0, 1)");
    if (rings < 1 || per_ring < 1) throw ValidationError("comparison_exponent: grid must be nonempty");
    double best = 0.0;
    for (int i = 0; i < rings; ++i) {
        double rho = 1.0 - std::pow(1.0 - r_max, (i + 1.0) / rings);
        for (int j = 0; j < per_ring; ++j) {
            Complex z = std::polar(rho, kTwoPi * (j + 0.5) / per_ring);
            best = std::max(best, -inner::log_abs_inner(mu, z) / (1.0 + u_disk(z)));
        }
    }
    return best;
}

DecayConstants measure(const std::vector<DecayCase>& corpus)
{
    DecayConstants out;
    for (const auto& c : corpus) {
        out.zero_decay = std::max(out.zero_decay, zero_decay_ratio(c.f, c.e));
        out.distortion = std::max(out.distortion, distortion_ratio(c.f, c.e));
        out.boundary_derivative = std::max(out.boundary_derivative, boundary_derivative_ratio(c.f, c.e));
    }
    return out;
}

DecayConstants frozen_constants()
{
    return {0.64505581276948476, 25.208341778781961, 25.317392356256594};
}

}  // namespace innerlab::estimates
