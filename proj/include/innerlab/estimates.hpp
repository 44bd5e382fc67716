#pragma once

#include <cstdint>
#include <vector>

#include "innerlab/bc_sets.hpp"
#include "innerlab/inner.hpp"
#include "innerlab/measures.hpp"

namespace innerlab::estimates {

/// A finite set E and a Blaschke product with F(0) = 0 whose zeros and critical points lie in K_E.
struct DecayCase {
    bc::BCSet e;
    inner::FiniteBlaschke f;
};

/// K_E^α with aperture 1 and the core B(0, 1/√2).
bc::StarSpec star(const bc::BCSet& e, double order);

/// Seeded corpus: 2-4 points in E, 3-6 zeros clustered near E inside K_E plus a zero at the origin.
std::vector<DecayCase> calibration_corpus(std::uint64_t seed = 2024, int count = 8);

/// Points on rings |z| = 1 - 10^{-k}, k = 1..rings, lying outside `spec`.
std::vector<Complex> outside_star_samples(const bc::StarSpec& spec, int rings = 6, int per_ring = 256);

/// max of log(1/|I(z)|) / (M e^{-d_D(z, K_E^2)}) over samples outside K_E^2, with M = Σ (1 - |a|).
double zero_decay_ratio(const inner::FiniteBlaschke& f, const bc::BCSet& e, int density = 1024);

/// max of (1 - |F(z)|) / (1 - |z|) dist(z, E)^4 over samples outside K_E^4.
double distortion_ratio(const inner::FiniteBlaschke& f, const bc::BCSet& e);

/// max of |F'(ζ)| dist(ζ, E)^4 over `n` equally spaced points of the circle.
double boundary_derivative_ratio(const inner::FiniteBlaschke& f, const bc::BCSet& e, int n = 4096);

/// Seeded measure supported in 1 - 1/n <= |z| <= 1: each of the n boxes over arcs of length 1/n carries
/// ω-mass at most (c/n) log n spread over 1-3 atoms, so every arc of length 1/n gets at most 2c |I| log(1/|I|).
meas::DiskMeasure annulus_box_measure(int n, double c, std::uint64_t seed);

/// c' = max of log(1/|I_μ(z)|) / (1 + log(1/(1 - |z|^2))) over a polar grid of |z| < r_max,
/// the least exponent with |I_μ| >= e^{-c'} (1 - |z|^2)^{c'} there.
double comparison_exponent(const meas::DiskMeasure& mu, double r_max, int rings = 32, int per_ring = 512);

struct DecayConstants {
    double zero_decay = 0.0;
    double distortion = 0.0;
    double boundary_derivative = 0.0;
};

/// Corpus maxima of the three ratios.
DecayConstants measure(const std::vector<DecayCase>& corpus);

/// Maxima measured once on calibration_corpus() and frozen.
DecayConstants frozen_constants();

/// Allowed growth over the frozen constants before the regression guard trips.
inline constexpr double kRegressionSlack = 1.05;

}  // namespace innerlab::estimates
