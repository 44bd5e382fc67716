#pragma once

#include <vector>

#include "innerlab/common.hpp"
#include "innerlab/measures.hpp"
#include "innerlab/polynomial.hpp"

namespace innerlab::inner {

/// G(z, a) = log|1 - z conj(a)| - log|z - a|. Throws NumericalError at z = a.
double green(Complex z, Complex a);
/// min(G(z, a), 1); equals 1 at z = a.
double green_truncated(Complex z, Complex a);
/// Poisson kernel (1 - |z|^2) / |ζ - z|^2 for ζ = e^{i angle}.
double poisson_kernel(Complex z, double angle);
/// Disk automorphism T_a(z) = (z - a) / (1 - conj(a) z).
Complex mobius(Complex a, Complex z);

inline double hyperbolic_dist(Complex x, Complex y) { return hyperbolic_distance(x, y); }

/// log|I_ω(z)| = -Σ m̃ G(z, a) - Σ m P(z, ζ). Throws NumericalError at an interior atom.
double log_abs_inner(const meas::DiskMeasure& w, Complex z);

struct Zero {
    Complex location;
    int multiplicity = 1;
};

/// λ Π T_{a_k}(z) with zeros repeated by multiplicity.
class FiniteBlaschke {
public:
    FiniteBlaschke() = default;
    explicit FiniteBlaschke(std::vector<Complex> zeros, Complex rotation = 1.0);
    static FiniteBlaschke with_multiplicities(const std::vector<Zero>& zeros, Complex rotation = 1.0);

    int degree() const { return static_cast<int>(zeros_.size()); }
    const std::vector<Complex>& zeros() const { return zeros_; }
    std::vector<Zero> grouped_zeros() const;
    Complex rotation() const { return rotation_; }

    Complex operator()(Complex z) const;
    Complex derivative(Complex z) const;
    double log_abs(Complex z) const;

    /// F = numerator / denominator with numerator λ Π (z - a), denominator Π (1 - conj(a) z).
    poly::Poly numerator() const;
    poly::Poly denominator() const;

private:
    std::vector<Complex> zeros_;
    Complex rotation_ = 1.0;
};

/// Critical points in the disk, with multiplicity.
std::vector<Complex> critical_points(const FiniteBlaschke& f, const poly::RootOptions& opt = {});

/// T_x ∘ F, with zeros F^{-1}(x).
FiniteBlaschke frostman_shift(const FiniteBlaschke& f, Complex x, const poly::RootOptions& opt = {});

/// γ_F(z) = Σ over critical points of G(z, c).
double gamma(const FiniteBlaschke& f, Complex z);
double gamma(const std::vector<Complex>& critical, Complex z);

/// Σ_crit log(1/|c|) - Σ_{zeros ≠ 0} log(1/|a|); requires a simple zero at the origin.
double jensen_entropy(const FiniteBlaschke& f);

/// (1/2π) ∫ log|F'(e^{iθ})| dθ by trapezoid doubling until successive values agree to `tol`.
double circle_entropy_quadrature(const FiniteBlaschke& f, double tol = 1e-13, int max_points = 1 << 22);

/// Inner function λ B S_μ with a finite zero list and atomic singular measure.
class InnerFunction {
public:
    InnerFunction() = default;
    InnerFunction(FiniteBlaschke blaschke, std::vector<meas::BoundaryAtom> singular);
    /// Requires integer interior masses (zero multiplicities).
    static InnerFunction from_measure(const meas::DiskMeasure& w, Complex rotation = 1.0);

    const FiniteBlaschke& blaschke() const { return blaschke_; }
    const std::vector<meas::BoundaryAtom>& singular() const { return singular_; }
    meas::DiskMeasure zero_measure() const;

    Complex operator()(Complex z) const;
    double log_abs(Complex z) const;

private:
    FiniteBlaschke blaschke_;
    std::vector<meas::BoundaryAtom> singular_;
};

struct NevanlinnaReport {
    double gap = 0.0;
    std::vector<double> radii;
    std::vector<double> averages;
};

/// Circle average of log|f| at r = 1 (zero for inner f) minus the extrapolated limit of
/// the averages on |z| = r as r → 1. Equals the total singular mass.
NevanlinnaReport nevanlinna_gap(const InnerFunction& f, int ladder_levels = 12);

}  // namespace innerlab::inner
