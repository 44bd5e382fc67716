#pragma once

#include <functional>
#include <vector>

#include "innerlab/bc_sets.hpp"
#include "innerlab/common.hpp"
#include "innerlab/inner.hpp"

namespace innerlab::bergman {

using Evaluable = std::function<Complex(Complex)>;

/// Resolution of the tensor polar rule. Radial panels halve toward r = 1 and the last one carries the
/// Jacobi weight; angular panels are graded toward `focus` angles by factors of 4.
struct QuadratureSpec {
    int radial_levels = 20;
    int order = 16;
    int n_theta = 512;
    int angular_levels = 10;
    std::vector<double> focus;
};

struct BergmanSpaceSpec {
    double p = 2.0;
    double alpha = 0.0;
    QuadratureSpec quad;

    void validate() const;
};

/// Σ w f(r_i e^{iθ_j}) approximating ∫_D f (1 - |z|)^α |dz|^2.
class DiskRule {
public:
    DiskRule(double alpha, const QuadratureSpec& q);

    const std::vector<double>& radii() const { return r_; }
    const std::vector<double>& radial_weights() const { return wr_; }
    const std::vector<double>& angles() const { return t_; }
    const std::vector<double>& angular_weights() const { return wt_; }
    std::size_t size() const { return r_.size() * t_.size(); }

private:
    std::vector<double> r_, wr_, t_, wt_;
};

struct NormReport {
    double value = 0.0;
    /// Value with the radial and angular resolution doubled.
    double refined = 0.0;
    bool divergent = false;
};

/// ‖f‖_{A^p_α}; `divergent` is set when the integrand is not finite or refinement moves it by more than 1e-6 relatively.
NormReport bergman_norm(const Evaluable& f, const BergmanSpaceSpec& spec);

struct LittlewoodPaley {
    double h2_squared = 0.0;
    double lp = 0.0;
};

/// ‖F‖²_{H²} on the circle and (1/π)∫ |F'|² log(1/|z|²) over the disk. Requires F(0) = 0.
LittlewoodPaley h2_norm_and_lp(const inner::FiniteBlaschke& f);

struct SubspaceProbe {
    inner::InnerFunction generator;
    int m = 20;
};

struct DistanceReport {
    /// distances[k] = dist(1, span{I, zI, ..., z^k I}) for k = 0..m.
    std::vector<double> distances;
    double norm_one = 0.0;
    bool regularized = false;

    double value() const { return distances.back(); }
};

/// Exact A²_α distance from 1 to the span of z^k I, k <= m, by Gram-matrix least squares.
/// Boundary atoms of I are added to the angular focus set.
DistanceReport distance_to_one(const SubspaceProbe& probe, const BergmanSpaceSpec& spec);

struct DivisionReport {
    double norm_f = 0.0;
    double norm_divided = 0.0;
    double ratio = 0.0;
    std::size_t skipped = 0;
};

/// f^δ = Φ_E^δ f / I evaluated as exp(δ log Φ_E + log f - log I); nodes within 1e-9 of a zero of I are skipped.
DivisionReport divide(const Evaluable& f, const inner::InnerFunction& I, const bc::BCSet& e, double delta,
                      const BergmanSpaceSpec& spec);

struct Beta {
    double beta = 0.0;
    /// sup_n ‖z^n‖_{A^p_α} n^β.
    double constant = 0.0;
};

/// ‖z^n‖_{A^p_α} = (2π B(np + 2, α + 1))^{1/p}.
double monomial_norm(int n, double p, double alpha);

/// β = (α + 1)/p, the largest exponent with sup_n ‖z^n‖ n^β finite, and that supremum.
Beta admissible_beta(double p, double alpha);

/// D[∅] = 0 and D[{n1, ..., nk}] = n1^{β/3} D[{n2, ..., nk}] + n1^{-2β/3}.
double d_recursion(const std::vector<double>& ns, double beta);

}  // namespace innerlab::bergman
