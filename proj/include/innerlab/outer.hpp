#pragma once

#include <vector>

#include "innerlab/bc_sets.hpp"
#include "innerlab/common.hpp"

namespace innerlab::outer {

/// One arc J_{n,k} of the subdivision of gap n; k = 0 is the middle third, k > 0 runs toward the gap end.
struct Piece {
    bc::CircleArc arc;
    int gap = 0;
    int k = 0;
};

/// J_{n,k} for |k| <= K, ordered by gap and then by position inside the gap.
std::vector<Piece> subdivide(const bc::BCSet& e, int K);

/// Smooth cutoff: 1 for t <= 1, 0 for t >= 2, quintic smoothstep in between (C^2).
double psi_bump(double t);
/// Smooth profile: 1 for t <= 1, t for t >= 2, increasing C^2 quintic in between.
double phi_profile(double t);

struct Term {
    Piece piece;
    double h = 0.0;            // smoothed h_F(J)
    double lambda = 1.0;       // λ_F(J) = φ(log 1/|J|)
    double coefficient = 0.0;  // λ |J| log(1/|J|), plus the lumped tail for the outermost pieces
    Complex pole;              // a_J
    Complex direction;         // e^{iθ_J}
};

struct OuterOptions {
    int K = 20;
    /// Move the weight of the pieces |k| > K onto the pole of J_{±(K+1)}; otherwise drop it.
    bool lump_tail = true;
};

/// a_J = (cos β + sin β) e^{iθ_J} with β half the angular length: the point on the ray through the midpoint
/// outside the disk from which J subtends a right angle.
Complex right_angle_point(const bc::CircleArc& arc);

/// Carleson outer function Φ_E(z) = exp(-Σ λ_F(J) |J| log(1/|J|) e^{iθ_J} / (a_J - z)).
class OuterFunction {
public:
    explicit OuterFunction(const bc::BCSet& e, OuterOptions opt = {});

    const std::vector<Term>& terms() const { return terms_; }
    /// Σ λ |J| log(1/|J|) over the pieces beyond the truncation.
    double tail_mass() const { return tail_mass_; }
    /// Σ λ |J| log(1/|J|) over all retained terms.
    double total_weight() const;

    Complex log_value(Complex z) const;
    double log_abs(Complex z) const { return log_value(z).real(); }
    Complex operator()(Complex z) const;

private:
    std::vector<Term> terms_;
    double tail_mass_ = 0.0;
};

/// sup over `probes` of |Φ_E(z)| dist(z, E)^{-N}, computed in the log domain.
double decay_ratio_sup(const OuterFunction& phi, const bc::BCSet& e, int N, const std::vector<Complex>& probes);

/// Points approaching every gap endpoint radially and tangentially, with distances 10^{-1} .. 10^{-levels}.
std::vector<Complex> near_set_probes(const bc::BCSet& e, int levels = 5);

}  // namespace innerlab::outer
