#pragma once

#include <span>
#include <vector>

#include "innerlab/common.hpp"

namespace innerlab::bc {

/// Open arc of the unit circle starting at `start` (radians, [0, 2π)) and running
/// counterclockwise over `length` (fraction of the full circle, (0, 1]).
struct CircleArc {
    double start = 0.0;
    double length = 0.0;

    double end() const { return start + kTwoPi * length; }
    double radians() const { return kTwoPi * length; }
};

/// Closed subset of the unit circle, stored as its complementary open arcs.
/// An empty gap list is the whole circle; the empty set carries its own flag.
class BCSet {
public:
    BCSet() = default;

    static BCSet from_gaps(std::vector<CircleArc> gaps);
    static BCSet from_points(std::span<const double> angles);
    static BCSet whole_circle();
    static BCSet empty_set();

    const std::vector<CircleArc>& gaps() const { return gaps_; }
    bool is_empty() const { return empty_; }
    bool is_whole_circle() const { return !empty_ && gaps_.empty(); }

    bool contains(double angle) const;
    /// Angular distance in [0, π] from `angle` to the set; +inf for the empty set.
    double angular_distance(double angle) const;
    /// Normalized Lebesgue measure of the set.
    double measure() const;

    BCSet rotated(double phi) const;

private:
    std::vector<CircleArc> gaps_;
    bool empty_ = false;
};

double entropy(const BCSet& e);
double local_entropy(const BCSet& e, double eta);
BCSet merge(const BCSet& a, const BCSet& b);

/// Euclidean distance from a point of the closed disk to the set.
double dist_to_set(Complex z, const BCSet& e);
double hausdorff_distance(const BCSet& a, const BCSet& b);

/// Generalized Korenblum star {1 - |z| >= θ dist(ẑ, E)^α}, optionally with the core B(0, 1/√2).
struct StarSpec {
    BCSet base;
    double order = 1.0;
    double aperture = 1.0;
    bool include_core = true;

    void validate() const;
};

/// Slack used when testing the star inequality, so that points on E itself are members.
inline constexpr double kStarSlack = 1e-12;

bool star_contains(const StarSpec& spec, Complex z);

/// ∫ over the star (core excluded) of |dz|^2 / (1 - |z|). `resolution` sets the number
/// of geometric refinement levels of the angular quadrature; +inf if E has positive measure.
double star_area_integral(const StarSpec& spec, int resolution);

/// Hyperbolic distance from z to the star, sampling its boundary at `density` directions.
double hyperbolic_dist_to_star(Complex z, const StarSpec& spec, int density);

}  // namespace innerlab::bc
