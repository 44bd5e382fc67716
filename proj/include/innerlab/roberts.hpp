#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "innerlab/bc_sets.hpp"
#include "innerlab/measures.hpp"

namespace innerlab::roberts {

/// Generation sizes n_2 = n2, n_{j+1} = n_j^2 (and n_1 = sqrt(n2)); radii r_j = 1 - 1/n_j.
struct RobertsParams {
    double c = 1.0;
    std::uint64_t n2 = 16;
    int max_generation = 3;

    void validate() const;
    double n(int j) const;
    std::uint64_t arcs(int j) const;
    double r(int j) const;
    /// Light/heavy threshold (c / n_j) log n_j.
    double threshold(int j) const;
};

enum class Action { L, H1, H2 };
std::string to_string(Action a);

struct AuditEntry {
    int generation = 0;
    std::uint64_t arc_index = 0;
    double arc_start = 0.0;   // radians
    double arc_length = 0.0;  // fraction of the circle
    bool heavy = false;
    Action action = Action::L;
    double arc_mass = 0.0;  // remaining ω-mass of the arc before the step
    double box_mass = 0.0;  // ω-mass of the box [r_{j-1}, r_j) over the arc
    double to_layer = 0.0;
    double to_cone = 0.0;
};

struct GenerationSummary {
    int generation = 0;
    double threshold = 0.0;
    std::uint64_t light = 0;        // including arcs without mass
    std::uint64_t empty_light = 0;  // light arcs carrying no mass (not listed in the audit)
    std::uint64_t heavy = 0;
    double layer_mass = 0.0;
};

struct RobertsDecomposition {
    RobertsParams params;
    std::vector<meas::DiskMeasure> layers;  // layers[k] is μ_{k+2}
    meas::DiskMeasure cone;
    bc::BCSet cone_set = bc::BCSet::empty_set();
    bc::BCSet star_core_set = bc::BCSet::empty_set();
    double step1_mass = 0.0;  // ω-mass of B(0, r_1) moved to the cone
    double residual_mass = 0.0;  // ω-mass moved to the cone after the last generation
    std::vector<AuditEntry> audit;
    std::vector<GenerationSummary> generations;
};

/// Upper bound on explicitly represented gaps of E*_cone.
inline constexpr std::size_t kMaxConeGaps = 4'000'000;

RobertsDecomposition decompose(const meas::DiskMeasure& w, const RobertsParams& p);

struct VerifyFailure {
    std::string check;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyFailure> failures;
    double mass_error = 0.0;
    double worst_arc_ratio = 0.0;  // max sliding-arc mass over 2 (c/n_j) log n_j
    double cone_entropy = 0.0;
    double star_core_entropy = 0.0;
    bool ok() const { return failures.empty(); }
};

inline constexpr double kMassTolerance = 1e-12;

VerifyReport verify(const RobertsDecomposition& d, const meas::DiskMeasure& w, const RobertsParams& p);

/// Local entropies of (E*_cone, E_cone) at threshold η; η <= 0 selects 1/(2 n2).
std::pair<double, double> local_entropy_bounds(const RobertsDecomposition& d, double eta = 0.0);

}  // namespace innerlab::roberts
