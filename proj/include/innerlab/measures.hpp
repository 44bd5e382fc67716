#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "innerlab/bc_sets.hpp"
#include "innerlab/common.hpp"

namespace innerlab::meas {

struct InteriorAtom {
    Complex location;
    double mass = 0.0;
};

struct BoundaryAtom {
    double angle = 0.0;
    double mass = 0.0;
};

/// Finite positive atomic measure on the closed disk: interior part ν̃ and boundary part μ.
/// Atoms at identical locations are merged; atoms are kept sorted.
class DiskMeasure {
public:
    DiskMeasure() = default;
    DiskMeasure(std::vector<InteriorAtom> interior, std::vector<BoundaryAtom> boundary);

    static DiskMeasure point_mass(double angle, double mass);
    static DiskMeasure interior_point(Complex a, double mass);

    const std::vector<InteriorAtom>& interior() const { return interior_; }
    const std::vector<BoundaryAtom>& boundary() const { return boundary_; }
    bool empty() const { return interior_.empty() && boundary_.empty(); }

    double total_mass() const;
    /// Mass of ω = μ + (1 - |z|) ν̃.
    double blaschke_mass() const;
    double boundary_mass() const;

    DiskMeasure scaled(double k) const;
    DiskMeasure rotated(double phi) const;
    DiskMeasure operator+(const DiskMeasure& other) const;

private:
    std::vector<InteriorAtom> interior_;
    std::vector<BoundaryAtom> boundary_;
};

inline double total_mass(const DiskMeasure& w) { return w.total_mass(); }
inline double blaschke_mass(const DiskMeasure& w) { return w.blaschke_mass(); }

double star_mass(const DiskMeasure& w, const bc::StarSpec& spec);

enum class StarMassMode { exact, greedy };

struct StarMassResult {
    double value = 0.0;
    bc::BCSet witness = bc::BCSet::empty_set();
    std::vector<std::size_t> atoms;  // indices into w.boundary()
};

inline constexpr std::size_t kExactStarMassLimit = 18;

StarMassResult max_star_mass(const DiskMeasure& w, double budget, StarMassMode mode);

/// Solves n θ log(1/θ) = M for θ in (0, 1/e); throws ValidationError when M/n > 1/e.
double solve_theta(int n, double M);

/// Σ_{k=1..n} δ_{e^{ikθ_n}} / n.
DiskMeasure diffuse_measure(int n, double M);

enum class SequenceTag { concentrating, diffuse, mixed };
std::string to_string(SequenceTag tag);

struct ClassifyParams {
    std::vector<double> c_ladder{0.5, 1.0, 2.0};
    unsigned long long n2 = 16;
    int max_generation = 3;
};

struct SequenceDiagnostics {
    // cone_fractions[i][k]: cone mass fraction of measure i at c_ladder[k]
    std::vector<std::vector<double>> cone_fractions;
    // local entropy of E_cone at threshold 1/(2 n2), per measure, at the middle of the c ladder
    std::vector<double> entropy_budgets;
    // cone fraction relative to a point mass of equal total mass, per measure
    std::vector<double> concentration;
    SequenceTag tag = SequenceTag::mixed;
};

SequenceDiagnostics classify_sequence(const std::vector<DiskMeasure>& measures, const ClassifyParams& params);

}  // namespace innerlab::meas
