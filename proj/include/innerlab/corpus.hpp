#pragma once

#include <random>

#include "innerlab/inner.hpp"
#include "innerlab/measures.hpp"

namespace innerlab::corpus {

using Rng = std::mt19937_64;

/// Degree-`degree` Blaschke product with a simple zero at the origin (when requested),
/// the other zeros uniform in area on |a| <= max_modulus, and a random rotation.
inner::FiniteBlaschke random_blaschke(Rng& rng, int degree, double max_modulus = 0.9, bool zero_at_origin = true);

struct MeasureShape {
    int interior_atoms = 4;
    int boundary_atoms = 3;
    double min_modulus = 0.0;
    double max_modulus = 0.99;
    double max_mass = 1.0;  // upper bound of each atom's ω-mass
};

/// Random atomic measure; interior masses are drawn as ω-masses and converted to ν̃.
meas::DiskMeasure random_measure(Rng& rng, const MeasureShape& shape);

}  // namespace innerlab::corpus
