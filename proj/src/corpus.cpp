#include "innerlab/corpus.hpp"

#include <cmath>

namespace innerlab::corpus {

inner::FiniteBlaschke random_blaschke(Rng& rng, int degree, double max_modulus, bool zero_at_origin)
{
    if (degree < 1) throw ValidationError("random_blaschke: degree must be positive");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> zeros;
    if (zero_at_origin) zeros.push_back(0.0);
    while (static_cast<int>(zeros.size()) < degree) {
        double rho = max_modulus * std::sqrt(u(rng));
        if (rho < 1e-3) continue;
        zeros.push_back(std::polar(rho, kTwoPi * u(rng)));
    }
    return inner::FiniteBlaschke(std::move(zeros), std::polar(1.0, kTwoPi * u(rng)));
}

meas::DiskMeasure random_measure(Rng& rng, const MeasureShape& shape)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<meas::InteriorAtom> in;
    std::vector<meas::BoundaryAtom> bd;
    for (int k = 0; k < shape.interior_atoms; ++k) {
        double rho = shape.min_modulus + (shape.max_modulus - shape.min_modulus) * u(rng);
        double m = shape.max_mass * (0.05 + 0.95 * u(rng));
        in.push_back({std::polar(rho, kTwoPi * u(rng)), m / (1.0 - rho)});
    }
    for (int k = 0; k < shape.boundary_atoms; ++k)
        bd.push_back({kTwoPi * u(rng), shape.max_mass * (0.05 + 0.95 * u(rng))});
    return meas::DiskMeasure(std::move(in), std::move(bd));
}

}  // namespace innerlab::corpus
