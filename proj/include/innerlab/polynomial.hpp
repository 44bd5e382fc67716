#pragma once

#include <cstdint>
#include <vector>

#include "innerlab/common.hpp"

namespace innerlab::poly {

/// Coefficients in increasing degree.
using Poly = std::vector<Complex>;

Complex eval(const Poly& p, Complex z);
Poly multiply(const Poly& a, const Poly& b);
Poly derivative(const Poly& p);
Poly subtract(const Poly& a, const Poly& b);
/// Drops coefficients above `degree`.
Poly truncate(Poly p, std::size_t degree);
/// Product of (z - r) over the roots.
Poly from_roots(const std::vector<Complex>& roots);

struct RootOptions {
    double residual_tol = 1e-12;
    double cluster_radius = 1e-7;
    int max_iterations = 500;
    int restarts = 8;
    std::uint64_t seed = 0x5eed;
};

/// All roots with multiplicity (clustered roots are replaced by their mean).
/// Exact zero roots are deflated first. Throws NumericalError on non-convergence.
std::vector<Complex> roots(const Poly& p, const RootOptions& opt = {});

}  // namespace innerlab::poly
