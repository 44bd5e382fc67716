#pragma once

#include <vector>

namespace innerlab::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, via Golub-Welsch.
Rule gauss_jacobi(int n, double a, double b);

/// Composite Gauss-Legendre on [lo, hi] with `panels` equal panels of `order` points.
Rule composite(double lo, double hi, int panels, int order);

/// Composite rule on [0, hi] with panels shrinking geometrically toward 0 by `ratio`.
/// Integrable log singularities at 0 are resolved to near machine precision.
Rule graded_to_zero(double hi, int levels, int order, double ratio = 0.15);

}  // namespace innerlab::quad
