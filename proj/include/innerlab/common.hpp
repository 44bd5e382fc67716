#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace innerlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Invalid input or configuration. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iteration failure, overflow or a singular evaluation. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reduces an angle to [0, 2π).
inline double wrap_angle(double a)
{
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

/// Chord length subtended by an angular separation in [0, π].
inline double chord(double angular)
{
    return 2.0 * std::sin(0.5 * angular);
}

/// u_D(z) = -log(1 - |z|^2), the maximal solution on the unit disk.
inline double u_disk(Complex z)
{
    return -std::log1p(-std::norm(z));
}

/// Maximal solution on D_r: log(r / (r^2 - |z|^2)).
inline double u_disk_r(Complex z, double r)
{
    return std::log(r / (r * r - std::norm(z)));
}

/// Hyperbolic distance artanh(|x - y| / |1 - x conj(y)|) for density 1/(1 - |z|^2).
inline double hyperbolic_distance(Complex x, Complex y)
{
    double q = std::abs(x - y) / std::abs(1.0 - x * std::conj(y));
    return std::atanh(std::min(q, 1.0));
}

}  // namespace innerlab
