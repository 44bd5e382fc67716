#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "innerlab/corpus.hpp"
#include "innerlab/inner.hpp"

using namespace innerlab;
using namespace innerlab::inner;

namespace {

FiniteBlaschke example_f()
{
    return FiniteBlaschke({0.0, 0.5});
}

}  // namespace

TEST(Green, Examples)
{
    EXPECT_NEAR(green(0.5, 0.0), std::log(2.0), 1e-15);
    EXPECT_NEAR(green(0.0, 0.5), std::log(2.0), 1e-15);
    Complex z = 0.5, a(0.0, 0.5);
    EXPECT_NEAR(green(z, a), std::log(std::abs((1.0 - z * std::conj(a)) / (z - a))), 1e-15);
    EXPECT_NEAR(green(z, a), 0.376886, 1e-6);
    EXPECT_THROW(green(a, a), NumericalError);
    EXPECT_EQ(green_truncated(0.01, 0.0), 1.0);
    EXPECT_NEAR(green_truncated(0.5, 0.0), std::log(2.0), 1e-15);
}

TEST(Green, SymmetricAndConformallyInvariant)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pt = [&] { return std::polar(0.95 * std::sqrt(u(rng)), kTwoPi * u(rng)); };
    for (int k = 0; k < 100; ++k) {
        Complex z = pt(), a = pt(), b = pt();
        EXPECT_NEAR(green(z, a), green(a, z), 1e-12);
        EXPECT_NEAR(green(mobius(b, z), mobius(b, a)), green(z, a), 1e-9);
        EXPECT_GE(green(z, a), 0.0);
    }
}

TEST(Hyperbolic, Examples)
{
    EXPECT_NEAR(hyperbolic_dist(0.0, 0.5), 0.5 * std::log(3.0), 1e-15);
    EXPECT_EQ(hyperbolic_dist(Complex(0.3, 0.2), Complex(0.3, 0.2)), 0.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pt = [&] { return std::polar(0.9 * std::sqrt(u(rng)), kTwoPi * u(rng)); };
    for (int k = 0; k < 100; ++k) {
        Complex x = pt(), y = pt(), a = pt();
        Complex rot = std::polar(1.0, kTwoPi * u(rng));
        auto T = [&](Complex z) { return rot * mobius(a, z); };
        EXPECT_NEAR(hyperbolic_dist(T(x), T(y)), hyperbolic_dist(x, y), 1e-10);
    }
}

TEST(LogAbsInner, Examples)
{
    auto s = meas::DiskMeasure::point_mass(0.0, 1.0);
    EXPECT_NEAR(log_abs_inner(s, 0.0), -1.0, 1e-15);
    // S_{δ_1}(z) = exp((z + 1)/(z - 1)) agrees in modulus away from 0.
    Complex z(0.3, -0.4);
    EXPECT_NEAR(log_abs_inner(s, z), std::log(std::abs(std::exp((z + 1.0) / (z - 1.0)))), 1e-14);
    auto b = meas::DiskMeasure::interior_point(0.0, 1.0);
    EXPECT_NEAR(log_abs_inner(b, 0.5), -std::log(2.0), 1e-15);
    EXPECT_NEAR(log_abs_inner(s + b, z), log_abs_inner(s, z) + log_abs_inner(b, z), 1e-15);
    EXPECT_THROW(log_abs_inner(b, 0.0), NumericalError);
}

TEST(LogAbsInner, NonPositiveAndSmallNearCircle)
{
    corpus::Rng rng(3);
    corpus::MeasureShape shape;
    for (int t = 0; t < 20; ++t) {
        auto w = corpus::random_measure(rng, shape);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 50; ++k) {
            Complex z = std::polar(0.99 * std::sqrt(u(rng)), kTwoPi * u(rng));
            EXPECT_LE(log_abs_inner(w, z), 0.0);
        }
        // Radial averages of log|I| at r → 1 tend to minus the boundary mass.
        double r = 1.0 - 1e-4;
        int n = 1 << 20;
        double avg = 0.0;
        for (int k = 0; k < n; ++k) avg += log_abs_inner(w, std::polar(r, kTwoPi * (k + 0.5) / n));
        avg /= n;
        EXPECT_NEAR(avg, -w.boundary_mass(), 2e-3 * (1.0 + w.total_mass()));
    }
}

TEST(Blaschke, EvaluationAndDerivative)
{
    FiniteBlaschke f = example_f();
    Complex z(0.2, 0.3);
    EXPECT_NEAR(std::abs(f(z) - z * (z - 0.5) / (1.0 - 0.5 * z)), 0.0, 1e-15);
    double h = 1e-6;
    Complex fd = (f(z + h) - f(z - h)) / (2.0 * h);
    EXPECT_NEAR(std::abs(f.derivative(z) - fd), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(f.derivative(0.0) - Complex(-0.5)), 0.0, 1e-15);
    corpus::Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        auto g = corpus::random_blaschke(rng, 5);
        for (double th : {0.0, 1.0, 2.5, 4.0}) EXPECT_NEAR(std::abs(g(std::polar(1.0, th))), 1.0, 1e-13);
    }
}

TEST(CriticalPoints, Examples)
{
    auto c = critical_points(example_f());
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0].real(), 2.0 - std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(c[0].imag(), 0.0, 1e-14);
    for (int d = 2; d <= 6; ++d) {
        auto cd = critical_points(FiniteBlaschke(std::vector<Complex>(d, 0.0)));
        ASSERT_EQ(static_cast<int>(cd.size()), d - 1);
        for (auto z : cd) EXPECT_EQ(z, Complex(0.0));
    }
    EXPECT_TRUE(critical_points(FiniteBlaschke({0.3})).empty());
}

TEST(CriticalPoints, DerivativeVanishes)
{
    corpus::Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        auto f = corpus::random_blaschke(rng, 2 + t % 8, 0.95, t % 2 == 0);
        auto c = critical_points(f);
        EXPECT_EQ(static_cast<int>(c.size()), f.degree() - 1);
        for (auto z : c) {
            EXPECT_LT(std::abs(z), 1.0);
            EXPECT_LT(std::abs(f.derivative(z)), 1e-9);
        }
    }
}

TEST(Frostman, Examples)
{
    FiniteBlaschke f = example_f();
    auto same = frostman_shift(f, 0.0);
    EXPECT_EQ(same.zeros(), f.zeros());
    auto sq = frostman_shift(FiniteBlaschke({0.0, 0.0}), 0.25);
    ASSERT_EQ(sq.degree(), 2);
    for (auto z : sq.zeros()) EXPECT_NEAR(std::abs(z), 0.5, 1e-14);
    EXPECT_NEAR(std::abs(sq.zeros()[0] + sq.zeros()[1]), 0.0, 1e-14);
    Complex z(0.1, 0.6);
    EXPECT_NEAR(std::abs(sq(z) - mobius(0.25, z * z)), 0.0, 1e-13);
}

TEST(Frostman, DegreeAndJensenIdentity)
{
    corpus::Rng rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        auto f = corpus::random_blaschke(rng, 1 + t % 7);
        Complex x = std::polar(0.9 * std::sqrt(u(rng)) + 0.01, kTwoPi * u(rng));
        auto g = frostman_shift(f, x);
        EXPECT_EQ(g.degree(), f.degree());
        double s = 0.0;
        for (auto y : g.zeros()) s += std::log(1.0 / std::abs(y));
        EXPECT_NEAR(s, std::log(1.0 / std::abs(x)), 1e-9);
        Complex z = std::polar(0.5, kTwoPi * u(rng));
        EXPECT_NEAR(std::abs(g(z) - mobius(x, f(z))), 0.0, 1e-10);
    }
}

TEST(Gamma, Examples)
{
    EXPECT_EQ(gamma(FiniteBlaschke({0.4}), Complex(0.1, 0.1)), 0.0);
    EXPECT_NEAR(gamma(FiniteBlaschke({0.0, 0.0}), 0.5), std::log(2.0), 1e-15);
    EXPECT_THROW(gamma(FiniteBlaschke({0.0, 0.0}), 0.0), NumericalError);
}

TEST(Gamma, MobiusInvariance)
{
    corpus::Rng rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        auto f = corpus::random_blaschke(rng, 3 + t % 4);
        Complex a = std::polar(0.8 * u(rng), kTwoPi * u(rng));
        auto mf = frostman_shift(f, a);
        Complex z = std::polar(0.7 * u(rng), kTwoPi * u(rng));
        EXPECT_NEAR(gamma(mf, z), gamma(f, z), 1e-8);
        EXPECT_GE(gamma(f, z), 0.0);
    }
}

TEST(Jensen, Examples)
{
    EXPECT_NEAR(jensen_entropy(example_f()), std::log(0.5 / (2.0 - std::sqrt(3.0))), 1e-13);
    EXPECT_NEAR(jensen_entropy(example_f()), 0.623811, 1e-6);
    EXPECT_EQ(jensen_entropy(FiniteBlaschke({0.0})), 0.0);
    // z T_a tends to z^2 as a → 0, and the entropy tends continuously to that of z^2.
    double prev_err = 1e9;
    for (double a : {0.5, 0.1, 0.01, 1e-3, 1e-5}) {
        double err = std::abs(jensen_entropy(FiniteBlaschke({0.0, a})) - std::log(2.0));
        EXPECT_LT(err, prev_err);
        prev_err = err;
    }
    EXPECT_LT(prev_err, 1e-6);
    EXPECT_THROW(jensen_entropy(FiniteBlaschke({0.0, 0.0})), ValidationError);
    EXPECT_THROW(jensen_entropy(FiniteBlaschke({0.3})), ValidationError);
}

TEST(Jensen, MatchesCircleQuadrature)
{
    EXPECT_NEAR(circle_entropy_quadrature(FiniteBlaschke({0.0})), 0.0, 1e-14);
    EXPECT_NEAR(circle_entropy_quadrature(FiniteBlaschke({0.0, 0.0})), std::log(2.0), 1e-13);
    EXPECT_NEAR(circle_entropy_quadrature(example_f()), jensen_entropy(example_f()), 1e-12);
    corpus::Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        auto f = corpus::random_blaschke(rng, 1 + t % 6);
        double j = jensen_entropy(f);
        EXPECT_NEAR(j, circle_entropy_quadrature(f), 1e-9);
        EXPECT_GE(j, -1e-12);
    }
}

TEST(Nevanlinna, GapEqualsSingularMass)
{
    InnerFunction b(FiniteBlaschke({0.3, Complex(-0.2, 0.6)}), {});
    EXPECT_NEAR(nevanlinna_gap(b).gap, 0.0, 1e-8);
    InnerFunction s(FiniteBlaschke(), {{0.0, 1.0}});
    EXPECT_NEAR(nevanlinna_gap(s).gap, 1.0, 1e-8);
    InnerFunction bs(FiniteBlaschke({0.5, 0.1}), {{1.0, 0.3}, {4.0, 0.45}});
    EXPECT_NEAR(nevanlinna_gap(bs).gap, 0.75, 1e-8);
}

TEST(InnerFunction, ValueMatchesModulusAndMeasure)
{
    meas::DiskMeasure w({{Complex(0.2, 0.1), 2.0}}, {{0.7, 0.4}});
    InnerFunction f = InnerFunction::from_measure(w);
    Complex z(-0.3, 0.5);
    EXPECT_NEAR(std::log(std::abs(f(z))), f.log_abs(z), 1e-13);
    EXPECT_NEAR(f.log_abs(z), log_abs_inner(w, z), 1e-13);
    EXPECT_THROW(InnerFunction::from_measure(meas::DiskMeasure::interior_point(0.1, 0.5)), ValidationError);
}
