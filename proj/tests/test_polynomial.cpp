#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "innerlab/polynomial.hpp"

using namespace innerlab;
using namespace innerlab::poly;

namespace {

void sort_roots(std::vector<Complex>& r)
{
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

}  // namespace

TEST(Roots, Quadratic)
{
    auto r = roots({-0.5, 2.0, -0.5});
    sort_roots(r);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0].real(), 2.0 - std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(r[1].real(), 2.0 + std::sqrt(3.0), 1e-13);
}

TEST(Roots, ExactZeroRootsAreDeflated)
{
    auto r = roots({0.0, 0.0, 0.0, 4.0});
    ASSERT_EQ(r.size(), 3u);
    for (auto z : r) EXPECT_EQ(z, Complex(0.0));
}

TEST(Roots, RandomPolynomialsRecoverRoots)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Complex> truth;
        for (int k = 0; k < 10; ++k) truth.push_back({2.0 * u(rng), 2.0 * u(rng)});
        auto r = roots(from_roots(truth));
        ASSERT_EQ(r.size(), truth.size());
        for (auto t : truth) {
            double best = 1e9;
            for (auto z : r) best = std::min(best, std::abs(z - t));
            EXPECT_LT(best, 1e-9);
        }
    }
}

TEST(Roots, DoubleRootIsClustered)
{
    Complex a(0.3, 0.2);
    auto r = roots(from_roots({a, a, Complex(-0.5, 0.1)}));
    int near = 0;
    for (auto z : r)
        if (std::abs(z - a) < 1e-7) ++near;
    EXPECT_EQ(near, 2);
}

TEST(Polynomial, Arithmetic)
{
    Poly p = multiply({1.0, 1.0}, {-1.0, 1.0});
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0], Complex(-1.0));
    EXPECT_EQ(p[1], Complex(0.0));
    EXPECT_EQ(p[2], Complex(1.0));
    Poly d = derivative(p);
    EXPECT_EQ(eval(d, 3.0), Complex(6.0));
    EXPECT_EQ(truncate(p, 1).size(), 2u);
}
