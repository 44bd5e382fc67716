#include <gtest/gtest.h>

#include <cmath>

#include "innerlab/bergman.hpp"
#include "innerlab/corpus.hpp"
#include "innerlab/measures.hpp"

using namespace innerlab;
using namespace innerlab::bergman;

namespace {

inner::InnerFunction blaschke(std::vector<Complex> zeros, Complex rotation = 1.0)
{
    return inner::InnerFunction(inner::FiniteBlaschke(std::move(zeros), rotation), {});
}

inner::InnerFunction singular(std::vector<meas::BoundaryAtom> atoms)
{
    return inner::InnerFunction(inner::FiniteBlaschke(), std::move(atoms));
}

}  // namespace

TEST(BergmanNorm, Monomials)
{
    BergmanSpaceSpec spec;
    EXPECT_NEAR(bergman_norm([](Complex) { return Complex(1.0); }, spec).value, std::sqrt(kPi), 1e-12);
    EXPECT_NEAR(bergman_norm([](Complex z) { return z; }, spec).value, std::sqrt(kPi / 2.0), 1e-12);
    for (double alpha : {-0.5, 0.0, 1.5})
        for (double p : {1.0, 2.0, 3.0}) {
            BergmanSpaceSpec s{p, alpha, {}};
            for (int n : {0, 3, 10}) {
                auto rep = bergman_norm([n](Complex z) { return std::pow(z, n); }, s);
                EXPECT_NEAR(rep.value, monomial_norm(n, p, alpha), 1e-10) << p << " " << alpha << " " << n;
                EXPECT_FALSE(rep.divergent);
            }
        }
}

TEST(BergmanNorm, ModulusInvariantAndDivergenceFlag)
{
    BergmanSpaceSpec spec;
    auto f = [](Complex z) { return 1.0 / (1.3 - z); };
    double a = bergman_norm(f, spec).value;
    double b = bergman_norm([&](Complex z) { return std::polar(1.0, 0.7) * f(z); }, spec).value;
    EXPECT_NEAR(a, b, 1e-13);
    // 1/(1 - z) is not in A^2: the quadrature does not settle.
    EXPECT_TRUE(bergman_norm([](Complex z) { return 1.0 / (1.0 - z); }, spec).divergent);
    EXPECT_THROW(bergman_norm(f, BergmanSpaceSpec{0.5, 0.0, {}}), ValidationError);
    EXPECT_THROW(bergman_norm(f, BergmanSpaceSpec{2.0, -1.0, {}}), ValidationError);
}

TEST(LittlewoodPaley, Examples)
{
    auto one = h2_norm_and_lp(inner::FiniteBlaschke({0.0}));
    EXPECT_NEAR(one.h2_squared, 1.0, 1e-14);
    EXPECT_NEAR(one.lp, 1.0, 1e-12);
    auto two = h2_norm_and_lp(inner::FiniteBlaschke({0.0, 0.0}));
    EXPECT_NEAR(two.h2_squared, 1.0, 1e-14);
    EXPECT_NEAR(two.lp, 1.0, 1e-12);
    EXPECT_THROW(h2_norm_and_lp(inner::FiniteBlaschke({0.3})), ValidationError);
}

TEST(LittlewoodPaley, RandomCorpus)
{
    corpus::Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        auto F = corpus::random_blaschke(rng, 1 + i % 6);
        auto r = h2_norm_and_lp(F);
        EXPECT_NEAR(r.lp, r.h2_squared, 1e-6) << "sample " << i;
    }
}

TEST(DistanceToOne, OrthogonalMonomials)
{
    BergmanSpaceSpec spec;
    for (int m : {0, 5, 20, 60}) {
        auto r = distance_to_one({blaschke({0.0}), m}, spec);
        EXPECT_NEAR(r.value(), std::sqrt(kPi), 1e-10);
        EXPECT_FALSE(r.regularized);
    }
    EXPECT_NEAR(distance_to_one({blaschke({}), 5}, spec).value(), 0.0, 1e-7);
}

TEST(DistanceToOne, NonincreasingAndRotationInvariant)
{
    BergmanSpaceSpec spec;
    auto I = blaschke({0.5, Complex(-0.2, 0.6)});
    auto r = distance_to_one({I, 30}, spec);
    for (std::size_t k = 1; k < r.distances.size(); ++k) EXPECT_LE(r.distances[k], r.distances[k - 1] + 1e-15);
    auto rot = distance_to_one({blaschke({0.5, Complex(-0.2, 0.6)}, std::polar(1.0, 1.1)), 30}, spec);
    EXPECT_NEAR(rot.value(), r.value(), 1e-12);
    // Rotating the variable permutes the angular nodes up to quadrature error.
    Complex w = std::polar(1.0, 0.4);
    auto turned = distance_to_one({blaschke({0.5 * w, Complex(-0.2, 0.6) * w}), 30}, spec);
    EXPECT_NEAR(turned.value(), r.value(), 1e-9);
}

TEST(DistanceToOne, SingularAtomStaysPositive)
{
    BergmanSpaceSpec spec;
    auto s = singular({{0.0, 1.0}});
    double d10 = distance_to_one({s, 10}, spec).value();
    double d20 = distance_to_one({s, 20}, spec).value();
    double d40 = distance_to_one({s, 40}, spec).value();
    EXPECT_GE(d10, d20);
    EXPECT_GE(d20, d40);
    EXPECT_GT(d40, 1.3);
    EXPECT_LT(d10 - d40, 0.02);
    BergmanSpaceSpec fine = spec;
    fine.quad.radial_levels = 30;
    fine.quad.angular_levels = 15;
    fine.quad.n_theta = 1024;
    EXPECT_NEAR(distance_to_one({s, 40}, fine).value(), d40, 1e-4);
}

TEST(DistanceToOne, ConcentratingBlaschkeLadder)
{
    // (T_a)^n with a = 1 - 1/n tends to S_{δ_1} on compacts.
    BergmanSpaceSpec spec;
    spec.quad.focus = {0.0};
    double limit = distance_to_one({singular({{0.0, 1.0}}), 20}, BergmanSpaceSpec{}).value();
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {4, 16, 64, 256}) {
        std::vector<inner::Zero> z{{1.0 - 1.0 / n, n}};
        inner::InnerFunction I(inner::FiniteBlaschke::with_multiplicities(z), {});
        double gap = std::abs(distance_to_one({I, 20}, spec).value() - limit);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev, 2e-3);
}

TEST(DistanceToOne, DiffuseLadderDecreases)
{
    BergmanSpaceSpec spec;
    spec.quad.angular_levels = 1;
    spec.quad.order = 8;
    spec.quad.radial_levels = 12;
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {32, 64}) {
        auto mu = meas::diffuse_measure(n, 10.0);
        double d = distance_to_one({singular(mu.boundary()), 20}, spec).value();
        EXPECT_LT(d, prev - 0.05);
        prev = d;
    }
}

TEST(DistanceToOne, Validation)
{
    EXPECT_THROW(distance_to_one({blaschke({0.0}), 61}, {}), ValidationError);
    EXPECT_THROW(distance_to_one({blaschke({0.0}), 5}, BergmanSpaceSpec{1.0, 0.0, {}}), ValidationError);
}

TEST(Divide, TrivialCases)
{
    BergmanSpaceSpec spec;
    spec.quad.radial_levels = 16;
    auto e = bc::BCSet::from_points(std::vector<double>{0.3, 2.0});
    auto one = blaschke({});
    auto r = divide([](Complex z) { return 1.0 + z; }, one, e, 0.5, spec);
    EXPECT_LE(r.ratio, 1.0);
    EXPECT_EQ(r.skipped, 0u);
    auto I = blaschke({0.2, Complex(0.0, -0.5)});
    auto s = divide([&](Complex z) { return I(z); }, I, e, 0.5, spec);
    EXPECT_TRUE(std::isfinite(s.norm_divided));
    EXPECT_GT(s.norm_divided, 0.0);
    EXPECT_THROW(divide([](Complex) { return Complex(1.0); }, one, e, 0.0, spec), ValidationError);
}

TEST(Divide, RatioBoundedOnCorpus)
{
    // Frozen from the seed-11 corpus: largest ratio 0.4203 at δ = 0.25, times 1.05.
    const double frozen = 0.4413;
    corpus::Rng rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    BergmanSpaceSpec spec;
    spec.quad.radial_levels = 16;
    for (int c = 0; c < 6; ++c) {
        std::vector<double> pts;
        for (int i = 0; i < 2 + c % 3; ++i) pts.push_back(kTwoPi * U(rng));
        auto e = bc::BCSet::from_points(pts);
        bc::StarSpec star{e, 1.0, 1.0, true};
        std::vector<Complex> zs;
        while (zs.size() < 3) {
            Complex z = std::polar(std::sqrt(U(rng)) * 0.98, kTwoPi * U(rng));
            if (bc::star_contains(star, z)) zs.push_back(z);
        }
        auto I = blaschke(zs);
        auto f = [&](Complex z) { return (1.0 + 0.5 * z) * I(z); };
        double r_half = divide(f, I, e, 0.5, spec).ratio;
        double r_quarter = divide(f, I, e, 0.25, spec).ratio;
        EXPECT_LE(r_quarter, frozen) << "corpus " << c;
        EXPECT_LE(r_half, r_quarter) << "corpus " << c;
    }
}

TEST(Beta, MonomialDecay)
{
    EXPECT_NEAR(monomial_norm(0, 2.0, 0.0), std::sqrt(kPi), 1e-14);
    EXPECT_NEAR(monomial_norm(1, 2.0, 0.0), std::sqrt(kPi / 2.0), 1e-14);
    for (double p : {1.0, 2.0, 4.0})
        for (double alpha : {-0.5, 0.0, 2.0}) {
            auto b = admissible_beta(p, alpha);
            EXPECT_DOUBLE_EQ(b.beta, (alpha + 1.0) / p);
            for (int n : {1, 10, 1000, 1000000}) EXPECT_LE(monomial_norm(n, p, alpha) * std::pow(n, b.beta), b.constant * (1 + 1e-12));
        }
    EXPECT_THROW(admissible_beta(0.5, 0.0), ValidationError);
}

TEST(DRecursion, Values)
{
    EXPECT_DOUBLE_EQ(d_recursion({}, 1.0), 0.0);
    EXPECT_NEAR(d_recursion({256.0}, 1.0), 0.024803, 1e-6);
    EXPECT_NEAR(d_recursion({4.0, 16.0}, 1.0), std::pow(4.0, 1.0 / 3) * std::pow(16.0, -2.0 / 3) + std::pow(4.0, -2.0 / 3), 1e-15);
    double prev = std::numeric_limits<double>::infinity();
    for (double n : {2.0, 4.0, 16.0, 256.0}) {
        std::vector<double> ns{n, n * n, std::pow(n, 4.0), std::pow(n, 8.0)};
        double d = d_recursion(ns, 1.0);
        EXPECT_LT(d, prev);
        prev = d;
    }
    EXPECT_LT(prev, 0.03);
    EXPECT_THROW(d_recursion({0.0}, 1.0), ValidationError);
    EXPECT_THROW(d_recursion({1.0}, -1.0), ValidationError);
    EXPECT_THROW(d_recursion({1.0, 1e-300}, 3.0), NumericalError);
}
