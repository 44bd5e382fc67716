#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "innerlab/measures.hpp"

using namespace innerlab;
using namespace innerlab::meas;

TEST(Masses, Examples)
{
    DiskMeasure empty;
    EXPECT_EQ(total_mass(empty), 0.0);
    EXPECT_EQ(blaschke_mass(empty), 0.0);
    DiskMeasure one = DiskMeasure::interior_point(0.0, 1.0);
    EXPECT_EQ(total_mass(one), 1.0);
    EXPECT_EQ(blaschke_mass(one), 1.0);
    DiskMeasure mixed({{Complex(0.9, 0.0), 2.0}}, {{1.0, 0.5}});
    EXPECT_NEAR(total_mass(mixed), 2.5, 1e-15);
    EXPECT_NEAR(blaschke_mass(mixed), 0.7, 1e-15);
}

TEST(Masses, MergesIdenticalLocationsAndValidates)
{
    DiskMeasure w({{Complex(0.3, 0.1), 1.0}, {Complex(0.3, 0.1), 2.0}}, {{0.5, 1.0}, {0.5 + kTwoPi, 0.25}});
    ASSERT_EQ(w.interior().size(), 1u);
    ASSERT_EQ(w.boundary().size(), 1u);
    EXPECT_DOUBLE_EQ(w.interior()[0].mass, 3.0);
    EXPECT_NEAR(w.boundary()[0].mass, 1.25, 1e-15);
    EXPECT_THROW(DiskMeasure({{Complex(1.0, 0.0), 1.0}}, {}), ValidationError);
    EXPECT_THROW(DiskMeasure({}, {{0.0, -1.0}}), ValidationError);
    EXPECT_THROW(DiskMeasure({}, {{0.0, 0.0}}), ValidationError);
}

TEST(StarMass, Examples)
{
    double e_pts[] = {0.0};
    bc::StarSpec star{bc::BCSet::from_points(e_pts), 1.0, 1.0, true};
    DiskMeasure inside({{Complex(0.9, 0.0), 2.0}, {Complex(0.1, 0.2), 1.0}}, {{0.0, 0.5}});
    EXPECT_NEAR(star_mass(inside, star), blaschke_mass(inside), 1e-15);
    Complex outside = std::polar(0.9, 0.3);
    DiskMeasure mixed = inside + DiskMeasure({{outside, 3.0}}, {{1.0, 0.25}});
    EXPECT_NEAR(star_mass(mixed, star), blaschke_mass(inside), 1e-15);
    EXPECT_NEAR(blaschke_mass(mixed) - star_mass(mixed, star), 0.3 + 0.25, 1e-15);
}

TEST(StarMass, NeverExceedsBlaschkeMass)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<InteriorAtom> in;
        std::vector<BoundaryAtom> bd;
        for (int k = 0; k < 6; ++k) in.push_back({std::polar(0.999 * std::sqrt(u(rng)), kTwoPi * u(rng)), u(rng) + 0.1});
        for (int k = 0; k < 4; ++k) bd.push_back({kTwoPi * u(rng), u(rng) + 0.1});
        DiskMeasure w(in, bd);
        std::vector<double> pts{bd[0].angle, bd[1].angle};
        bc::StarSpec star{bc::BCSet::from_points(pts), 1.0, u(rng) * 0.9 + 0.1, true};
        double s = star_mass(w, star);
        EXPECT_LE(s, blaschke_mass(w) + 1e-15);
        bool all_in = true;
        for (const auto& a : w.interior()) all_in = all_in && bc::star_contains(star, a.location);
        for (const auto& b : w.boundary()) all_in = all_in && bc::star_contains(star, std::polar(1.0, b.angle));
        if (all_in) EXPECT_NEAR(s, blaschke_mass(w), 1e-14);
        else EXPECT_LT(s, blaschke_mass(w));
    }
}

TEST(MaxStarMass, Examples)
{
    DiskMeasure w({}, {{0.0, 0.3}, {kPi, 0.7}});
    auto r = max_star_mass(w, std::log(2.0), StarMassMode::exact);
    EXPECT_NEAR(r.value, 1.0, 1e-15);
    EXPECT_TRUE(r.witness.contains(0.0));
    EXPECT_TRUE(r.witness.contains(kPi));
    auto s = max_star_mass(w, 0.5, StarMassMode::exact);
    EXPECT_NEAR(s.value, 0.7, 1e-15);
    EXPECT_TRUE(s.witness.contains(kPi));
    EXPECT_FALSE(s.witness.contains(0.0));
    auto g = max_star_mass(w, 0.5, StarMassMode::greedy);
    EXPECT_NEAR(g.value, 0.7, 1e-15);
    EXPECT_EQ(max_star_mass(DiskMeasure{}, 1.0, StarMassMode::exact).value, 0.0);
}

TEST(MaxStarMass, ExactDominatesGreedyAndIsMonotone)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<BoundaryAtom> bd;
        for (int k = 0; k < 10; ++k) bd.push_back({kTwoPi * u(rng), u(rng)});
        DiskMeasure w({}, bd);
        double prev = 0.0;
        for (double budget : {0.0, 0.3, 0.7, 1.2, 2.0, 3.0}) {
            auto e = max_star_mass(w, budget, StarMassMode::exact);
            auto g = max_star_mass(w, budget, StarMassMode::greedy);
            EXPECT_GE(e.value + 1e-15, g.value);
            EXPECT_GE(e.value + 1e-15, prev);
            EXPECT_LE(bc::entropy(e.witness), budget + 1e-12);
            EXPECT_LE(bc::entropy(g.witness), budget + 1e-12);
            prev = e.value;
        }
    }
}

TEST(MaxStarMass, ExactModeLimit)
{
    std::vector<BoundaryAtom> bd;
    for (int k = 0; k < 19; ++k) bd.push_back({0.1 * k, 1.0});
    EXPECT_THROW(max_star_mass(DiskMeasure({}, bd), 1.0, StarMassMode::exact), ValidationError);
}

TEST(MaxStarMass, DeterministicTieBreak)
{
    DiskMeasure w({}, {{0.0, 0.5}, {2.0, 0.5}, {4.0, 0.5}});
    auto a = max_star_mass(w, 0.1, StarMassMode::exact);
    auto b = max_star_mass(w, 0.1, StarMassMode::exact);
    EXPECT_EQ(a.atoms, b.atoms);
    ASSERT_EQ(a.atoms.size(), 1u);
    EXPECT_EQ(a.atoms[0], 0u);
}

TEST(Theta, SolvesDefiningEquation)
{
    for (int n : {32, 64, 128, 1000}) {
        for (double M : {0.1, 1.0, 10.0}) {
            double t = solve_theta(n, M);
            EXPECT_GT(t, 0.0);
            EXPECT_LT(t, std::exp(-1.0));
            EXPECT_NEAR(n * t * std::log(1.0 / t), M, 1e-12 * M);
        }
    }
}

TEST(Theta, UnsolvableWhenMassPerAtomTooLarge)
{
    // n θ log(1/θ) ≤ n/e, so M = 10 needs n ≥ 28.
    EXPECT_THROW(solve_theta(8, 10.0), ValidationError);
    EXPECT_THROW(solve_theta(16, 10.0), ValidationError);
    EXPECT_NO_THROW(solve_theta(28, 10.0));
}

TEST(Theta, ArcBoundForDiffuseMeasure)
{
    // Any arc of length θ_n/2 holds at most one atom, so
    // μ(I) ≤ 1/n = (1/M) θ_n log(1/θ_n) ≤ (3/M) |I| log(1/|I|) with |I| = θ_n/2 in radians.
    // For n = 32, M = 10 the atoms wrap past 2π and the spacing argument no longer applies.
    for (int n : {64, 256}) {
        for (double M : {1.0, 10.0}) {
            double t = solve_theta(n, M);
            DiskMeasure w = diffuse_measure(n, M);
            double len = t / 2.0;
            double worst = 0.0;
            for (const auto& b : w.boundary()) {
                double s = 0.0;
                for (const auto& c : w.boundary())
                    if (wrap_angle(c.angle - b.angle) < len) s += c.mass;
                worst = std::max(worst, s);
            }
            EXPECT_LE(worst, 1.0 / n + 1e-15);
            EXPECT_NEAR(1.0 / n, t * std::log(1.0 / t) / M, 1e-12);
            EXPECT_LE(1.0 / n, 3.0 / M * len * std::log(1.0 / len));
        }
    }
}

TEST(Classify, ConcentratingDiffuseMixed)
{
    ClassifyParams p;
    std::vector<DiskMeasure> conc(4, DiskMeasure::point_mass(0.0, 1.0));
    EXPECT_EQ(classify_sequence(conc, p).tag, SequenceTag::concentrating);

    std::vector<DiskMeasure> diffuse;
    for (int n : {32, 64, 128}) diffuse.push_back(diffuse_measure(n, 10.0));
    auto d = classify_sequence(diffuse, p);
    EXPECT_EQ(d.tag, SequenceTag::diffuse);
    for (const auto& row : d.cone_fractions)
        for (double f : row) {
            EXPECT_GE(f, 0.0);
            EXPECT_LE(f, 1.0);
        }

    std::vector<DiskMeasure> mixed;
    for (int n : {32, 64, 128})
        mixed.push_back(DiskMeasure::point_mass(0.0, 0.5) + diffuse_measure(n, 10.0).scaled(0.5));
    EXPECT_EQ(classify_sequence(mixed, p).tag, SequenceTag::mixed);
}
