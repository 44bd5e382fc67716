#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "innerlab/corpus.hpp"
#include "innerlab/gce.hpp"
#include "innerlab/roberts.hpp"

using namespace innerlab;
using gce::GridSpec;
using gce::LadderOptions;
using gce::PolarGrid;

namespace {

double sup_error_vs(const gce::GridFunction& u, double (*exact)(Complex), double max_radius)
{
    double e = 0.0;
    for (std::size_t k = 0; k < u.grid().size(); ++k) {
        Complex z = u.grid().node(k);
        if (std::abs(z) > max_radius) continue;
        e = std::max(e, std::abs(u.node_value(k) - exact(z)));
    }
    return e;
}

double liouville2(Complex z)
{
    double r = std::abs(z);
    return std::log(2.0 * r / (1.0 - std::pow(r, 4)));
}

double u_d(Complex z) { return u_disk(z); }

std::vector<double> boundary_samples(const PolarGrid& g, double (*h)(Complex))
{
    std::vector<double> out(static_cast<std::size_t>(g.n_theta()));
    for (int j = 0; j < g.n_theta(); ++j) out[static_cast<std::size_t>(j)] = h(g.node(g.index(g.n_r(), j)));
    return out;
}

class SupersolutionReference final : public gce::Reference {
public:
    double value(Complex z) const override { return u_disk(z) + 1.0; }
    double source(Complex z) const override
    {
        double d = 1.0 - std::norm(z);
        return 4.0 / (d * d);
    }
};

}  // namespace

TEST(PolarGrid, GradedTowardBoundary)
{
    PolarGrid g(0.9, 16, 32);
    EXPECT_DOUBLE_EQ(g.rho(0), 0.0);
    EXPECT_DOUBLE_EQ(g.rho(16), 0.9);
    EXPECT_LT(g.rho(16) - g.rho(15), g.rho(1) - g.rho(0));
    EXPECT_EQ(g.size(), 1u + 16u * 32u);
    EXPECT_EQ(g.ring_of(g.index(5, 3)), 5);
    EXPECT_NEAR(std::abs(g.node(g.index(16, 7))), 0.9, 1e-15);
    EXPECT_THROW(PolarGrid(0.9, 4, 32), ValidationError);
    EXPECT_THROW(PolarGrid(0.9, 16, 33), ValidationError);
    EXPECT_THROW(PolarGrid(1.5, 16, 32), ValidationError);
}

TEST(GridFunction, InterpolatesSmoothFunctions)
{
    PolarGrid g(0.9, 32, 64);
    std::vector<double> v(g.size());
    auto f = [](Complex z) { return std::exp(z.real()) * std::cos(2.0 * z.imag()); };
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.node(k));
    gce::GridFunction u(g, v, gce::zero_reference());
    for (Complex z : {Complex(0.0, 0.0), Complex(0.013, -0.02), Complex(-0.4, 0.31), Complex(0.0, 0.899)})
        EXPECT_NEAR(u(z), f(z), 2e-5);
    EXPECT_THROW(u(Complex(0.95, 0.0)), ValidationError);
}

TEST(HarmonicExtension, ConstantAndMaximumPrinciple)
{
    PolarGrid g(0.9, 24, 48);
    std::vector<double> h(48, 2.5);
    auto u = gce::harmonic_extension(h, g);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(u.node_value(k), 2.5, 1e-12);

    corpus::Rng rng(7);
    std::uniform_real_distribution<double> d(-1.0, 3.0);
    for (double& x : h) x = d(rng);
    auto w = gce::harmonic_extension(h, g);
    double lo = *std::min_element(h.begin(), h.end()), hi = *std::max_element(h.begin(), h.end());
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_GE(w.node_value(k), lo - 1e-12);
        EXPECT_LE(w.node_value(k), hi + 1e-12);
    }
}

TEST(HarmonicExtension, LinearAndPoissonData)
{
    PolarGrid g(1.0, 64, 128);
    auto re = gce::harmonic_extension(boundary_samples(g, [](Complex z) { return z.real(); }), g);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(re.node_value(k) - g.node(k).real()));
    EXPECT_LT(err, 1e-3);

    PolarGrid g9(0.9, 128, 256);
    auto p = gce::harmonic_extension(
        boundary_samples(g9, [](Complex z) { return inner::poisson_kernel(z, 0.0); }), g9);
    for (Complex z : {Complex(0.0, 0.0), Complex(0.3, 0.2), Complex(-0.5, 0.1), Complex(0.7, 0.0)}) {
        double exact = inner::poisson_kernel(z, 0.0);
        EXPECT_NEAR(p(z), exact, 2e-3 * exact) << z;
    }
}

TEST(GreenPotential, SingleAtomAndLinearity)
{
    PolarGrid g(1.0, 32, 64);
    auto u = gce::green_potential({{0.0, kTwoPi}}, g);
    ASSERT_EQ(u.flagged().size(), 1u);
    EXPECT_EQ(u.flagged()[0], 0u);
    for (std::size_t k = 1; k < g.size(); ++k) EXPECT_NEAR(u.node_value(k), -std::log(std::abs(g.node(k))), 1e-12);

    PolarGrid h(0.9, 32, 64);
    meas::InteriorAtom a{Complex(0.2, 0.1), 1.5}, b{Complex(-0.3, 0.4), 0.7};
    auto ga = gce::green_potential({a}, h), gb = gce::green_potential({b}, h), gab = gce::green_potential({a, b}, h);
    for (std::size_t k = 0; k < h.size(); ++k)
        EXPECT_NEAR(gab.node_value(k), ga.node_value(k) + gb.node_value(k), 1e-12);
    for (int j = 0; j < h.n_theta(); ++j) EXPECT_NEAR(gab.node_value(h.index(h.n_r(), j)), 0.0, 1e-12);
}

TEST(GreenPotential, DiscreteLaplacianVanishesAwayFromAtoms)
{
    const Complex a(0.3, 0.2);
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        PolarGrid g(0.9, n, 2 * n);
        auto u = gce::green_potential({{a, 2.0}}, g);
        auto lap = gce::discrete_laplacian(g, u.node_values());
        double worst = 0.0;
        for (std::size_t k = 0; k < g.interior_size(); ++k)
            if (std::abs(g.node(k) - a) > 0.1) worst = std::max(worst, std::abs(lap[k]));
        if (prev > 0.0) EXPECT_GT(prev / worst, 3.0);
        prev = worst;
    }
    EXPECT_LT(prev, 0.5);
    PolarGrid g(0.9, 16, 32);
    EXPECT_THROW(gce::green_potential({{Complex(0.95, 0.0), 1.0}}, g), ValidationError);
}

TEST(SolveDirichlet, ReproducesMaximalSolution)
{
    PolarGrid g(0.9, 128, 256);
    gce::SolveInfo info;
    auto u = gce::solve_dirichlet({g, {}, boundary_samples(g, u_d)}, {}, &info);
    EXPECT_LE(info.residual, 1e-9);
    EXPECT_LT(sup_error_vs(u, u_d, 0.9), 1e-4);
    EXPECT_NEAR(u(0.0), 0.0, 1e-4);
    EXPECT_NEAR(u(0.5), 0.287682, 1e-4);
    EXPECT_LE(gce::residual_norm(u), 1e-9);
}

TEST(SolveDirichlet, RefinementReducesError)
{
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        PolarGrid g(0.9, n, 2 * n);
        auto u = gce::solve_dirichlet({g, {}, boundary_samples(g, u_d)});
        double e = sup_error_vs(u, u_d, 0.9);
        if (prev > 0.0) EXPECT_GE(prev / e, 1.5) << n;
        prev = e;
    }
}

TEST(SolveDirichlet, LiouvillePullbackOfZSquared)
{
    PolarGrid g(0.9, 128, 256);
    auto u = gce::solve_dirichlet({g, {{0.0, 1.0}}, boundary_samples(g, liouville2)});
    ASSERT_EQ(u.flagged().size(), 1u);
    double e = 0.0;
    for (std::size_t k = 1; k < g.size(); ++k) e = std::max(e, std::abs(u.node_value(k) - liouville2(g.node(k))));
    EXPECT_LT(e, 1e-4);
}

TEST(SolveDirichlet, MonotoneInData)
{
    corpus::Rng rng(11);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    PolarGrid g(0.9, 48, 96);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> h1(96), h2(96);
        for (int j = 0; j < 96; ++j) {
            h1[static_cast<std::size_t>(j)] = 2.0 * d(rng) - 1.0;
            h2[static_cast<std::size_t>(j)] = h1[static_cast<std::size_t>(j)] + 0.5 * d(rng);
        }
        meas::InteriorAtom common{std::polar(0.6 * d(rng), kTwoPi * d(rng)), 0.5 + d(rng)};
        meas::InteriorAtom extra{std::polar(0.6 * d(rng), kTwoPi * d(rng)), d(rng)};
        auto u1 = gce::solve_dirichlet({g, {common, extra}, h1});
        auto u2 = gce::solve_dirichlet({g, {common}, h2});
        for (std::size_t k = 0; k < g.size(); ++k) EXPECT_LE(u1.node_value(k), u2.node_value(k) + 1e-6);
    }
}

TEST(SolveDirichlet, RejectsInvalidProblems)
{
    PolarGrid g(0.9, 16, 32);
    std::vector<double> h(32, 0.0);
    EXPECT_THROW(gce::solve_dirichlet({g, {{0.95, 1.0}}, h}), ValidationError);
    EXPECT_THROW(gce::solve_dirichlet({g, {}, std::vector<double>(31, 0.0)}), ValidationError);
    h[3] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(gce::solve_dirichlet({g, {}, h}), ValidationError);
}

TEST(PerronHull, DominatesSubsolutionAndIdempotent)
{
    meas::DiskMeasure w({{Complex(0.3, -0.2), 1.0}}, {{1.0, 0.4}});
    auto sub = gce::inner_subsolution(w);
    GridSpec spec{64, 128};
    auto hull = std::make_shared<const gce::GridFunction>(gce::perron_hull_r(sub, 0.95, spec));
    for (std::size_t k = 0; k < hull->grid().size(); ++k) {
        EXPECT_GE(hull->smooth()[k], -1e-9);
        EXPECT_LE(hull->node_value(k), u_disk(hull->grid().node(k)) + 1e-6);
    }
    auto again = gce::perron_hull_r(gce::shifted_solution(hull, {}), 0.95, spec);
    for (std::size_t k = 0; k < again.grid().size(); ++k) EXPECT_NEAR(again.smooth()[k], 0.0, 1e-9);
    EXPECT_THROW(gce::perron_hull_r(std::make_shared<SupersolutionReference>(), 0.9, spec), ValidationError);
}

TEST(PerronHull, MonotoneInRadius)
{
    meas::DiskMeasure w({{0.0, 1.0}}, {{2.0, 0.3}});
    auto sub = gce::inner_subsolution(w);
    GridSpec spec{64, 128};
    auto small = gce::perron_hull_r(sub, 0.9, spec);
    auto big = gce::perron_hull_r(sub, 0.97, spec);
    for (std::size_t k = 0; k < small.grid().size(); ++k) {
        Complex z = small.grid().node(k);
        EXPECT_LE(small.smooth()[k], big.smooth_at(z) + 1e-6);
    }
}

TEST(PerronHull, LiouvilleLimit)
{
    auto sub = gce::inner_subsolution(meas::DiskMeasure::interior_point(0.0, 1.0));
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {0.9, 0.97, 0.99}) {
        auto h = gce::perron_hull_r(sub, r, {96, 192});
        double e = 0.0;
        for (Complex z : gce::disk_probes(0.8))
            if (z != 0.0) e = std::max(e, std::abs(h(z) - liouville2(z)));
        EXPECT_LT(e, prev);
        prev = e;
    }
    EXPECT_LT(prev, 5e-3);
}

TEST(NearlyMaximal, LiouvilleDegreeTwo)
{
    auto res = gce::nearly_maximal(meas::DiskMeasure::interior_point(0.0, 1.0));
    EXPECT_TRUE(res.converged);
    double e = 0.0;
    for (Complex z : gce::disk_probes(0.8))
        if (z != 0.0) e = std::max(e, std::abs(res(z) - liouville2(z)));
    EXPECT_LT(e, 1e-3);
    for (double inc : res.increments) EXPECT_GE(inc, 0.0);
}

TEST(NearlyMaximal, ZeroMeasureGivesMaximalSolution)
{
    LadderOptions opt;
    opt.grid = {64, 128};
    auto res = gce::nearly_maximal(meas::DiskMeasure{}, opt);
    for (Complex z : gce::disk_probes(0.8)) EXPECT_NEAR(res(z), u_disk(z), 1e-6);
}

TEST(NearlyMaximal, BoundaryDeficiencyApproachesMass)
{
    LadderOptions opt;
    opt.k_max = 10;
    opt.increment_tol = 0.0;
    auto res = gce::nearly_maximal(meas::DiskMeasure::point_mass(0.0, 1.0), opt);
    ASSERT_GE(res.deficiency.size(), 5u);
    for (std::size_t i = 1; i < res.deficiency.size(); ++i) EXPECT_GT(res.deficiency[i], res.deficiency[i - 1]);
    EXPECT_GT(res.deficiency.back(), 0.9);
    EXPECT_LT(res.deficiency.back(), 1.0 + 1e-3);
}

TEST(NearlyMaximal, MaximalityAndMonotonicity)
{
    corpus::Rng rng(21);
    corpus::MeasureShape shape{2, 2, 0.0, 0.7, 0.6};
    LadderOptions opt;
    opt.grid = {48, 96};
    opt.k_max = 6;
    opt.increment_tol = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        auto w1 = corpus::random_measure(rng, shape);
        auto w2 = w1 + corpus::random_measure(rng, shape);
        auto u1 = gce::nearly_maximal(w1, opt);
        auto u2 = gce::nearly_maximal(w2, opt);
        const auto& g = u1.extrapolated->grid();
        for (std::size_t k = 0; k < g.size(); ++k) {
            double a = u1.extrapolated->node_value(k), b = u2.extrapolated->node_value(k);
            EXPECT_GE(a, b - 1e-6);
            EXPECT_LE(a, u_disk(g.node(k)) + 1e-6);
        }
    }
}

TEST(RadialSolution, MatchesClosedForm)
{
    for (double r : {0.5, 0.9, 0.99})
        for (double C : {-1.0, 0.3, 2.0}) {
            auto u = gce::radial_solution(r, C);
            // u = log(λ / (1 - λ² ρ²)) with λ = e^{u(0)}.
            double lam = std::exp(u.center_value());
            EXPECT_NEAR(std::log(lam / (1.0 - lam * lam * r * r)), C, 1e-9);
            for (double rho : {0.0, 0.3 * r, 0.77 * r, r})
                EXPECT_NEAR(u(rho), std::log(lam / (1.0 - lam * lam * rho * rho)), 1e-9);
        }
}

TEST(RadialSolution, MaximalBoundaryValueAndMonotonicity)
{
    auto u = gce::radial_solution(0.9, u_disk(0.9));
    EXPECT_NEAR(u.center_value(), 0.0, 1e-10);
    for (double rho : {0.2, 0.6, 0.85}) EXPECT_LE(u(rho), u_disk(rho) + 1e-9);
    auto lo = gce::radial_solution(0.9, 0.5), hi = gce::radial_solution(0.9, 0.8);
    for (double rho : {0.0, 0.4, 0.9}) EXPECT_LT(lo(rho), hi(rho));
    double prev = -std::numeric_limits<double>::infinity();
    for (double r : {0.9, 0.99, 0.999, 0.9999}) {
        auto v = gce::radial_solution_four_fifths(r);
        EXPECT_LT(v.center_value(), 0.0);
        EXPECT_GT(v.center_value(), prev);
        prev = v.center_value();
    }
    EXPECT_GT(prev, -0.01);
    auto grid = u.on_grid({16, 32});
    const auto& gg = grid.grid();
    EXPECT_NEAR(grid.node_value(gg.index(9, 4)), u(gg.rho(9)), 1e-12);
    EXPECT_NEAR(grid(0.5), u(0.5), 1e-4);
    EXPECT_THROW(gce::radial_solution(0.9, std::numeric_limits<double>::infinity()), ValidationError);
}

TEST(Fund3, ZeroSecondMeasure)
{
    LadderOptions opt;
    opt.grid = {64, 128};
    meas::DiskMeasure w1({{Complex(0.2, 0.3), 1.0}}, {{0.5, 0.2}});
    auto rep = gce::check_fund3(w1, {}, opt);
    EXPECT_LT(rep.sup_difference, 5e-3);
}

TEST(Fund3, HalvesOfOriginAtom)
{
    auto half = meas::DiskMeasure::interior_point(0.0, 0.5);
    auto rep = gce::check_fund3(half, half);
    EXPECT_LT(rep.sup_difference, 5e-3);
    double e = 0.0;
    for (Complex z : gce::disk_probes(0.8))
        if (z != 0.0) e = std::max(e, std::abs(rep.lhs(z) - liouville2(z)));
    EXPECT_LT(e, 1e-3);
}

TEST(LiouvillePullback, Examples)
{
    PolarGrid g(0.95, 16, 32);
    inner::FiniteBlaschke id({0.0});
    auto u = gce::liouville_pullback(id, g);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(u[k], u_disk(g.node(k)), 1e-12);

    inner::FiniteBlaschke sq({0.0, 0.0});
    EXPECT_NEAR(gce::liouville_pullback(sq, 0.5), 0.0645385, 1e-7);
    std::vector<std::size_t> flagged;
    auto v = gce::liouville_pullback(sq, g, &flagged);
    ASSERT_EQ(flagged.size(), 1u);
    EXPECT_EQ(flagged[0], 0u);
    EXPECT_TRUE(std::isinf(v[0]));

    inner::FiniteBlaschke mob({Complex(0.4, -0.3)}, std::polar(1.0, 0.7));
    for (Complex z : {Complex(0.1, 0.2), Complex(-0.6, 0.5), Complex(0.0, -0.9)})
        EXPECT_NEAR(gce::liouville_pullback(mob, z), u_disk(z), 1e-10);
}

TEST(DiffuseExperiment, LargerMassParameterIsCloserToMaximal)
{
    LadderOptions opt;
    opt.k_max = 12;
    opt.increment_tol = 0.0;
    auto rows = gce::diffuse_experiment({64}, {0.1, 10.0}, opt);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_LT(rows[1].gap, rows[0].gap);
    EXPECT_THROW(gce::diffuse_experiment({8}, {10.0}, opt), ValidationError);
}

TEST(DiffuseExperiment, SingleAtomMatchesNearlyMaximal)
{
    LadderOptions opt;
    opt.grid = {48, 96};
    opt.k_max = 6;
    auto rows = gce::diffuse_experiment({1}, {0.3}, opt);
    auto direct = gce::nearly_maximal(meas::diffuse_measure(1, 0.3), opt);
    EXPECT_DOUBLE_EQ(rows[0].u_at_0, direct(0.0));
}

TEST(DiffuseExperiment, ScaledMeasureIsCloserToMaximal)
{
    LadderOptions opt;
    opt.grid = {64, 128};
    opt.k_max = 8;
    auto mu = meas::diffuse_measure(32, 1.0);
    double full = std::abs(gce::nearly_maximal(mu, opt)(0.0));
    double half = std::abs(gce::nearly_maximal(mu.scaled(0.5), opt)(0.0));
    EXPECT_LT(half, full);
}

TEST(LayeredLowerBound, ExceedsFourFifthsRadialSolution)
{
    corpus::Rng rng(5);
    corpus::MeasureShape shape{3, 6, 0.8, 0.999, 0.05};
    roberts::RobertsParams p;
    p.c = 0.05;
    p.n2 = 16;
    p.max_generation = 4;
    LadderOptions opt;
    opt.grid = {64, 128};
    opt.k_max = 9;
    const double r0 = 1.0 - 1.0 / 2.0;
    auto radial = gce::radial_solution_four_fifths(r0);
    for (int trial = 0; trial < 2; ++trial) {
        auto dec = roberts::decompose(corpus::random_measure(rng, shape), p);
        meas::DiskMeasure layered;
        for (const auto& l : dec.layers) layered = layered + l;
        auto u = gce::nearly_maximal(layered, opt);
        for (Complex z : gce::disk_probes(r0 * 0.999, 8, 32)) EXPECT_GT(u(z), radial(z));
    }
}
