#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "innerlab/common.hpp"
#include "innerlab/inner.hpp"
#include "innerlab/measures.hpp"

namespace innerlab::gce {

/// Polar grid on D_r: a center node plus n_r rings at ρ_i = r (1 - (1 - i/n_r)^2), n_θ nodes per ring.
/// Ring n_r is the boundary circle.
class PolarGrid {
public:
    PolarGrid(double radius, int n_r, int n_theta);

    double radius() const { return radius_; }
    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    double rho(int i) const { return rho_[static_cast<std::size_t>(i)]; }
    double theta(int j) const { return j * dtheta(); }
    double dtheta() const { return kTwoPi / n_theta_; }

    std::size_t size() const { return 1 + static_cast<std::size_t>(n_r_) * n_theta_; }
    /// Center plus rings 1..n_r-1; these come first in the node order.
    std::size_t interior_size() const { return 1 + static_cast<std::size_t>(n_r_ - 1) * n_theta_; }
    std::size_t index(int i, int j) const {
        return i == 0 ? 0 : 1 + static_cast<std::size_t>(i - 1) * n_theta_ + static_cast<std::size_t>(j);
    }
    Complex node(std::size_t k) const;
    int ring_of(std::size_t k) const { return k == 0 ? 0 : 1 + static_cast<int>((k - 1) / n_theta_); }

private:
    double radius_;
    int n_r_;
    int n_theta_;
    std::vector<double> rho_;
};

struct GridSpec {
    int n_r = 128;
    int n_theta = 256;
};

/// Analytic part ψ of a split solution u = ψ + v.
class Reference {
public:
    virtual ~Reference() = default;
    /// ψ(z); -inf at singular points.
    virtual double value(Complex z) const = 0;
    /// Δψ away from the singular atoms.
    virtual double source(Complex z) const = 0;
    /// Largest radius on which ψ is defined.
    virtual double domain_radius() const { return 1.0; }
    /// Singular interior atoms of ψ.
    virtual std::vector<meas::InteriorAtom> atoms() const { return {}; }
};

using ReferencePtr = std::shared_ptr<const Reference>;

/// ψ ≡ 0.
ReferencePtr zero_reference();
/// ψ = -Σ m̃ G_r(·, a), the Green potential of D_r with zero boundary values.
ReferencePtr green_reference(std::vector<meas::InteriorAtom> atoms, double r);
/// ψ = u_D + log|I_ω|, a subsolution of Δu = 4e^{2u} + 2πν̃.
ReferencePtr inner_subsolution(const meas::DiskMeasure& w);

/// u = ψ + v with v sampled at the grid nodes.
class GridFunction {
public:
    GridFunction(PolarGrid grid, std::vector<double> smooth, ReferencePtr reference);

    const PolarGrid& grid() const { return grid_; }
    const std::vector<double>& smooth() const { return smooth_; }
    const ReferencePtr& reference() const { return reference_; }
    /// Nodes where the value is set by convention rather than by evaluation.
    const std::vector<std::size_t>& flagged() const { return flagged_; }
    void set_flagged(std::vector<std::size_t> nodes) { flagged_ = std::move(nodes); }

    double node_value(std::size_t k) const;
    std::vector<double> node_values() const;
    /// Interpolated smooth part: cubic in ρ (continued through the center), cubic periodic in θ.
    double smooth_at(Complex z) const;
    double operator()(Complex z) const;
    /// e^{2u(z)}.
    double exp2(Complex z) const;

private:
    PolarGrid grid_;
    std::vector<double> smooth_;
    ReferencePtr reference_;
    std::vector<std::size_t> flagged_;
};

/// ψ = u1 + log|I_ω|, for a solution u1 of Δu = 4e^{2u} + 2πν̃1.
ReferencePtr shifted_solution(std::shared_ptr<const GridFunction> u1, const meas::DiskMeasure& w);

struct NewtonOptions {
    double tol = 1e-9;
    int max_iterations = 60;
};

struct SolveInfo {
    int iterations = 0;
    double residual = 0.0;
};

/// Harmonic extension of boundary samples h_j = h(θ_j): the discrete harmonic function of the solver stencil.
GridFunction harmonic_extension(std::span<const double> h, const PolarGrid& grid);

/// (1/2π) Σ m̃ G_r(z, a); nodes at an atom drop that atom's term and are flagged.
GridFunction green_potential(const std::vector<meas::InteriorAtom>& atoms, const PolarGrid& grid);

/// Discrete five-point polar Laplacian (finite-volume form) at interior nodes; zero at boundary nodes.
std::vector<double> discrete_laplacian(const PolarGrid& grid, std::span<const double> values);

struct GceProblem {
    PolarGrid grid;
    std::vector<meas::InteriorAtom> sources;
    std::vector<double> boundary;  // h at the n_θ boundary nodes
};

/// Solves Δu = 4e^{2u} + 2πν̃ on the grid disk with u = h on the boundary.
GridFunction solve_dirichlet(const GceProblem& p, const NewtonOptions& opt = {}, SolveInfo* info = nullptr);

/// Solves Δ(ψ + v) = 4e^{2(ψ+v)} for v on D_r, given v on the boundary ring.
GridFunction solve_split(const PolarGrid& grid, ReferencePtr reference, std::span<const double> v_boundary,
                         const NewtonOptions& opt = {}, SolveInfo* info = nullptr);

/// Largest scaled residual |Δ_h v - 4 e^{2u} + Δψ| / (1 + 4 e^{2u} + |Δψ|) over interior nodes,
/// with an allowance for the rounding floor of the flux sum at tolerance `tol`.
double residual_norm(const GridFunction& u, double tol = NewtonOptions{}.tol);

/// Λ_r[u_sub]: the solution on D_r agreeing with the subsolution u_sub on ∂D_r.
GridFunction perron_hull_r(ReferencePtr sub, double r, GridSpec spec = {}, const NewtonOptions& opt = {},
                           SolveInfo* info = nullptr);

struct LadderOptions {
    int k_min = 3;
    int k_max = 7;
    GridSpec grid{};
    double probe_radius = 0.8;
    double increment_tol = 1e-4;
    NewtonOptions newton{};
};

struct LadderResult {
    std::vector<double> radii;
    std::vector<std::shared_ptr<const GridFunction>> hulls;
    /// sup over the probe set of Λ_{r_k} - Λ_{r_{k-1}}, one entry per rung after the first.
    std::vector<double> increments;
    /// Λ_K + (Λ_K - Λ_{K-1}) / 3 on the grid of rung K-1 (error of Λ_r is quadratic in 1 - r).
    std::shared_ptr<const GridFunction> extrapolated;
    bool converged = false;
    /// Circle averages of u_D - u at the ladder radii below the last rung.
    std::vector<double> deficiency_radii;
    std::vector<double> deficiency;

    double operator()(Complex z) const { return (*extrapolated)(z); }
};

/// Perron hulls of `sub` along r_k = 1 - 2^{-k}, k = k_min..k_max, then Richardson extrapolation in (1 - r)^2.
LadderResult hull_ladder(ReferencePtr sub, const LadderOptions& opt = {});

/// u_ω = Λ^{ν̃}[u_D + log|I_ω|] with deficiency report.
LadderResult nearly_maximal(const meas::DiskMeasure& w, const LadderOptions& opt = {});

/// Probe points: the center and `rings` circles of radius R k / rings with `per_ring` points each.
std::vector<Complex> disk_probes(double R, int rings = 16, int per_ring = 64);

/// Radial solution of u'' + u'/ρ = 4e^{2u} on D_r with u(r) = C.
class RadialSolution {
public:
    RadialSolution(double r, double C, double u0, std::vector<double> rho, std::vector<double> u,
                   std::vector<double> du);
    double radius() const { return r_; }
    double boundary_value() const { return C_; }
    double center_value() const { return u0_; }
    double operator()(double rho) const;
    double operator()(Complex z) const { return (*this)(std::abs(z)); }
    GridFunction on_grid(GridSpec spec) const;

private:
    double r_;
    double C_;
    double u0_;
    std::vector<double> rho_;
    std::vector<double> u_;
    std::vector<double> du_;
};

RadialSolution radial_solution(double r, double C);
/// Boundary profile (4/5) u_D(r).
RadialSolution radial_solution_four_fifths(double r);

struct Fund3Report {
    double sup_difference = 0.0;
    LadderResult lhs;
    LadderResult rhs;
};

/// Compares u_{ω1+ω2} with Λ^{ν̃1+ν̃2}[u_{ω1} + log|I_{ω2}|] on |z| ≤ probe_radius.
/// All three ladders run to k_max so both sides share the same radii; increment_tol is ignored.
Fund3Report check_fund3(const meas::DiskMeasure& w1, const meas::DiskMeasure& w2, const LadderOptions& opt = {});

/// log(|F'| / (1 - |F|^2)) at the nodes; critical-point nodes get -inf and are flagged.
std::vector<double> liouville_pullback(const inner::FiniteBlaschke& f, const PolarGrid& grid,
                                       std::vector<std::size_t>* flagged = nullptr);
double liouville_pullback(const inner::FiniteBlaschke& f, Complex z);

struct DiffuseRow {
    int n = 0;
    double M = 0.0;
    double theta = 0.0;
    double u_at_0 = 0.0;
    double gap = 0.0;  // |u(0) - u_D(0)|
};

/// u_{μ_{n,M}}(0) for each (n, M); throws ValidationError when θ_n has no solution.
std::vector<DiffuseRow> diffuse_experiment(const std::vector<int>& ns, const std::vector<double>& Ms,
                                           const LadderOptions& opt = {});

}  // namespace innerlab::gce
