#include "innerlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "innerlab/roberts.hpp"

namespace innerlab::meas {

namespace {

bool less_location(const Complex& a, const Complex& b)
{
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

void check_mass(double m)
{
    if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("DiskMeasure: atom masses must be positive and finite");
}

}  // namespace

DiskMeasure::DiskMeasure(std::vector<InteriorAtom> interior, std::vector<BoundaryAtom> boundary)
{
    for (const auto& a : interior) {
        check_mass(a.mass);
        if (!std::isfinite(a.location.real()) || !std::isfinite(a.location.imag()) || !(std::abs(a.location) < 1.0))
            throw ValidationError("DiskMeasure: interior atoms must lie strictly inside the disk");
    }
    for (auto& b : boundary) {
        check_mass(b.mass);
        if (!std::isfinite(b.angle)) throw ValidationError("DiskMeasure: boundary angles must be finite");
        b.angle = wrap_angle(b.angle);
    }
    std::sort(interior.begin(), interior.end(),
              [](const InteriorAtom& a, const InteriorAtom& b) { return less_location(a.location, b.location); });
    for (const auto& a : interior) {
        if (!interior_.empty() && interior_.back().location == a.location) interior_.back().mass += a.mass;
        else interior_.push_back(a);
    }
    std::sort(boundary.begin(), boundary.end(),
              [](const BoundaryAtom& a, const BoundaryAtom& b) { return a.angle < b.angle; });
    for (const auto& b : boundary) {
        if (!boundary_.empty() && boundary_.back().angle == b.angle) boundary_.back().mass += b.mass;
        else boundary_.push_back(b);
    }
}

DiskMeasure DiskMeasure::point_mass(double angle, double mass)
{
    return DiskMeasure({}, {{angle, mass}});
}

DiskMeasure DiskMeasure::interior_point(Complex a, double mass)
{
    return DiskMeasure({{a, mass}}, {});
}

double DiskMeasure::total_mass() const
{
    double s = 0.0;
    for (const auto& a : interior_) s += a.mass;
    for (const auto& b : boundary_) s += b.mass;
    return s;
}

double DiskMeasure::blaschke_mass() const
{
    double s = boundary_mass();
    for (const auto& a : interior_) s += (1.0 - std::abs(a.location)) * a.mass;
    return s;
}

double DiskMeasure::boundary_mass() const
{
    double s = 0.0;
    for (const auto& b : boundary_) s += b.mass;
    return s;
}

DiskMeasure DiskMeasure::scaled(double k) const
{
    if (k == 0.0) return {};
    auto in = interior_;
    auto bd = boundary_;
    for (auto& a : in) a.mass *= k;
    for (auto& b : bd) b.mass *= k;
    return DiskMeasure(std::move(in), std::move(bd));
}

DiskMeasure DiskMeasure::rotated(double phi) const
{
    auto in = interior_;
    auto bd = boundary_;
    Complex rot = std::polar(1.0, phi);
    for (auto& a : in) a.location *= rot;
    for (auto& b : bd) b.angle += phi;
    return DiskMeasure(std::move(in), std::move(bd));
}

DiskMeasure DiskMeasure::operator+(const DiskMeasure& other) const
{
    auto in = interior_;
    auto bd = boundary_;
    in.insert(in.end(), other.interior_.begin(), other.interior_.end());
    bd.insert(bd.end(), other.boundary_.begin(), other.boundary_.end());
    return DiskMeasure(std::move(in), std::move(bd));
}

double star_mass(const DiskMeasure& w, const bc::StarSpec& spec)
{
    spec.validate();
    double s = 0.0;
    for (const auto& b : w.boundary())
        if (star_contains(spec, std::polar(1.0, b.angle))) s += b.mass;
    for (const auto& a : w.interior())
        if (star_contains(spec, a.location)) s += (1.0 - std::abs(a.location)) * a.mass;
    return s;
}

namespace {

// Entropy of the finite set formed by the sorted angles of the chosen atoms.
double subset_entropy(const std::vector<BoundaryAtom>& atoms, const std::vector<std::size_t>& idx)
{
    if (idx.size() <= 1) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        double a = atoms[idx[i]].angle;
        double next = (i + 1 < idx.size()) ? atoms[idx[i + 1]].angle : atoms[idx[0]].angle + kTwoPi;
        double len = (next - a) / kTwoPi;
        s += len * std::log(1.0 / len);
    }
    return s;
}

bc::BCSet witness_of(const std::vector<BoundaryAtom>& atoms, const std::vector<std::size_t>& idx)
{
    std::vector<double> angles;
    for (auto i : idx) angles.push_back(atoms[i].angle);
    return bc::BCSet::from_points(angles);
}

constexpr double kBudgetSlack = 1e-12;

}  // namespace

StarMassResult max_star_mass(const DiskMeasure& w, double budget, StarMassMode mode)
{
    if (!(budget >= 0.0)) throw ValidationError("max_star_mass: entropy budget must be nonnegative");
    const auto& atoms = w.boundary();
    StarMassResult best;
    if (atoms.empty()) return best;
    if (mode == StarMassMode::exact) {
        if (atoms.size() > kExactStarMassLimit)
            throw ValidationError("max_star_mass: exact mode supports at most 18 boundary atoms");
        std::size_t k = atoms.size();
        std::vector<std::size_t> idx;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
            idx.clear();
            double value = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (std::uint64_t{1} << i)) {
                    idx.push_back(i);
                    value += atoms[i].mass;
                }
            if (value < best.value) continue;
            if (value == best.value && !std::lexicographical_compare(idx.begin(), idx.end(), best.atoms.begin(),
                                                                     best.atoms.end()))
                continue;
            if (subset_entropy(atoms, idx) > budget + kBudgetSlack) continue;
            best.value = value;
            best.atoms = idx;
        }
    } else {
        std::vector<std::size_t> order(atoms.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (atoms[a].mass != atoms[b].mass) return atoms[a].mass > atoms[b].mass;
            return atoms[a].angle < atoms[b].angle;
        });
        std::vector<std::size_t> chosen;
        for (auto i : order) {
            auto trial = chosen;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), i), i);
            if (subset_entropy(atoms, trial) > budget + kBudgetSlack) continue;
            chosen = std::move(trial);
        }
        best.atoms = chosen;
        best.value = 0.0;
        for (auto i : chosen) best.value += atoms[i].mass;
    }
    best.witness = witness_of(atoms, best.atoms);
    return best;
}

double solve_theta(int n, double M)
{
    if (n < 1) throw ValidationError("solve_theta: n must be positive");
    if (!(M > 0.0) || !std::isfinite(M)) throw ValidationError("solve_theta: M must be positive");
    const double cap = std::exp(-1.0);
    if (M > n * cap)
        throw ValidationError("solve_theta: n theta log(1/theta) = M has no root for n = " + std::to_string(n) +
                              ", M = " + std::to_string(M) + " (needs M <= n/e)");
    double lo = 0.0, hi = cap;
    auto f = [&](double t) { return n * t * std::log(1.0 / t) - M; };
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

DiskMeasure diffuse_measure(int n, double M)
{
    double theta = solve_theta(n, M);
    std::vector<BoundaryAtom> atoms;
    for (int k = 1; k <= n; ++k) atoms.push_back({k * theta, 1.0 / n});
    return DiskMeasure({}, std::move(atoms));
}

std::string to_string(SequenceTag tag)
{
    switch (tag) {
    case SequenceTag::concentrating: return "concentrating";
    case SequenceTag::diffuse: return "diffuse";
    case SequenceTag::mixed: return "mixed";
    }
    return "mixed";
}

SequenceDiagnostics classify_sequence(const std::vector<DiskMeasure>& measures, const ClassifyParams& params)
{
    if (measures.empty()) throw ValidationError("classify_sequence: measure list is empty");
    if (params.c_ladder.empty()) throw ValidationError("classify_sequence: c ladder is empty");
    SequenceDiagnostics out;
    const double eta = 1.0 / (2.0 * static_cast<double>(params.n2));
    for (const auto& w : measures) {
        double mass = w.blaschke_mass();
        std::vector<double> fractions;
        double ratio_sum = 0.0;
        double budget = 0.0;
        for (std::size_t k = 0; k < params.c_ladder.size(); ++k) {
            roberts::RobertsParams p{params.c_ladder[k], params.n2, params.max_generation};
            if (mass <= 0.0) {
                fractions.push_back(0.0);
                continue;
            }
            auto d = roberts::decompose(w, p);
            double frac = std::clamp(d.cone.blaschke_mass() / mass, 0.0, 1.0);
            fractions.push_back(frac);
            auto ref = roberts::decompose(DiskMeasure::point_mass(0.0, mass), p);
            double ref_frac = ref.cone.blaschke_mass() / mass;
            ratio_sum += ref_frac > 0.0 ? frac / ref_frac : 0.0;
            if (k == params.c_ladder.size() / 2) budget = bc::local_entropy(d.cone_set, eta);
        }
        out.cone_fractions.push_back(std::move(fractions));
        out.entropy_budgets.push_back(budget);
        out.concentration.push_back(ratio_sum / params.c_ladder.size());
    }
    double last = out.concentration.back();
    if (last >= 0.8) out.tag = SequenceTag::concentrating;
    else if (last <= 0.2) out.tag = SequenceTag::diffuse;
    else out.tag = SequenceTag::mixed;
    return out;
}

}  // namespace innerlab::meas
