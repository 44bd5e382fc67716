#include "innerlab/roberts.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace innerlab::roberts {

void RobertsParams::validate() const
{
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("RobertsParams: c must be positive");
    if (n2 < 4 || !std::has_single_bit(n2)) throw ValidationError("RobertsParams: n2 must be a power of 2, at least 4");
    if (max_generation < 2) throw ValidationError("RobertsParams: max_generation must be at least 2");
    int bits = std::countr_zero(n2);
    double top = bits * std::ldexp(1.0, max_generation - 2);
    if (top > 52.0) throw ValidationError("RobertsParams: n_max exceeds 2^52; lower max_generation or n2");
}

double RobertsParams::n(int j) const
{
    if (j == 1) return std::sqrt(static_cast<double>(n2));
    return static_cast<double>(arcs(j));
}

std::uint64_t RobertsParams::arcs(int j) const
{
    std::uint64_t v = n2;
    for (int k = 2; k < j; ++k) v *= v;
    return v;
}

double RobertsParams::r(int j) const
{
    return 1.0 - 1.0 / n(j);
}

double RobertsParams::threshold(int j) const
{
    double nj = n(j);
    return c / nj * std::log(nj);
}

std::string to_string(Action a)
{
    switch (a) {
    case Action::L: return "L";
    case Action::H1: return "H1";
    case Action::H2: return "H2";
    }
    return "L";
}

namespace {

// Remaining ω-mass of one input atom (or a split part of it).
struct Piece {
    bool on_circle;
    Complex location;
    double angle;
    double modulus;
    double mass;
    std::uint64_t fine;  // arc index at the last generation
};

// Collects ω-masses and converts them back to a DiskMeasure.
struct Sink {
    std::vector<meas::InteriorAtom> interior;
    std::vector<meas::BoundaryAtom> boundary;
    double mass = 0.0;

    void add(const Piece& p, double m)
    {
        if (m <= 0.0) return;
        mass += m;
        if (p.on_circle) boundary.push_back({p.angle, m});
        else interior.push_back({p.location, m / (1.0 - p.modulus)});
    }
    meas::DiskMeasure build() { return meas::DiskMeasure(std::move(interior), std::move(boundary)); }
};

}  // namespace

RobertsDecomposition decompose(const meas::DiskMeasure& w, const RobertsParams& p)
{
    p.validate();
    const int G = p.max_generation;
    const std::uint64_t n_max = p.arcs(G);
    RobertsDecomposition d;
    d.params = p;

    Sink cone;
    std::vector<Sink> layers(G - 1);
    std::vector<Piece> active;
    const double r1 = p.r(1);
    auto fine_index = [&](double angle) {
        auto idx = static_cast<std::uint64_t>(std::floor(angle / kTwoPi * static_cast<double>(n_max)));
        return std::min(idx, n_max - 1);
    };
    for (const auto& b : w.boundary())
        active.push_back({true, std::polar(1.0, b.angle), b.angle, 1.0, b.mass, fine_index(b.angle)});
    for (const auto& a : w.interior()) {
        double mod = std::abs(a.location);
        double angle = mod > 0.0 ? wrap_angle(std::arg(a.location)) : 0.0;
        Piece piece{false, a.location, angle, mod, (1.0 - mod) * a.mass, fine_index(angle)};
        if (mod < r1) {
            cone.add(piece, piece.mass);
            d.step1_mass += piece.mass;
        } else {
            active.push_back(piece);
        }
    }
    // Within an arc: decreasing modulus, then increasing angle, is the H2 top-up order.
    auto order = [](const Piece& a, const Piece& b) {
        return std::make_tuple(a.fine, b.modulus, a.angle, a.location.real(), a.location.imag()) <
               std::make_tuple(b.fine, a.modulus, b.angle, b.location.real(), b.location.imag());
    };
    std::sort(active.begin(), active.end(), order);

    std::vector<bc::CircleArc> light_arcs;
    std::vector<double> extra_points;
    std::vector<std::uint64_t> heavy_prev;  // heavy arc indices at the previous generation

    for (int j = 2; j <= G; ++j) {
        const std::uint64_t nj = p.arcs(j);
        const std::uint64_t factor = n_max / nj;
        const double T = p.threshold(j);
        const double r_lo = p.r(j - 1);
        const double r_hi = p.r(j);
        const double len = 1.0 / static_cast<double>(nj);
        GenerationSummary summary{j, T, 0, 0, 0, 0.0};
        Sink& layer = layers[j - 2];
        std::vector<Piece> next;
        std::vector<std::uint64_t> heavy_now;
        std::vector<std::uint64_t> occupied;

        std::size_t i = 0;
        while (i < active.size()) {
            std::uint64_t arc = active[i].fine / factor;
            std::size_t end = i;
            double arc_mass = 0.0;
            while (end < active.size() && active[end].fine / factor == arc) arc_mass += active[end++].mass;
            occupied.push_back(arc);
            AuditEntry e;
            e.generation = j;
            e.arc_index = arc;
            e.arc_start = kTwoPi * static_cast<double>(arc) / static_cast<double>(nj);
            e.arc_length = len;
            e.arc_mass = arc_mass;
            for (std::size_t k = i; k < end; ++k)
                if (!active[k].on_circle && active[k].modulus >= r_lo && active[k].modulus < r_hi)
                    e.box_mass += active[k].mass;
            if (arc_mass <= T) {
                e.action = Action::L;
                for (std::size_t k = i; k < end; ++k) layer.add(active[k], active[k].mass);
                e.to_layer = arc_mass;
                light_arcs.push_back({e.arc_start, len});
                ++summary.light;
            } else {
                e.heavy = true;
                heavy_now.push_back(arc);
                ++summary.heavy;
                for (int q = 1; q <= 8; ++q) extra_points.push_back(e.arc_start + kTwoPi * len * q / 10.0);
                bool h1 = e.box_mass >= T;
                e.action = h1 ? Action::H1 : Action::H2;
                double need = h1 ? 0.0 : T - e.box_mass;
                for (std::size_t k = i; k < end; ++k) {
                    Piece piece = active[k];
                    bool in_box = !piece.on_circle && piece.modulus < r_hi;
                    if (in_box) {
                        if (h1) {
                            cone.add(piece, piece.mass);
                            e.to_cone += piece.mass;
                        } else {
                            layer.add(piece, piece.mass);
                            e.to_layer += piece.mass;
                        }
                        continue;
                    }
                    if (need > 0.0) {
                        double take = std::min(need, piece.mass);
                        layer.add(piece, take);
                        e.to_layer += take;
                        need -= take;
                        piece.mass -= take;
                    }
                    if (piece.mass > 0.0) next.push_back(piece);
                }
            }
            d.audit.push_back(e);
            i = end;
        }

        // Arcs without remaining mass whose parent is heavy are maximal light arcs.
        std::uint64_t children = (j == 2) ? nj : nj / p.arcs(j - 1);
        std::vector<std::uint64_t> parents;
        if (j == 2) parents.push_back(0);
        else parents = heavy_prev;
        std::size_t expected = parents.size() * children;
        if (light_arcs.size() + expected > kMaxConeGaps)
            throw ValidationError("roberts: cone set needs more than " + std::to_string(kMaxConeGaps) +
                                  " gaps; lower max_generation or n2");
        std::size_t occ = 0;
        for (auto parent : parents) {
            std::uint64_t first = (j == 2) ? 0 : parent * children;
            for (std::uint64_t arc = first; arc < first + children; ++arc) {
                while (occ < occupied.size() && occupied[occ] < arc) ++occ;
                if (occ < occupied.size() && occupied[occ] == arc) continue;
                light_arcs.push_back({kTwoPi * static_cast<double>(arc) / static_cast<double>(nj), len});
                ++summary.light;
                ++summary.empty_light;
            }
        }
        summary.layer_mass = layer.mass;
        d.generations.push_back(summary);
        active = std::move(next);
        heavy_prev = std::move(heavy_now);
    }

    for (const auto& piece : active) {
        cone.add(piece, piece.mass);
        d.residual_mass += piece.mass;
    }
    for (auto& layer : layers) d.layers.push_back(layer.build());
    d.cone = cone.build();
    d.star_core_set = bc::BCSet::from_gaps(std::move(light_arcs));
    d.cone_set = bc::merge(d.star_core_set, bc::BCSet::from_points(extra_points));
    return d;
}

namespace {

struct LocationKey {
    int kind;
    double x;
    double y;
    auto operator<=>(const LocationKey&) const = default;
};

std::string describe(Complex z)
{
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

void accumulate(std::map<LocationKey, double>& m, const meas::DiskMeasure& w, double sign)
{
    for (const auto& b : w.boundary()) m[{0, b.angle, 0.0}] += sign * b.mass;
    for (const auto& a : w.interior())
        m[{1, a.location.real(), a.location.imag()}] += sign * (1.0 - std::abs(a.location)) * a.mass;
}

}  // namespace

VerifyReport verify(const RobertsDecomposition& d, const meas::DiskMeasure& w, const RobertsParams& p)
{
    p.validate();
    VerifyReport rep;
    auto fail = [&](std::string check, std::string detail) { rep.failures.push_back({std::move(check), std::move(detail)}); };
    const double scale = std::max(1.0, w.blaschke_mass());

    if (static_cast<int>(d.layers.size()) != p.max_generation - 1)
        fail("shape", "expected " + std::to_string(p.max_generation - 1) + " layers");

    std::map<LocationKey, double> balance;
    accumulate(balance, w, 1.0);
    double total = d.cone.blaschke_mass();
    accumulate(balance, d.cone, -1.0);
    for (const auto& layer : d.layers) {
        accumulate(balance, layer, -1.0);
        total += layer.blaschke_mass();
    }
    rep.mass_error = std::abs(total - w.blaschke_mass());
    if (rep.mass_error > kMassTolerance * scale)
        fail("mass", "total mass differs from the input by " + std::to_string(rep.mass_error));
    for (const auto& [key, diff] : balance) {
        if (std::abs(diff) > kMassTolerance * scale) {
            Complex z = key.kind == 0 ? std::polar(1.0, key.x) : Complex(key.x, key.y);
            fail("mass", "atom at " + describe(z) + " is off by " + std::to_string(diff));
        }
    }

    for (std::size_t k = 0; k < d.layers.size(); ++k) {
        int j = static_cast<int>(k) + 2;
        double r_lo = p.r(j - 1);
        const auto& layer = d.layers[k];
        for (const auto& a : layer.interior())
            if (std::abs(a.location) < r_lo)
                fail("support", "layer " + std::to_string(j) + " atom at " + describe(a.location) + " lies below r_" +
                                    std::to_string(j - 1));
        // Sliding arcs [φ, φ + 2π/n_j) anchored at atom angles.
        std::vector<std::pair<double, double>> atoms;
        for (const auto& b : layer.boundary()) atoms.push_back({b.angle, b.mass});
        for (const auto& a : layer.interior())
            atoms.push_back({wrap_angle(std::arg(a.location)), (1.0 - std::abs(a.location)) * a.mass});
        std::sort(atoms.begin(), atoms.end());
        std::size_t m = atoms.size();
        double width = kTwoPi / static_cast<double>(p.arcs(j));
        double bound = 2.0 * p.threshold(j);
        std::size_t hi = 0;
        double window = 0.0;
        auto angle_at = [&](std::size_t q) { return atoms[q % m].first + (q >= m ? kTwoPi : 0.0); };
        for (std::size_t lo = 0; lo < m; ++lo) {
            if (hi < lo) {
                hi = lo;
                window = 0.0;
            }
            while (hi < lo + m && angle_at(hi) < atoms[lo].first + width) window += atoms[hi++ % m].second;
            rep.worst_arc_ratio = std::max(rep.worst_arc_ratio, window / bound);
            if (window > bound * (1.0 + 1e-12) + 1e-15)
                fail("arc_bound", "layer " + std::to_string(j) + " arc at angle " + std::to_string(atoms[lo].first) +
                                      " carries " + std::to_string(window) + " > " + std::to_string(bound));
            window -= atoms[lo].second;
        }
    }

    bc::StarSpec star{d.cone_set, 1.0, 1.0, true};
    const double r1 = p.r(1);
    for (const auto& b : d.cone.boundary())
        if (d.cone_set.angular_distance(b.angle) > 1e-12)
            fail("containment", "boundary cone atom at angle " + std::to_string(b.angle) + " is not in E_cone");
    for (const auto& a : d.cone.interior()) {
        if (std::abs(a.location) < r1) continue;
        if (!bc::star_contains(star, a.location))
            fail("containment", "interior cone atom at " + describe(a.location) + " is outside the star");
    }
    rep.cone_entropy = bc::entropy(d.cone_set);
    rep.star_core_entropy = bc::entropy(d.star_core_set);
    return rep;
}

std::pair<double, double> local_entropy_bounds(const RobertsDecomposition& d, double eta)
{
    if (eta <= 0.0) eta = 1.0 / (2.0 * static_cast<double>(d.params.n2));
    return {bc::local_entropy(d.star_core_set, eta), bc::local_entropy(d.cone_set, eta)};
}

}  // namespace innerlab::roberts
