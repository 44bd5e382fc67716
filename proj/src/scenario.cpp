#include <cmath>
#include <random>

#include "innerlab/bergman.hpp"
#include "innerlab/cli.hpp"
#include "innerlab/corpus.hpp"
#include "innerlab/gce.hpp"
#include "innerlab/outer.hpp"
#include "innerlab/roberts.hpp"

namespace innerlab::cli {

namespace {

struct KindOutput {
    Table table;
    Json extras = Json::object();
    /// Module tolerances and resolutions, as "key=value" pairs.
    std::vector<std::pair<std::string, std::string>> settings;
};

std::string join_settings(const std::vector<std::pair<std::string, std::string>>& s)
{
    std::string out;
    for (const auto& [k, v] : s) out += (out.empty() ? "" : ";") + k + "=" + v;
    return out;
}

int positive(const Fields& p, const std::string& key, int fallback, int max = 1 << 20)
{
    int v = p.integer(key, fallback);
    if (v < 1 || v > max) p.child(key).fail("expected an integer in [1, " + std::to_string(max) + "]");
    return v;
}

const std::vector<std::string> kLadderKeys{"k_min", "k_max", "n_r", "n_theta", "probe_radius", "increment_tol",
                                           "newton_tol", "max_iterations"};

gce::LadderOptions ladder_options(const Fields& p, KindOutput& o)
{
    gce::LadderOptions opt;
    opt.k_min = positive(p, "k_min", opt.k_min, 20);
    opt.k_max = positive(p, "k_max", opt.k_max, 20);
    if (opt.k_max <= opt.k_min) p.child("k_max").fail("must exceed k_min");
    opt.grid.n_r = positive(p, "n_r", opt.grid.n_r, 4096);
    opt.grid.n_theta = positive(p, "n_theta", opt.grid.n_theta, 8192);
    opt.probe_radius = p.number("probe_radius", opt.probe_radius);
    if (!(opt.probe_radius > 0.0 && opt.probe_radius < 1.0)) p.child("probe_radius").fail("must lie in (0, 1)");
    opt.increment_tol = p.number("increment_tol", opt.increment_tol);
    opt.newton.tol = p.number("newton_tol", opt.newton.tol);
    if (!(opt.newton.tol > 0.0)) p.child("newton_tol").fail("must be positive");
    opt.newton.max_iterations = positive(p, "max_iterations", opt.newton.max_iterations, 10000);
    o.settings.push_back({"grid", std::to_string(opt.grid.n_r) + "x" + std::to_string(opt.grid.n_theta)});
    o.settings.push_back({"ladder", std::to_string(opt.k_min) + ".." + std::to_string(opt.k_max)});
    o.settings.push_back({"newton_tol", format_number(opt.newton.tol)});
    o.settings.push_back({"increment_tol", format_number(opt.increment_tol)});
    return opt;
}

Json ladder_json(const gce::LadderResult& r)
{
    return Json{{"radii", r.radii},
                {"increments", r.increments},
                {"converged", r.converged},
                {"deficiency_radii", r.deficiency_radii},
                {"deficiency", r.deficiency}};
}

KindOutput run_entropy(const Fields& p)
{
    p.only({"count", "degree", "max_degree", "seed", "max_modulus"});
    KindOutput o;
    int count = positive(p, "count", 20, 10000);
    bool fixed = p.has("degree");
    int degree = fixed ? positive(p, "degree", 1, 64) : 0;
    int max_degree = positive(p, "max_degree", 6, 64);
    double max_modulus = p.number("max_modulus", 0.9);
    if (!(max_modulus > 0.0 && max_modulus < 1.0)) p.child("max_modulus").fail("must lie in (0, 1)");
    auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
    o.settings = {{"quadrature_tol", format_number(1e-13)}, {"seed", std::to_string(seed)}};
    o.table.columns = {"degree", "formula_entropy", "quadrature_entropy", "abs_diff"};
    corpus::Rng rng(seed);
    Json zeros = Json::array();
    for (int i = 0; i < count; ++i) {
        int d = fixed ? degree : 1 + i % max_degree;
        auto f = corpus::random_blaschke(rng, d, max_modulus);
        double a = inner::jensen_entropy(f), b = inner::circle_entropy_quadrature(f);
        o.table.add_row({static_cast<double>(d), a, b, std::abs(a - b)});
        Json z = Json::array();
        for (Complex c : f.zeros()) z.push_back({c.real(), c.imag()});
        zeros.push_back(Json{{"zeros", z}, {"rotation", {f.rotation().real(), f.rotation().imag()}}});
    }
    o.extras["products"] = zeros;
    return o;
}

KindOutput run_roberts(const Fields& p)
{
    p.only({"measure", "c", "n2", "generations"});
    KindOutput o;
    auto w = parse_measure(p.child("measure"));
    roberts::RobertsParams rp;
    rp.c = p.number("c", rp.c);
    int n2 = positive(p, "n2", 16, 1 << 30);
    rp.n2 = static_cast<std::uint64_t>(n2);
    rp.max_generation = positive(p, "generations", rp.max_generation, 64);
    try {
        rp.validate();
    } catch (const ValidationError& e) {
        p.fail(e.what());
    }
    auto d = roberts::decompose(w, rp);
    auto rep = roberts::verify(d, w, rp);
    o.settings = {{"mass_tol", format_number(roberts::kMassTolerance)},
                  {"c", format_number(rp.c)},
                  {"n2", std::to_string(rp.n2)},
                  {"generations", std::to_string(rp.max_generation)}};
    o.table.columns = {"generation", "arc_index", "arc_start", "arc_length", "heavy", "action",
                       "arc_mass", "box_mass", "to_layer", "to_cone"};
    Json audit = Json::array();
    for (const auto& a : d.audit) {
        o.table.add_row({static_cast<double>(a.generation), static_cast<double>(a.arc_index), a.arc_start, a.arc_length,
                         a.heavy ? 1.0 : 0.0, static_cast<double>(a.action), a.arc_mass, a.box_mass, a.to_layer,
                         a.to_cone});
        audit.push_back(Json{{"generation", a.generation},
                             {"arc_index", a.arc_index},
                             {"arc_start", a.arc_start},
                             {"arc_length", a.arc_length},
                             {"heavy", a.heavy},
                             {"action", roberts::to_string(a.action)},
                             {"arc_mass", a.arc_mass},
                             {"box_mass", a.box_mass},
                             {"to_layer", a.to_layer},
                             {"to_cone", a.to_cone}});
    }
    Json layers = Json::array();
    for (std::size_t k = 0; k < d.layers.size(); ++k)
        layers.push_back(Json{{"generation", static_cast<int>(k) + 2},
                              {"mass", d.layers[k].blaschke_mass()},
                              {"measure", measure_to_json(d.layers[k])}});
    Json gens = Json::array();
    for (const auto& g : d.generations)
        gens.push_back(Json{{"generation", g.generation},
                            {"threshold", g.threshold},
                            {"light", g.light},
                            {"empty_light", g.empty_light},
                            {"heavy", g.heavy},
                            {"layer_mass", g.layer_mass}});
    Json failures = Json::array();
    for (const auto& f : rep.failures) failures.push_back(Json{{"check", f.check}, {"detail", f.detail}});
    o.extras = Json{{"audit", audit},
                    {"layers", layers},
                    {"cone", {{"mass", d.cone.blaschke_mass()}, {"measure", measure_to_json(d.cone)}}},
                    {"step1_mass", d.step1_mass},
                    {"residual_mass", d.residual_mass},
                    {"generations", gens},
                    {"verify",
                     {{"ok", rep.ok()},
                      {"mass_error", rep.mass_error},
                      {"worst_arc_ratio", rep.worst_arc_ratio},
                      {"cone_entropy", rep.cone_entropy},
                      {"star_core_entropy", rep.star_core_entropy},
                      {"failures", failures}}}};
    return o;
}

KindOutput run_dirichlet(const Fields& p)
{
    p.only({"radius", "n_r", "n_theta", "sources", "boundary", "newton_tol", "max_iterations"});
    KindOutput o;
    double r = p.number("radius", 0.9);
    if (!(r > 0.0 && r < 1.0)) p.child("radius").fail("must lie in (0, 1)");
    int n_r = positive(p, "n_r", 128, 4096), n_theta = positive(p, "n_theta", 256, 8192);
    std::vector<meas::InteriorAtom> sources;
    if (p.has("sources")) {
        auto w = parse_measure(p.child("sources"));
        if (!w.boundary().empty()) p.child("sources").fail("sources must be interior atoms");
        sources = w.interior();
    }
    gce::PolarGrid grid(r, n_r, n_theta);
    std::vector<double> h(static_cast<std::size_t>(n_theta));
    std::string boundary = "u_D";
    if (p.has("boundary") && p.node().at("boundary").is_number()) {
        double c = p.number("boundary");
        std::fill(h.begin(), h.end(), c);
        boundary = format_number(c);
    } else {
        if (p.has("boundary")) boundary = p.string("boundary");
        if (boundary != "u_D") p.child("boundary").fail("expected \"u_D\" or a number");
        for (int j = 0; j < n_theta; ++j) h[static_cast<std::size_t>(j)] = u_disk(grid.node(grid.index(n_r, j)));
    }
    gce::NewtonOptions nopt;
    nopt.tol = p.number("newton_tol", nopt.tol);
    nopt.max_iterations = positive(p, "max_iterations", nopt.max_iterations, 10000);
    gce::SolveInfo info;
    auto u = gce::solve_dirichlet({grid, sources, h}, nopt, &info);
    o.settings = {{"grid", std::to_string(n_r) + "x" + std::to_string(n_theta)},
                  {"newton_tol", format_number(nopt.tol)},
                  {"boundary", boundary}};
    o.table.columns = {"rho", "theta", "u", "u_D_diff"};
    double sup = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Complex z = grid.node(k);
        int i = grid.ring_of(k);
        double theta = i == 0 ? 0.0 : grid.theta(static_cast<int>((k - 1) % static_cast<std::size_t>(n_theta)));
        double v = u.node_value(k), diff = v - u_disk(z);
        if (std::isfinite(diff)) sup = std::max(sup, std::abs(diff));
        o.table.add_row({grid.rho(i), theta, v, diff});
    }
    std::vector<std::size_t> flagged = u.flagged();
    o.extras = Json{{"iterations", info.iterations},
                    {"residual", info.residual},
                    {"sup_u_D_diff", sup},
                    {"flagged_nodes", flagged}};
    return o;
}

KindOutput run_nearly_maximal(const Fields& p)
{
    auto keys = kLadderKeys;
    keys.insert(keys.end(), {"measure", "rings", "per_ring"});
    p.only(keys);
    KindOutput o;
    auto w = p.has("measure") ? parse_measure(p.child("measure")) : meas::DiskMeasure{};
    auto opt = ladder_options(p, o);
    int rings = positive(p, "rings", 8, 256), per_ring = positive(p, "per_ring", 32, 4096);
    auto res = gce::nearly_maximal(w, opt);
    o.table.columns = {"x", "y", "u", "u_D"};
    for (Complex z : gce::disk_probes(opt.probe_radius, rings, per_ring))
        o.table.add_row({z.real(), z.imag(), res(z), u_disk(z)});
    o.extras = ladder_json(res);
    return o;
}

KindOutput run_diffuse(const Fields& p)
{
    auto keys = kLadderKeys;
    keys.insert(keys.end(), {"n", "M"});
    p.only(keys);
    KindOutput o;
    auto ns = p.integers("n");
    auto Ms = p.numbers("M");
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i] < 1) p.child("n").at(i).fail("expected a positive integer");
    for (std::size_t i = 0; i < Ms.size(); ++i)
        if (!(Ms[i] > 0.0)) p.child("M").at(i).fail("expected a positive number");
    auto opt = ladder_options(p, o);
    o.table.columns = {"n", "M", "theta_n", "u_at_0", "u_D_gap"};
    Json infeasible = Json::array();
    for (int n : ns)
        for (double M : Ms) {
            // n θ log(1/θ) = M needs M/n <= 1/e; such rows are reported as nan rather than aborting the sweep.
            if (M / n > std::exp(-1.0)) {
                double nan = std::numeric_limits<double>::quiet_NaN();
                o.table.add_row({static_cast<double>(n), M, nan, nan, nan});
                infeasible.push_back(Json{{"n", n}, {"M", M}});
                continue;
            }
            auto row = gce::diffuse_experiment({n}, {M}, opt).front();
            o.table.add_row({static_cast<double>(row.n), row.M, row.theta, row.u_at_0, row.gap});
        }
    o.extras["infeasible"] = infeasible;
    return o;
}

KindOutput run_outer(const Fields& p)
{
    p.only({"points", "K", "lump_tail", "probes", "grid"});
    KindOutput o;
    auto pts = p.numbers("points");
    if (pts.empty()) p.child("points").fail("expected at least one angle");
    auto e = bc::BCSet::from_points(pts);
    outer::OuterOptions opt;
    opt.K = positive(p, "K", opt.K, 200);
    opt.lump_tail = p.boolean("lump_tail", opt.lump_tail);
    outer::OuterFunction phi(e, opt);
    std::vector<Complex> probes;
    if (p.has("probes")) {
        Fields arr = p.child("probes");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Fields q(arr.node()[i], arr.path() + "/" + std::to_string(i));
            if (!q.node().is_array() || q.node().size() != 2 || !q.node()[0].is_number() || !q.node()[1].is_number())
                q.fail("expected [x, y]");
            Complex z(q.node()[0].get<double>(), q.node()[1].get<double>());
            if (!(std::abs(z) < 1.0)) q.fail("probe must lie in the open disk");
            probes.push_back(z);
        }
    } else {
        int n = positive(p, "grid", 16, 1000);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                probes.push_back(std::polar(1.0 - std::pow(10.0, -4.0 * (i + 0.5) / n), kTwoPi * (j + 0.5) / n));
    }
    o.settings = {{"K", std::to_string(opt.K)}, {"lump_tail", opt.lump_tail ? "true" : "false"}};
    o.table.columns = {"x", "y", "re", "im", "abs", "log_abs"};
    for (Complex z : probes) {
        Complex v = phi(z);
        o.table.add_row({z.real(), z.imag(), v.real(), v.imag(), std::abs(v), phi.log_abs(z)});
    }
    o.extras = Json{{"terms", phi.terms().size()}, {"tail_mass", phi.tail_mass()}, {"total_weight", phi.total_weight()}};
    return o;
}

bergman::QuadratureSpec quadrature(const Fields& p, KindOutput& o)
{
    bergman::QuadratureSpec q;
    q.radial_levels = positive(p, "radial_levels", q.radial_levels, 60);
    q.order = positive(p, "order", q.order, 64);
    q.n_theta = positive(p, "n_theta", q.n_theta, 1 << 16);
    q.angular_levels = p.integer("angular_levels", q.angular_levels);
    if (q.angular_levels < 0 || q.angular_levels > 40) p.child("angular_levels").fail("expected an integer in [0, 40]");
    o.settings.push_back({"quadrature", std::to_string(q.radial_levels) + "/" + std::to_string(q.order) + "/" +
                                            std::to_string(q.n_theta) + "/" + std::to_string(q.angular_levels)});
    return q;
}

KindOutput run_bergman(const Fields& p)
{
    p.only({"generator", "rotation", "m", "alpha", "radial_levels", "order", "n_theta", "angular_levels"});
    KindOutput o;
    auto w = parse_measure(p.child("generator"));
    double rotation = p.number("rotation", 0.0);
    inner::InnerFunction I;
    try {
        I = inner::InnerFunction::from_measure(w, std::polar(1.0, rotation));
    } catch (const ValidationError& e) {
        p.child("generator").fail(e.what());
    }
    int m = p.integer("m", 20);
    if (m < 0 || m > 60) p.child("m").fail("expected an integer in [0, 60]");
    bergman::BergmanSpaceSpec spec;
    spec.alpha = p.number("alpha", 0.0);
    spec.quad = quadrature(p, o);
    try {
        spec.validate();
    } catch (const ValidationError& e) {
        p.fail(e.what());
    }
    auto rep = bergman::distance_to_one({I, m}, spec);
    o.settings.push_back({"alpha", format_number(spec.alpha)});
    o.table.columns = {"m", "distance"};
    for (std::size_t k = 0; k < rep.distances.size(); ++k) o.table.add_row({static_cast<double>(k), rep.distances[k]});
    o.extras = Json{{"norm_one", rep.norm_one}, {"regularized", rep.regularized}};
    return o;
}

KindOutput run_fund3(const Fields& p)
{
    auto keys = kLadderKeys;
    keys.insert(keys.end(), {"w1", "w2", "rings", "per_ring"});
    p.only(keys);
    KindOutput o;
    auto w1 = parse_measure(p.child("w1"));
    auto w2 = parse_measure(p.child("w2"));
    auto opt = ladder_options(p, o);
    int rings = positive(p, "rings", 8, 256), per_ring = positive(p, "per_ring", 32, 4096);
    auto rep = gce::check_fund3(w1, w2, opt);
    o.table.columns = {"x", "y", "lhs", "rhs", "abs_diff"};
    for (Complex z : gce::disk_probes(opt.probe_radius, rings, per_ring)) {
        double a = rep.lhs(z), b = rep.rhs(z);
        o.table.add_row({z.real(), z.imag(), a, b, std::abs(a - b)});
    }
    o.extras = Json{{"sup_difference", rep.sup_difference}, {"lhs", ladder_json(rep.lhs)}, {"rhs", ladder_json(rep.rhs)}};
    return o;
}

KindOutput dispatch(Kind k, const Fields& p)
{
    switch (k) {
    case Kind::entropy: return run_entropy(p);
    case Kind::roberts: return run_roberts(p);
    case Kind::gce_dirichlet: return run_dirichlet(p);
    case Kind::nearly_maximal: return run_nearly_maximal(p);
    case Kind::diffuse_experiment: return run_diffuse(p);
    case Kind::outer_eval: return run_outer(p);
    case Kind::bergman_distance: return run_bergman(p);
    case Kind::fund3_check: return run_fund3(p);
    }
    throw ValidationError("unknown kind");
}

}  // namespace

RunOutput run(const Scenario& s)
{
    KindOutput k = dispatch(s.kind, Fields(s.parameters, "/parameters"));
    RunOutput out;
    out.table = std::move(k.table);
    out.table.metadata = {{"scenario_hash", s.hash},
                          {"kind", to_string(s.kind)},
                          {"name", s.name},
                          {"version", kVersion},
                          {"tolerances", join_settings(k.settings)},
                          {"run_stamp", fnv1a_hex(s.canonical + "\n" + kVersion)}};
    Json meta = Json::object();
    for (const auto& [key, v] : out.table.metadata) meta[key] = v;
    Json settings = Json::object();
    for (const auto& [key, v] : k.settings) settings[key] = v;
    out.record = Json{{"scenario", Json::parse(s.canonical)},
                      {"metadata", meta},
                      {"settings", settings},
                      {"table", to_json(out.table)},
                      {"extras", k.extras}};
    return out;
}

std::vector<std::filesystem::path> write_outputs(const Scenario& s, const RunOutput& out, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
    auto csv = dir / (s.name + ".csv");
    auto json = dir / (s.name + ".json");
    write_atomic(csv, to_csv(out.table));
    write_atomic(json, out.record.dump(2) + "\n");
    return {csv, json};
}

}  // namespace innerlab::cli
