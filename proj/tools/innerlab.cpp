#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "innerlab/cli.hpp"
#include "innerlab/parallel.hpp"

using namespace innerlab;
using namespace innerlab::cli;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run_scenario(const Scenario& s, const std::string& out_dir)
{
    auto out = run(s);
    for (const auto& p : write_outputs(s, out, out_dir)) std::cout << p.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"innerlab: inner functions, Beurling-Carleson sets and the Gauss curvature equation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run a scenario file and write <name>.csv and <name>.json");
    std::string scenario_path, out_dir = ".";
    run_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
    run_cmd->add_option("--out", out_dir, "Output directory");

    auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance criteria");
    std::string tol_path;
    std::vector<int> only;
    bool quiet = false;
    self_cmd->add_option("--tolerances", tol_path, "JSON object overriding acceptance thresholds");
    self_cmd->add_option("--only", only, "Criterion ids to run")->delimiter(',');
    self_cmd->add_flag("--quiet", quiet, "Suppress timing output on stderr");

    auto* ent_cmd = app.add_subcommand("entropy", "Jensen entropy of a seeded random Blaschke product");
    int degree = 3, seed = 1;
    ent_cmd->add_option("--degree", degree, "Degree")->required();
    ent_cmd->add_option("--seed", seed, "Seed")->required();
    std::string ent_out;
    ent_cmd->add_option("--out", ent_out, "Also write entropy.csv/json here");

    auto* rob_cmd = app.add_subcommand("roberts", "Roberts decomposition of a measure file");
    std::string measure_path, rob_out;
    double c = 1.0;
    long long n2 = 16;
    int gens = 3;
    rob_cmd->add_option("--measure", measure_path, "Measure JSON ({\"atoms\": [...]})")->required();
    rob_cmd->add_option("--c", c, "Threshold constant");
    rob_cmd->add_option("--n2", n2, "Generation-two arc count");
    rob_cmd->add_option("--gens", gens, "Last generation");
    rob_cmd->add_option("--out", rob_out, "Also write roberts.csv/json here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) {
            return run_scenario(parse_scenario(read_file(scenario_path), scenario_path), out_dir);
        }
        if (*self_cmd) {
            Tolerances tol;
            if (!tol_path.empty()) tol = load_tolerances(read_file(tol_path), tol_path);
            std::ostringstream sink;
            std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : std::cerr;
            log << "workers: " << worker_count() << "\n";
            auto results = selftest(tol, only, std::cout, log);
            bool ok = std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
            return ok ? 0 : 2;
        }
        if (*ent_cmd) {
            Json j{{"kind", "entropy"}, {"name", "entropy"}, {"parameters", {{"count", 1}, {"degree", degree}, {"seed", seed}}}};
            auto s = parse_scenario(j.dump(), "entropy");
            auto out = run(s);
            std::cout << to_csv(out.table);
            if (!ent_out.empty()) write_outputs(s, out, ent_out);
            return 0;
        }
        if (*rob_cmd) {
            Json measure = parse_json(read_file(measure_path), measure_path);
            Json j{{"kind", "roberts"},
                   {"name", "roberts"},
                   {"parameters", {{"measure", measure}, {"c", c}, {"n2", n2}, {"generations", gens}}}};
            auto s = parse_scenario(j.dump(), measure_path);
            auto out = run(s);
            std::cout << out.record["extras"].dump(2) << "\n";
            if (!rob_out.empty()) write_outputs(s, out, rob_out);
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "innerlab: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "innerlab: numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
