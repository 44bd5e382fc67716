#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "innerlab/measures.hpp"

namespace innerlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// %.16e: 17 significant digits, `.` decimal point, independent of the C locale.
std::string format_number(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    /// Emitted as `# key=value` lines ahead of the header.
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_row(std::vector<double> row);
};

std::string to_csv(const Table& t);

/// Table as {"metadata": {...}, "columns": [...], "rows": [[...]]}.
Json to_json(const Table& t);

/// Parses JSON text; syntax errors become ValidationError with "origin:line:column: message".
Json parse_json(std::string_view text, const std::string& origin);

/// Field access with JSON-pointer diagnostics ("/parameters/n/2: expected a positive integer").
class Fields {
public:
    Fields(const Json& node, std::string path);

    const Json& node() const { return node_; }
    const std::string& path() const { return path_; }
    bool has(const std::string& key) const;
    Fields child(const std::string& key) const;
    Fields at(std::size_t i) const;
    std::size_t size() const;

    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    int integer(const std::string& key, int fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::string string(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<int> integers(const std::string& key) const;
    /// Rejects keys outside `allowed`.
    void only(const std::vector<std::string>& allowed) const;

    [[noreturn]] void fail(const std::string& what) const;

private:
    const Json& get(const std::string& key) const;

    const Json& node_;
    std::string path_;
};

/// Measure as {"atoms": [{"angle": a, "mass": m} | {"position": [x, y], "mass": m}]}; interior masses are ν̃-masses.
meas::DiskMeasure parse_measure(const Fields& f);
Json measure_to_json(const meas::DiskMeasure& w);

enum class Kind { entropy, roberts, gce_dirichlet, nearly_maximal, diffuse_experiment, outer_eval, bergman_distance, fund3_check };

std::string to_string(Kind k);
Kind parse_kind(const std::string& s);

struct Scenario {
    Kind kind = Kind::entropy;
    std::string name;
    Json parameters;
    /// Canonical serialization of the whole scenario, hashed into every output.
    std::string canonical;
    std::string hash;
};

/// Validates the top level ({"kind", "name"?, "parameters"}); parameters are checked when run.
Scenario parse_scenario(std::string_view text, const std::string& origin);

struct RunOutput {
    Table table;
    /// Full record: scenario, metadata, table and kind-specific extras.
    Json record;
};

RunOutput run(const Scenario& s);

/// Writes <name>.csv and <name>.json into `dir` atomically and returns their paths.
std::vector<std::filesystem::path> write_outputs(const Scenario& s, const RunOutput& out, const std::filesystem::path& dir);

/// Acceptance thresholds; every field can be overridden by a JSON object with the same keys.
struct Tolerances {
    double liouville_error = 1e-3;
    double liouville_seconds = 60.0;
    double jensen_error = 1e-6;
    double jensen_seconds = 10.0;
    double dirichlet_error = 1e-4;
    double dirichlet_refinement = 1.5;
    double monotone_slack = 1e-6;
    double roberts_mass = 1e-12;
    double roberts_trace = 1e-12;
    double subadditivity = 1e-12;
    double fund3_difference = 5e-3;
    double bergman_sqrt_pi = 1e-10;
    double littlewood_paley = 1e-6;
    double outer_truncation = 1e-8;
    double regression_slack = 1.05;

    std::map<std::string, double*> fields();
};

Tolerances load_tolerances(std::string_view json_text, const std::string& origin);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the acceptance criteria 1-11 (or the listed subset), printing one line per criterion to `out`.
/// Only deterministic quantities reach `out`; timings go to `log`.
std::vector<CriterionResult> selftest(const Tolerances& tol, const std::vector<int>& only, std::ostream& out,
                                      std::ostream& log);

/// "criterion <id> PASS|FAIL <name>: <detail>"
std::string format_result(const CriterionResult& r);

}  // namespace innerlab::cli
