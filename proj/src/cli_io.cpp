#include "innerlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace innerlab::cli {

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t byte)
{
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

std::string fnv1a_hex(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

void write_atomic(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot write " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw ValidationError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ValidationError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<double> row)
{
    if (row.size() != columns.size()) throw ValidationError("Table: row width does not match the column schema");
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& t)
{
    std::string out;
    for (const auto& [k, v] : t.metadata) out += "# " + k + "=" + v + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
        out += "\n";
    }
    return out;
}

Json to_json(const Table& t)
{
    Json meta = Json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    Json rows = Json::array();
    for (const auto& row : t.rows) {
        Json r = Json::array();
        // Non-finite values have no JSON literal; they are written as strings.
        for (double v : row) r.push_back(std::isfinite(v) ? Json(v) : Json(format_number(v)));
        rows.push_back(std::move(r));
    }
    return Json{{"metadata", meta}, {"columns", t.columns}, {"rows", rows}};
}

Json parse_json(std::string_view text, const std::string& origin)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        auto pos = msg.find("syntax error");
        throw ValidationError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                              (pos == std::string::npos ? msg : msg.substr(pos)));
    }
}

Fields::Fields(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

void Fields::fail(const std::string& what) const
{
    throw ValidationError((path_.empty() ? std::string("/") : path_) + ": " + what);
}

bool Fields::has(const std::string& key) const
{
    return node_.is_object() && node_.contains(key);
}

const Json& Fields::get(const std::string& key) const
{
    if (!node_.is_object()) fail("expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) Fields(node_, path_ + "/" + key).fail("missing field");
    return *it;
}

Fields Fields::child(const std::string& key) const
{
    return Fields(get(key), path_ + "/" + key);
}

Fields Fields::at(std::size_t i) const
{
    if (!node_.is_array()) fail("expected an array");
    if (i >= node_.size()) fail("index " + std::to_string(i) + " out of range");
    return Fields(node_[i], path_ + "/" + std::to_string(i));
}

std::size_t Fields::size() const
{
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
}

double Fields::number(const std::string& key) const
{
    const Json& v = get(key);
    if (!v.is_number()) Fields(v, path_ + "/" + key).fail("expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) Fields(v, path_ + "/" + key).fail("expected a finite number");
    return d;
}

double Fields::number(const std::string& key, double fallback) const
{
    return has(key) ? number(key) : fallback;
}

int Fields::integer(const std::string& key) const
{
    const Json& v = get(key);
    Fields f(v, path_ + "/" + key);
    if (!v.is_number()) f.fail("expected an integer");
    double d = v.get<double>();
    if (d != std::floor(d) || std::abs(d) > 2e9) f.fail("expected an integer");
    return static_cast<int>(d);
}

int Fields::integer(const std::string& key, int fallback) const
{
    return has(key) ? integer(key) : fallback;
}

bool Fields::boolean(const std::string& key, bool fallback) const
{
    if (!has(key)) return fallback;
    const Json& v = get(key);
    if (!v.is_boolean()) Fields(v, path_ + "/" + key).fail("expected true or false");
    return v.get<bool>();
}

std::string Fields::string(const std::string& key) const
{
    const Json& v = get(key);
    if (!v.is_string()) Fields(v, path_ + "/" + key).fail("expected a string");
    return v.get<std::string>();
}

std::vector<double> Fields::numbers(const std::string& key) const
{
    Fields arr = child(key);
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const Json& v = arr.node()[i];
        if (!v.is_number()) arr.at(i).fail("expected a number");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<int> Fields::integers(const std::string& key) const
{
    Fields arr = child(key);
    std::vector<int> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const Json& v = arr.node()[i];
        if (!v.is_number() || v.get<double>() != std::floor(v.get<double>())) arr.at(i).fail("expected an integer");
        out.push_back(v.get<int>());
    }
    return out;
}

void Fields::only(const std::vector<std::string>& allowed) const
{
    if (!node_.is_object()) fail("expected an object");
    for (auto it = node_.begin(); it != node_.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            Fields(it.value(), path_ + "/" + it.key()).fail("unknown field");
}

meas::DiskMeasure parse_measure(const Fields& f)
{
    f.only({"atoms"});
    Fields atoms = f.child("atoms");
    std::vector<meas::InteriorAtom> interior;
    std::vector<meas::BoundaryAtom> boundary;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        Fields a = atoms.at(i);
        a.only({"angle", "position", "mass"});
        double mass = a.number("mass");
        if (!(mass > 0.0)) a.child("mass").fail("mass must be positive");
        if (a.has("angle") == a.has("position")) a.fail("give exactly one of angle or position");
        if (a.has("angle")) {
            boundary.push_back({a.number("angle"), mass});
        } else {
            auto xy = a.numbers("position");
            if (xy.size() != 2) a.child("position").fail("expected [x, y]");
            Complex z(xy[0], xy[1]);
            if (!(std::abs(z) < 1.0)) a.child("position").fail("position must lie in the open disk");
            interior.push_back({z, mass});
        }
    }
    return meas::DiskMeasure(std::move(interior), std::move(boundary));
}

Json measure_to_json(const meas::DiskMeasure& w)
{
    Json atoms = Json::array();
    for (const auto& a : w.interior())
        atoms.push_back(Json{{"position", {a.location.real(), a.location.imag()}}, {"mass", a.mass}});
    for (const auto& a : w.boundary()) atoms.push_back(Json{{"angle", a.angle}, {"mass", a.mass}});
    return Json{{"atoms", atoms}};
}

std::string to_string(Kind k)
{
    switch (k) {
    case Kind::entropy: return "entropy";
    case Kind::roberts: return "roberts";
    case Kind::gce_dirichlet: return "gce-dirichlet";
    case Kind::nearly_maximal: return "nearly-maximal";
    case Kind::diffuse_experiment: return "diffuse-experiment";
    case Kind::outer_eval: return "outer-eval";
    case Kind::bergman_distance: return "bergman-distance";
    case Kind::fund3_check: return "fund3-check";
    }
    return "?";
}

Kind parse_kind(const std::string& s)
{
    for (Kind k : {Kind::entropy, Kind::roberts, Kind::gce_dirichlet, Kind::nearly_maximal, Kind::diffuse_experiment,
                   Kind::outer_eval, Kind::bergman_distance, Kind::fund3_check})
        if (to_string(k) == s) return k;
    throw ValidationError("/kind: unknown scenario kind '" + s + "'");
}

Scenario parse_scenario(std::string_view text, const std::string& origin)
{
    Json j = parse_json(text, origin);
    Fields top(j, "");
    try {
        top.only({"kind", "name", "parameters"});
        Scenario s;
        s.kind = parse_kind(top.string("kind"));
        s.name = top.has("name") ? top.string("name") : to_string(s.kind);
        if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos || s.name[0] == '.')
            top.child("name").fail("must be a plain file stem");
        s.parameters = top.has("parameters") ? j["parameters"] : Json::object();
        if (!s.parameters.is_object()) top.child("parameters").fail("expected an object");
        // nlohmann::json keeps keys sorted, which makes the serialization canonical.
        s.canonical = nlohmann::json(j).dump();
        s.hash = fnv1a_hex(s.canonical);
        return s;
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

std::map<std::string, double*> Tolerances::fields()
{
    return {{"liouville_error", &liouville_error},
            {"liouville_seconds", &liouville_seconds},
            {"jensen_error", &jensen_error},
            {"jensen_seconds", &jensen_seconds},
            {"dirichlet_error", &dirichlet_error},
            {"dirichlet_refinement", &dirichlet_refinement},
            {"monotone_slack", &monotone_slack},
            {"roberts_mass", &roberts_mass},
            {"roberts_trace", &roberts_trace},
            {"subadditivity", &subadditivity},
            {"fund3_difference", &fund3_difference},
            {"bergman_sqrt_pi", &bergman_sqrt_pi},
            {"littlewood_paley", &littlewood_paley},
            {"outer_truncation", &outer_truncation},
            {"regression_slack", &regression_slack}};
}

Tolerances load_tolerances(std::string_view json_text, const std::string& origin)
{
    Json j = parse_json(json_text, origin);
    Tolerances t;
    auto map = t.fields();
    Fields top(j, "");
    try {
        std::vector<std::string> keys;
        for (const auto& [k, _] : map) keys.push_back(k);
        top.only(keys);
        for (auto& [k, ptr] : map)
            if (top.has(k)) {
                double v = top.number(k);
                if (!(v >= 0.0)) top.child(k).fail("must be nonnegative");
                *ptr = v;
            }
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    return t;
}

std::string format_result(const CriterionResult& r)
{
    return "criterion " + std::to_string(r.id) + " " + (r.pass ? "PASS" : "FAIL") + " " + r.name + ": " + r.detail;
}

}  // namespace innerlab::cli
