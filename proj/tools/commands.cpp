#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperwave/error.hpp"
#include "hyperwave/groups.hpp"
#include "hyperwave/kernels.hpp"
#include "hyperwave/locsym.hpp"
#include "hyperwave/parallel.hpp"
#include "hyperwave/special.hpp"
#include "hyperwave/strichartz.hpp"

namespace hyperwave::cli {
namespace {

using nlohmann::json;

struct UsageError : DomainError {
    using DomainError::DomainError;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------- config

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"", {"version", "space", "group", "kernel", "grid", "quotient", "tolerances", "output"}},
        {"space", {"n"}},
        {"group", {"preset", "rapidity", "axis", "inline", "file"}},
        {"kernel", {"kappa", "kappa_tilde", "sigma_re", "sigma_im", "high", "cutoff"}},
        {"grid", {"t_min", "t_max", "t_count", "log_spaced", "r", "r_min", "r_max", "r_count", "pairs"}},
        {"grid.pairs", {"count", "radius", "seed"}},
        {"quotient", {"R", "q", "small_window", "large_window"}},
        {"tolerances", {"small_slope", "large_slope", "light_cone_band", "reliability_gap"}},
        {"output", {"path", "summary"}},
    };
    return s;
}

void check_keys(const json& doc, const std::string& section) {
    if (!doc.is_object()) throw UsageError("config: " + (section.empty() ? std::string("document") : section) + " must be an object");
    const auto& allowed = schema().at(section);
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.count(key)) {
            throw UsageError("config: unknown key '" + (section.empty() ? key : section + "." + key) + "'");
        }
        const std::string sub = section.empty() ? key : section + "." + key;
        if (schema().count(sub) && sub != "group") check_keys(value, sub);
    }
}

struct Config {
    int n = 3;
    json group = json{{"preset", "trivial"}};
    std::optional<double> kappa, kappa_tilde;
    double sigma_re = 2.0, sigma_im = 0.0;
    bool high = true;
    CutoffProfile profile = CutoffProfile::exponential;
    double t_min = 4.0, t_max = 64.0;
    int t_count = 12;
    bool log_grid = true;
    std::vector<double> r{0.0, 0.5, 1.0, 1.5, 2.0};
    std::size_t pair_count = 8;
    double pair_radius = 1.0;
    std::uint64_t pair_seed = 1;
    double R = 12.0;
    double q = INFINITY;
    std::pair<double, double> small_window{1.0 / 64.0, 0.25};
    std::pair<double, double> large_window{4.0, 64.0};
    double small_tol = 0.15, large_tol = 0.15;
    double band = 0.1, gap = 0.05;
    std::string out, summary;
};

template <class T>
T get(const json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError("config: '" + where + "." + key + "' has the wrong type");
    }
}

std::pair<double, double> window_of(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw UsageError("config: '" + where + "' must be [lo, hi]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Config parse_config(const json& doc) {
    check_keys(doc, "");
    if (!doc.contains("version") || doc["version"] != 1) throw UsageError("config: 'version' must be 1");
    Config c;
    if (doc.contains("space")) {
        const auto& s = doc["space"];
        if (s.contains("n")) c.n = get<int>(s, "n", "space");
    }
    if (c.n < 2) throw UsageError("config: space.n must be at least 2");
    if (doc.contains("group")) c.group = doc["group"];
    if (doc.contains("kernel")) {
        const auto& k = doc["kernel"];
        if (k.contains("kappa")) c.kappa = get<double>(k, "kappa", "kernel");
        if (k.contains("kappa_tilde")) c.kappa_tilde = get<double>(k, "kappa_tilde", "kernel");
        if (k.contains("sigma_re")) c.sigma_re = get<double>(k, "sigma_re", "kernel");
        if (k.contains("sigma_im")) c.sigma_im = get<double>(k, "sigma_im", "kernel");
        if (k.contains("high")) c.high = get<bool>(k, "high", "kernel");
        if (k.contains("cutoff")) {
            const auto name = get<std::string>(k, "cutoff", "kernel");
            if (name == "exponential") c.profile = CutoffProfile::exponential;
            else if (name == "squared") c.profile = CutoffProfile::squared;
            else throw UsageError("config: kernel.cutoff must be 'exponential' or 'squared'");
        }
    }
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (g.contains("t_min")) c.t_min = get<double>(g, "t_min", "grid");
        if (g.contains("t_max")) c.t_max = get<double>(g, "t_max", "grid");
        if (g.contains("t_count")) c.t_count = get<int>(g, "t_count", "grid");
        if (g.contains("log_spaced")) c.log_grid = get<bool>(g, "log_spaced", "grid");
        const bool range = g.contains("r_min") || g.contains("r_max") || g.contains("r_count");
        if (g.contains("r") && range) throw UsageError("config: give grid.r or grid.r_min/r_max/r_count, not both");
        if (g.contains("r")) c.r = get<std::vector<double>>(g, "r", "grid");
        if (range) {
            const double lo = g.contains("r_min") ? get<double>(g, "r_min", "grid") : 0.0;
            const double hi = g.contains("r_max") ? get<double>(g, "r_max", "grid") : lo;
            const int count = g.contains("r_count") ? get<int>(g, "r_count", "grid") : 1;
            c.r.clear();
            for (int i = 0; i < count; ++i) c.r.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        }
        if (g.contains("pairs")) {
            const auto& p = g["pairs"];
            if (p.contains("count")) c.pair_count = get<std::size_t>(p, "count", "grid.pairs");
            if (p.contains("radius")) c.pair_radius = get<double>(p, "radius", "grid.pairs");
            if (p.contains("seed")) c.pair_seed = get<std::uint64_t>(p, "seed", "grid.pairs");
        }
    }
    if (doc.contains("quotient")) {
        const auto& q = doc["quotient"];
        if (q.contains("R")) c.R = get<double>(q, "R", "quotient");
        if (q.contains("q")) {
            const auto& v = q["q"];
            if (v.is_null() || v == "inf") c.q = INFINITY;
            else if (v.is_number()) c.q = v.get<double>();
            else throw UsageError("config: quotient.q must be a number, \"inf\" or null");
        }
        if (q.contains("small_window")) c.small_window = window_of(q["small_window"], "quotient.small_window");
        if (q.contains("large_window")) c.large_window = window_of(q["large_window"], "quotient.large_window");
    }
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        if (t.contains("small_slope")) c.small_tol = get<double>(t, "small_slope", "tolerances");
        if (t.contains("large_slope")) c.large_tol = get<double>(t, "large_slope", "tolerances");
        if (t.contains("light_cone_band")) c.band = get<double>(t, "light_cone_band", "tolerances");
        if (t.contains("reliability_gap")) c.gap = get<double>(t, "reliability_gap", "tolerances");
    }
    if (doc.contains("output")) {
        const auto& o = doc["output"];
        if (o.contains("path")) c.out = get<std::string>(o, "path", "output");
        if (o.contains("summary")) c.summary = get<std::string>(o, "summary", "output");
    }
    return c;
}

std::vector<double> t_grid(const Config& c) {
    if (c.t_count < 1) throw UsageError("grid: t_count must be positive");
    if (!(c.t_min > 0.0) || !(c.t_max >= c.t_min)) throw UsageError("grid: need 0 < t_min <= t_max");
    if (c.t_count == 1) return {c.t_min};
    if (c.log_grid) return log_spaced(c.t_min, c.t_max, c.t_count);
    std::vector<double> t;
    for (int i = 0; i < c.t_count; ++i) t.push_back(c.t_min + (c.t_max - c.t_min) * i / (c.t_count - 1));
    return t;
}

WaveParams wave_params(const Config& c, const SpaceParams& p, double t) {
    WaveParams wp = WaveParams::low_defaults(p, t);
    if (c.kappa) wp.kappa = *c.kappa;
    if (c.kappa_tilde) wp.kappa_tilde = *c.kappa_tilde;
    wp.sigma = cplx(c.sigma_re, c.sigma_im);
    return wp;
}

KernelOptions kernel_options(const Config& c) {
    KernelOptions o;
    o.light_cone_band = c.band;
    o.reliability_gap = c.gap;
    return o;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

GroupPresentation build_group(const Config& c) {
    const json& g = c.group;
    check_keys(g, "group");
    const int forms = g.contains("preset") + g.contains("inline") + g.contains("file");
    if (forms != 1) throw UsageError("config: group needs exactly one of 'preset', 'inline', 'file'");
    if (g.contains("inline") || g.contains("file")) {
        const json doc = g.contains("inline") ? g["inline"] : read_json_file(g["file"].get<std::string>());
        GroupPresentation out = group_from_json(doc);
        if (out.n != c.n) throw UsageError("config: group acts on H^" + std::to_string(out.n) + " but space.n = " + std::to_string(c.n));
        return out;
    }
    const auto name = get<std::string>(g, "preset", "group");
    if (name == "trivial") return trivial_group(c.n);
    if (name == "cyclic") {
        const double ell = g.contains("rapidity") ? get<double>(g, "rapidity", "group") : 4.0;
        const int axis = g.contains("axis") ? get<int>(g, "axis", "group") : 1;
        return cyclic_group(c.n, ell, axis);
    }
    if (name == "schottky") {
        const double ell = g.contains("rapidity") ? get<double>(g, "rapidity", "group") : 6.0;
        return schottky_preset(c.n, ell);
    }
    throw UsageError("config: unknown group preset '" + name + "'");
}

// Built-in experiment documents, selected by --experiment.
const std::map<std::string, json>& experiments() {
    static const std::map<std::string, json> e{
        {"large-time", json::parse(R"({"version": 1, "space": {"n": 3},
            "grid": {"t_min": 4, "t_max": 64, "t_count": 12, "log_spaced": true, "r_min": 0, "r_max": 2, "r_count": 9}})")},
        {"small-time", json::parse(R"({"version": 1, "space": {"n": 3},
            "kernel": {"sigma_re": 2, "sigma_im": 1},
            "grid": {"t_min": 0.015625, "t_max": 0.25, "t_count": 9, "log_spaced": true, "r": [1]}})")},
        {"trivial", json::parse(R"({"version": 1, "space": {"n": 3}, "group": {"preset": "trivial"},
            "grid": {"t_min": 4, "t_max": 64, "t_count": 12, "pairs": {"count": 8, "radius": 1, "seed": 1}},
            "quotient": {"R": 12}})")},
        {"cyclic", json::parse(R"({"version": 1, "space": {"n": 3}, "group": {"preset": "cyclic", "rapidity": 4},
            "grid": {"t_min": 4, "t_max": 64, "t_count": 12, "pairs": {"count": 8, "radius": 1, "seed": 1}},
            "quotient": {"R": 12}})")},
        {"schottky", json::parse(R"({"version": 1, "space": {"n": 3}, "group": {"preset": "schottky", "rapidity": 6},
            "grid": {"t_min": 4, "t_max": 64, "t_count": 12, "pairs": {"count": 4, "radius": 1, "seed": 1}},
            "quotient": {"R": 12}})")},
    };
    return e;
}

// Flags shared by the config-driven commands; unset ones leave the document alone.
struct Overrides {
    std::string config, experiment, out, summary, group;
    int n = 0;
    double t_min = 0, t_max = 0, R = 0, rapidity = 0, sigma_re = 0, sigma_im = 0;
    int t_count = 0;
    bool serial = false;
    std::map<std::string, CLI::Option*> given;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON config document");
        app->add_option("--experiment", experiment, "built-in config: large-time, small-time, trivial, cyclic, schottky");
        app->add_option("--out", out, "output file (default: stdout)");
        given["n"] = app->add_option("--n", n, "dimension of H^n");
        given["t_min"] = app->add_option("--t-min", t_min);
        given["t_max"] = app->add_option("--t-max", t_max);
        given["t_count"] = app->add_option("--t-count", t_count);
        given["R"] = app->add_option("--R", R, "orbit truncation radius");
        given["group"] = app->add_option("--group", group, "group preset: trivial, cyclic, schottky");
        given["rapidity"] = app->add_option("--rapidity", rapidity, "translation length of the preset generators");
        given["sigma_re"] = app->add_option("--sigma-re", sigma_re);
        given["sigma_im"] = app->add_option("--sigma-im", sigma_im);
        app->add_flag("--serial", serial, "run the serial reference loop");
    }

    bool has(const char* key) const { return given.at(key)->count() > 0; }

    json document() const {
        json doc = json{{"version", 1}};
        if (!experiment.empty()) {
            const auto it = experiments().find(experiment);
            if (it == experiments().end()) throw UsageError("unknown experiment '" + experiment + "'");
            doc = it->second;
        }
        if (!config.empty()) {
            const json file = read_json_file(config);
            if (!file.is_object()) throw UsageError("config: document must be an object");
            if (!experiment.empty()) {
                doc.merge_patch(file);
            } else {
                doc = file;
            }
        }
        if (has("n")) doc["space"]["n"] = n;
        if (has("t_min")) doc["grid"]["t_min"] = t_min;
        if (has("t_max")) doc["grid"]["t_max"] = t_max;
        if (has("t_count")) doc["grid"]["t_count"] = t_count;
        if (has("R")) doc["quotient"]["R"] = R;
        if (has("group")) doc["group"] = json{{"preset", group}};
        if (has("rapidity")) doc["group"]["rapidity"] = rapidity;
        if (has("sigma_re")) doc["kernel"]["sigma_re"] = sigma_re;
        if (has("sigma_im")) doc["kernel"]["sigma_im"] = sigma_im;
        if (!out.empty()) doc["output"]["path"] = out;
        if (!summary.empty()) doc["output"]["summary"] = summary;
        return doc;
    }

    ExecutionMode mode() const { return serial ? ExecutionMode::serial : ExecutionMode::parallel; }
};

// Writes to `path`, or to `fallback` when the path is empty or "-".
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    write(f);
    if (!f) throw UsageError("write to '" + path + "' failed");
}

void emit_json(const std::string& path, std::ostream& fallback, const json& j) {
    emit(path, fallback, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

// ---------------------------------------------------------------- commands

void cmd_kernel(const Overrides& ov, std::ostream& out) {
    const Config c = parse_config(ov.document());
    if (c.r.empty()) throw UsageError("kernel: the r grid is empty");
    for (double r : c.r) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw UsageError("kernel: r values must be finite and >= 0");
    }
    const SpaceParams p = SpaceParams::hyperbolic(c.n);
    const auto ts = t_grid(c);
    const double top = 0.5 * (c.n + 1.0);
    if (c.high && (c.sigma_re < 0.0 || c.sigma_re > top)) {
        throw DomainError("kernel: Re sigma = " + fmt(c.sigma_re) + " lies outside [0, (n+1)/2] with the high part on");
    }
    wave_params(c, p, ts.front()).validate(p);
    const CutoffPair cut = cutoffs(c.profile);
    const KernelOptions opts = kernel_options(c);
    const bool high_vanishes = rgamma(top - cplx(c.sigma_re, c.sigma_im)) == cplx{};

    struct Cell {
        double low = 0.0;
        std::optional<double> high;
        bool reliable = true;
    };
    std::vector<Cell> cells(ts.size() * c.r.size());
    (void)inversion_constant(p);
    for_each_index(cells.size(), ov.mode(), [&](std::size_t k) {
        const double t = ts[k / c.r.size()], r = c.r[k % c.r.size()];
        const WaveParams wp = wave_params(c, p, t);
        Cell& cell = cells[k];
        cell.low = std::abs(omega0(p, wp, r, cut));
        if (!c.high) return;
        if (in_light_cone_band(t, r, opts.light_cone_band)) {
            if (high_vanishes) {
                cell.high = 0.0;
            } else {
                cell.reliable = false;
            }
            return;
        }
        const auto h = omega_inf_tilde(p, wp, r, cut, opts);
        cell.high = std::abs(h.value);
        cell.reliable = h.reliable;
    });

    emit(c.out, out, [&](std::ostream& os) {
        os << "t,r,abs_omega0,abs_omega_inf_tilde,reliable\n";
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const Cell& cell = cells[k];
            os << fmt(ts[k / c.r.size()]) << ',' << fmt(c.r[k % c.r.size()]) << ',' << fmt(cell.low) << ','
               << (cell.high ? fmt(*cell.high) : std::string()) << ',' << (cell.reliable ? 1 : 0) << '\n';
        }
    });
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t used = 0;
    try {
        const double v = std::stod(s, &used);
        if (used != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

struct DecayFitArgs {
    std::string input, column, x_column = "t", reduce = "max", out;
    std::vector<double> window;
};

void cmd_decay_fit(const DecayFitArgs& a, std::ostream& out) {
    std::ifstream in(a.input);
    if (!in) throw UsageError("decay-fit: cannot open '" + a.input + "'");
    std::string line;
    if (!std::getline(in, line)) throw UsageError("decay-fit: '" + a.input + "' is empty");
    const auto header = split_csv_line(line);
    auto index_of = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto xi = index_of(a.x_column);
    const auto yi = index_of(a.column);
    if (!xi) throw UsageError("decay-fit: no column '" + a.x_column + "'");
    if (!yi) throw UsageError("decay-fit: no column '" + a.column + "'");
    const auto ri = index_of("reliable");
    if (a.reduce != "max" && a.reduce != "none") throw UsageError("decay-fit: --reduce must be 'max' or 'none'");
    if (!a.window.empty() && (a.window.size() != 2 || !(a.window[0] <= a.window[1]))) {
        throw UsageError("decay-fit: --window needs lo <= hi");
    }

    std::vector<std::pair<double, double>> rows;
    std::size_t unreliable = 0, skipped = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw UsageError("decay-fit: ragged row '" + line + "'");
        const auto x = parse_number(f[*xi]);
        const auto y = parse_number(f[*yi]);
        if (!x || !y) {
            ++skipped;
            continue;
        }
        if (!a.window.empty() && (*x < a.window[0] || *x > a.window[1])) continue;
        if (ri && f[*ri] == "0") {
            ++unreliable;
            continue;
        }
        rows.emplace_back(*x, std::abs(*y));
    }
    if (a.reduce == "max") {
        std::map<double, double> sup;
        for (const auto& [x, y] : rows) {
            auto [it, fresh] = sup.emplace(x, y);
            if (!fresh) it->second = std::max(it->second, y);
        }
        rows.assign(sup.begin(), sup.end());
    }
    std::size_t positive = 0;
    for (const auto& r : rows) positive += r.first > 0.0 && r.second > 0.0;
    if (positive < 5 || positive != rows.size()) {
        throw NumericalError("decay-fit: need at least 5 rows in the window, all positive; have " +
                                 std::to_string(positive) + " positive of " + std::to_string(rows.size()),
                             static_cast<double>(positive));
    }
    const DecayFit fit = fit_decay_exponent(rows);
    json j{{"column", a.column},
           {"x_column", a.x_column},
           {"reduce", a.reduce},
           {"slope", fit.slope},
           {"intercept", fit.intercept},
           {"r2", fit.r2},
           {"points", rows.size()},
           {"excluded_unreliable", unreliable},
           {"skipped_empty", skipped}};
    j["window"] = a.window.empty() ? json(nullptr) : json{a.window[0], a.window[1]};
    emit_json(a.out, out, j);
}

void cmd_group(const Overrides& ov, std::ostream& out) {
    const Config c = parse_config(ov.document());
    const SpaceParams p = SpaceParams::hyperbolic(c.n);
    const GroupPresentation g = build_group(c);
    json j{{"kind", to_string(g.kind)}, {"n", g.n}, {"generators", g.generators.size()}, {"rho", p.rho}};
    if (g.kind == GroupKind::schottky) {
        const auto cert = ping_pong_certificate(g);
        j["ping_pong_margin"] = cert.margin;
        j["ping_pong_max_pairing"] = cert.max_pairing;
        j["ping_pong_samples"] = cert.samples;
    } else {
        j["ping_pong_margin"] = nullptr;
    }
    if (g.generators.empty()) {
        j.update(json{{"delta_counting", 0.0}, {"delta_abscissa", 0.0}, {"orbit_size", 1}, {"radius", 0.0},
                      {"r2", nullptr}, {"degenerate", false}});
    } else {
        const HPoint o = origin(c.n);
        double R = 30.0;
        std::size_t size = 0;
        while ((size = enumerate_orbit(g, o, o, R).size()) < 200) R *= 1.5;
        const DeltaEstimate est = estimate_delta(g, R);
        j.update(json{{"delta_counting", est.counting},
                      {"delta_abscissa", est.abscissa},
                      {"orbit_size", size},
                      {"radius", R},
                      {"r2", est.r2},
                      {"degenerate", est.degenerate},
                      {"growth", {{"delta", est.growth.delta}, {"amplitude", est.growth.amplitude}}}});
        const double worst = std::max(est.counting, est.abscissa);
        j["below_rho_margin"] = worst < p.rho - 0.1;
        if (!(worst < p.rho - 0.1)) {
            throw NumericalError("group: estimated critical exponent " + fmt(worst) + " is not below rho - 0.1", worst);
        }
    }
    j["tolerances"] = {{"rho_margin", 0.1}, {"min_samples", 200}};
    emit_json(c.out, out, j);
}

void cmd_quotient(const Overrides& ov, std::ostream& out) {
    const Config c = parse_config(ov.document());
    const SpaceParams p = SpaceParams::hyperbolic(c.n);
    const QuotientSetup q = prepare_quotient(build_group(c), p);
    if (c.pair_count == 0) throw UsageError("quotient: grid.pairs.count must be positive");
    DispersiveConfig cfg;
    cfg.sigma = cplx(c.sigma_re, c.sigma_im);
    cfg.kappa = c.kappa;
    cfg.kappa_tilde = c.kappa_tilde;
    cfg.q = c.q;
    cfg.t_grid = t_grid(c);
    cfg.pairs = sample_pairs(c.n, c.pair_count, c.pair_radius, c.pair_seed);
    cfg.R = c.R;
    cfg.small_window = c.small_window;
    cfg.large_window = c.large_window;
    cfg.small_tolerance = c.small_tol;
    cfg.large_tolerance = c.large_tol;
    cfg.cut = cutoffs(c.profile);
    cfg.kernel = kernel_options(c);
    cfg.mode = ov.mode();
    const DispersiveResult res = dispersive_decay_experiment(q, p, cfg);

    emit(c.out, out, [&](std::ostream& os) { write_dispersive_csv(os, res); });
    json s = dispersive_summary(res);
    std::size_t flagged = 0;
    for (const auto& row : res.rows) flagged += !row.reliable;
    s["group"] = to_string(q.group.kind);
    s["delta_hat"] = q.delta_hat;
    s["R"] = c.R;
    s["q"] = std::isinf(c.q) ? json("inf") : json(c.q);
    s["pairs"] = c.pair_count;
    s["unreliable_rows"] = flagged;
    if (!c.summary.empty()) {
        emit_json(c.summary, out, s);
    } else if (!c.out.empty() && c.out != "-") {
        out << s.dump(2) << '\n';
    }
}

struct ExponentArgs {
    int n = 0;
    int grid = 32;
    std::string out;
    CLI::Option* inv_p_opt = nullptr;
    CLI::Option* inv_q_opt = nullptr;
    double inv_p = 0.0, inv_q = 0.0;
    std::vector<double> gammas;
};

void cmd_exponents(const std::string& which, const ExponentArgs& a, std::ostream& out) {
    if (a.n < 2) throw DomainError("exponents: n must be at least 2");
    if (which == "gwp") {
        const GwpThresholds t = gwp_thresholds(a.n);
        json j{{"n", a.n},
               {"thresholds",
                {{"gamma1", t.gamma1}, {"gamma2", t.gamma2}, {"gamma_c", t.gamma_c}, {"gamma3", t.gamma3}, {"gamma4", t.gamma4}}}};
        json rows = json::array();
        for (double gamma : a.gammas) {
            const GwpRegularity r = gwp_regularity(a.n, gamma);
            rows.push_back({{"gamma", gamma},
                            {"sigma", r.above_gamma4 ? json(nullptr) : json(r.sigma)},
                            {"branch", r.branch},
                            {"open_threshold", r.open_threshold},
                            {"above_gamma4", r.above_gamma4}});
        }
        j["regularity"] = rows;
        emit_json(a.out, out, j);
        return;
    }
    const bool point = a.inv_p_opt->count() > 0 || a.inv_q_opt->count() > 0;
    if (point) {
        if (!(a.inv_p_opt->count() && a.inv_q_opt->count())) throw UsageError("exponents: give both --inv-p and --inv-q");
        const ExponentPair e = ExponentPair::make(a.inv_p, a.inv_q);
        json j{{"n", a.n}, {"inv_p", e.inv_p}, {"inv_q", e.inv_q}, {"admissible", is_admissible(a.n, e)}};
        if (which == "sigma") j["sigma"] = sigma_pq(a.n, e);
        emit_json(a.out, out, j);
        return;
    }
    if (a.grid < 1) throw UsageError("exponents: --grid must be positive");
    (void)is_admissible(a.n, {0.0, 0.5});
    emit(a.out, out, [&](std::ostream& os) { write_region_raster(os, a.n, a.grid); });
}

void report(std::ostream& err, const char* kind, const std::string& message, int code,
            std::optional<double> estimate = std::nullopt) {
    json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (estimate) j["estimate"] = std::isfinite(*estimate) ? json(*estimate) : json(fmt(*estimate));
    err << j.dump() << '\n';
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wave kernels on hyperbolic space and its quotients"};
    app.require_subcommand(1);

    Overrides kernel_ov, group_ov, quotient_ov;
    auto* kernel = app.add_subcommand("kernel", "CSV of |omega^{sigma,0}| and |omega~^{sigma,inf}| on a (t, r) grid");
    kernel_ov.attach(kernel);
    auto* group = app.add_subcommand("group", "critical exponent and ping-pong data of a group");
    group_ov.attach(group);
    auto* quotient = app.add_subcommand("quotient", "summed kernel on Gamma\\H^n over sampled pairs");
    quotient_ov.attach(quotient);
    quotient->add_option("--summary", quotient_ov.summary, "summary JSON file");

    DecayFitArgs fit;
    auto* decay = app.add_subcommand("decay-fit", "log-log slope of a CSV column");
    decay->add_option("--input", fit.input, "CSV file")->required();
    decay->add_option("--column", fit.column, "value column")->required();
    decay->add_option("--x-column", fit.x_column, "time column");
    decay->add_option("--window", fit.window, "lo hi")->expected(2);
    decay->add_option("--reduce", fit.reduce, "max: sup over rows sharing a time; none: every row");
    decay->add_option("--out", fit.out, "output file (default: stdout)");

    ExponentArgs ex;
    auto* exponents = app.add_subcommand("exponents", "Strichartz exponent arithmetic");
    exponents->require_subcommand(1);
    std::vector<CLI::App*> exponent_subs;
    for (const char* name : {"admissible", "sigma", "gwp"}) {
        auto* s = exponents->add_subcommand(name);
        s->add_option("--n", ex.n, "dimension")->required();
        s->add_option("--out", ex.out, "output file (default: stdout)");
        if (std::string(name) == "gwp") {
            s->add_option("--gamma", ex.gammas, "powers at which to evaluate sigma(gamma)");
        } else {
            s->add_option("--grid", ex.grid, "raster nodes per axis minus one");
            s->add_option("--inv-p", ex.inv_p, "1/p of a single pair");
            s->add_option("--inv-q", ex.inv_q, "1/q of a single pair");
        }
        exponent_subs.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        report(err, "usage", e.what(), exit_usage);
        return exit_usage;
    }

    try {
        (void)configured_threads();
        if (*kernel) cmd_kernel(kernel_ov, out);
        else if (*group) cmd_group(group_ov, out);
        else if (*quotient) cmd_quotient(quotient_ov, out);
        else if (*decay) cmd_decay_fit(fit, out);
        else {
            for (auto* s : exponent_subs) {
                if (!*s) continue;
                if (s->get_name() != "gwp") {
                    ex.inv_p_opt = s->get_option("--inv-p");
                    ex.inv_q_opt = s->get_option("--inv-q");
                }
                cmd_exponents(s->get_name(), ex, out);
            }
        }
    } catch (const UsageError& e) {
        report(err, "usage", e.what(), exit_usage);
        return exit_usage;
    } catch (const DomainError& e) {
        report(err, "domain", e.what(), exit_usage);
        return exit_usage;
    } catch (const NumericalError& e) {
        report(err, "numerical", e.what(), exit_numerical, e.estimate());
        return exit_numerical;
    } catch (const std::exception& e) {
        report(err, "numerical", e.what(), exit_numerical);
        return exit_numerical;
    }
    return exit_ok;
}

}  // namespace hyperwave::cli
