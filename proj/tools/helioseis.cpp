// helioseis: command-line front end. Exit status 0 on success, 2 on invalid
// input or configuration, 3 on numerical failure.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helioseis/helioseis.hpp"
#include "helioseis/numerics/interpolation.hpp"

using namespace helioseis;

namespace {

constexpr std::size_t kGridLimit = std::size_t{1} << 20;

struct Output {
    std::string path;

    void write(const std::string& text) const {
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + path);
        out << text;
        if (!out) throw ValidationError("cannot write " + path);
    }
    void write(const json& doc) const { write(doc.dump(2) + "\n"); }
    void write(const CsvTable& table) const {
        std::ostringstream ss;
        write_csv(ss, table);
        write(ss.str());
    }
};

void check_grid(std::size_t n, const char* what) {
    if (n < 2 || n > kGridLimit) {
        std::ostringstream msg;
        msg << what << " must lie in [2, " << kGridLimit << "]";
        throw ValidationError(msg.str());
    }
}

/// A model document, or an artifact whose result carries one.
json model_document(const json& doc) {
    if (doc.is_object() && doc.contains("result") && doc["result"].is_object() && doc["result"].contains("model"))
        return doc["result"]["model"];
    return doc;
}

RadialModel load(const std::string& path) { return load_model(model_document(read_json(path))); }

/// A radial function from a CSV with columns r,f, an inline JSON profile, or a
/// JSON profile file.
RadialFunction radial_function(const std::string& spec, json& description) {
    if (spec.size() >= 4 && spec.substr(spec.size() - 4) == ".csv") {
        const CsvTable t = read_csv(spec);
        const auto r = t.values("r");
        const auto f = t.values("f");
        description = {{"kind", "csv"}, {"r", r}, {"f", f}};
        auto spline = std::make_shared<numerics::CubicSpline>(r, f);
        return [spline](double x) { return (*spline)(x); };
    }
    json doc;
    if (!spec.empty() && spec.front() == '{') {
        try {
            doc = json::parse(spec);
        } catch (const json::exception& e) {
            throw SchemaError(std::string("inline profile: ") + e.what());
        }
    } else {
        doc = read_json(spec);
    }
    ProfilePtr p = profile_from_json(doc);
    description = p->to_json();
    return [p](double x) { return p->eval(x).c; };
}

ProfilePtr profile_argument(const std::string& spec) {
    if (!spec.empty() && spec.front() == '{') {
        try {
            return profile_from_json(json::parse(spec));
        } catch (const json::exception& e) {
            throw SchemaError(std::string("inline profile: ") + e.what());
        }
    }
    return profile_from_json(read_json(spec));
}

Regime regime_option(const std::string& s) {
    try {
        return regime_from_string(s);
    } catch (const std::exception&) {
        throw ValidationError("unknown regime '" + s + "'");
    }
}

// model ------------------------------------------------------------------

void model_validate(const std::string& path, const Output& out) {
    const RadialModel m = load(path);
    json result = {{"valid", true},
                   {"R", m.inner_radius()},
                   {"dim", m.dim()},
                   {"herglotz_margin", m.herglotz_margin()},
                   {"herglotz_argmin", m.herglotz_argmin()},
                   {"p_inner", m.p_inner()},
                   {"p_outer", m.p_outer()}};
    out.write(artifact({{"command", "model validate"}, {"model", m.to_json()}}, result));
}

void model_normalize(const std::string& path, double tol, const Output& out) {
    const json doc = read_json(path);
    int dim = 3;
    if (doc.contains("dim")) {
        if (!doc["dim"].is_number_integer()) throw SchemaError("'dim' must be an integer");
        dim = doc["dim"].get<int>();
    }
    NormalizeOptions opt;
    opt.quadrature.rel_tol = tol;
    const NormalizedMetric nm = normalize_metric(metric_from_json(doc), dim, opt);
    json result = {{"model", nm.model.to_json()},
                   {"source_radius", nm.source_radius},
                   {"mapped_radius", nm.mapped_radius},
                   {"twist", nm.twist}};
    out.write(artifact({{"command", "model normalize"}, {"metric", doc}, {"tolerance", tol}}, result));
}

// rays -------------------------------------------------------------------

void rays_table(const std::string& path, const std::string& kind, std::size_t count, const Output& out) {
    check_grid(count, "--count");
    const RadialModel m = load(path);
    const Regime regime = regime_option(kind);
    const double R = m.inner_radius();
    CsvTable t;
    t.config = {{"command", "rays table"}, {"model", m.to_json()}, {"kind", kind}, {"count", count}};
    t.rows.resize(count);
    if (regime == Regime::diving) {
        t.columns = {"r_tip", "p", "alpha", "L", "alpha_prime"};
        numerics::parallel_for(count, [&](std::size_t i) {
            const double r = R + (1.0 - R) * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
            const GeodesicSummary g = geodesic_summary(m, r);
            t.rows[i] = {r, g.p, g.alpha, g.L, g.alpha_prime};
        });
    } else {
        if (R == 0.0) throw DomainError("reflecting rays require R > 0");
        const MomentumWindow w = momentum_window(m, Regime::reflecting);
        t.columns = {"z", "B", "dB_dz", "segment_time"};
        numerics::parallel_for(count, [&](std::size_t i) {
            const double z = w.lo + (w.hi - w.lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
            const ReflectingAngle b = reflecting_angle(m, z);
            t.rows[i] = {z, b.B, b.dB_dz, reflecting_segment_time(m, z)};
        });
    }
    out.write(t);
}

void rays_path(const std::string& path, const std::string& kind, double parameter, std::size_t samples,
               const Output& out) {
    check_grid(samples, "--samples");
    const RadialModel m = load(path);
    const RayKind rk = regime_option(kind) == Regime::diving ? RayKind::diving : RayKind::reflecting;
    CsvTable t;
    t.config = {{"command", "rays path"}, {"model", m.to_json()}, {"kind", kind},
                {"parameter", parameter}, {"samples", samples}};
    t.columns = {"t", "r", "theta", "r_dot", "theta_dot"};
    for (const PathSample& s : ray_path(m, rk, parameter, samples)) t.rows.push_back({s.t, s.r, s.theta, s.r_dot, s.theta_dot});
    out.write(t);
}

// lsp --------------------------------------------------------------------

std::vector<PeriodicOrbit> all_orbits(const RadialModel& m, int n_max, const std::string& kind) {
    if (kind != "diving" && kind != "reflecting" && kind != "both")
        throw ValidationError("orbit kind must be diving, reflecting or both");
    std::vector<PeriodicOrbit> orbits;
    if (kind != "reflecting") orbits = enumerate_lsp(m, n_max);
    if (kind != "diving" && m.inner_radius() > 0.0) {
        for (auto& o : enumerate_lsp_reflecting(m, n_max)) orbits.push_back(o);
        detail::sort_orbits(orbits);
    }
    return orbits;
}

void lsp_list(const std::string& path, int n_max, const std::string& kind, const Output& out) {
    const RadialModel m = load(path);
    json orbits = json::array();
    for (const auto& o : all_orbits(m, n_max, kind)) orbits.push_back(to_json(o));
    out.write(artifact({{"command", "lsp list"}, {"model", m.to_json()}, {"n_max", n_max}, {"kind", kind}},
                       {{"orbits", orbits}}));
}

void lsp_check(const std::string& path, int n_max, const std::string& kind, double tol, std::size_t grid,
               const Output& out) {
    const RadialModel m = load(path);
    const auto orbits = all_orbits(m, n_max, kind);
    json intervals = json::array();
    for (const auto& s : conjugacy_scan(m, grid))
        intervals.push_back({{"r_lo", s.r_lo}, {"r_hi", s.r_hi}, {"min_abs_slope", s.min_abs_slope}});
    json collisions = json::array();
    for (const auto& c : nondegeneracy_report(orbits, tol))
        collisions.push_back({{"first", to_json(orbits[c.first])},
                              {"second", to_json(orbits[c.second])},
                              {"difference", c.difference}});
    std::size_t stable = 0;
    for (const auto& o : orbits)
        if (o.stability == Stability::stable && !o.limit_case) ++stable;
    out.write(artifact({{"command", "lsp check"},
                        {"model", m.to_json()},
                        {"n_max", n_max},
                        {"kind", kind},
                        {"tolerance", tol},
                        {"grid", grid}},
                       {{"orbit_count", orbits.size()},
                        {"stable_count", stable},
                        {"conjugacy_intervals", intervals},
                        {"length_collisions", collisions}}));
}

// modes ------------------------------------------------------------------

void modes_solve(const std::string& path, int l_min, int l_max, double omega_max, const std::string& regime,
                 const Output& out) {
    if (l_min < 0 || l_max < l_min || l_max > 5000) throw ValidationError("need 0 <= l-min <= l-max <= 5000");
    if (!(omega_max > 0.0)) throw ValidationError("--omega-max must be positive");
    const RadialModel m = load(path);
    std::vector<Regime> regimes;
    if (regime == "all") {
        regimes.push_back(Regime::diving);
        if (m.inner_radius() > 0.0) regimes.push_back(Regime::reflecting);
    } else {
        regimes.push_back(regime_option(regime));
    }
    const std::size_t count = static_cast<std::size_t>(l_max - l_min + 1);
    std::vector<std::vector<std::vector<double>>> rows(count);
    numerics::parallel_for(count, [&](std::size_t i) {
        const int l = l_min + static_cast<int>(i);
        const double k = l + 0.5;
        for (Regime r : regimes)
            for (const Mode& mode : modes_below(m, r, k, omega_max))
                rows[i].push_back({r == Regime::diving ? 0.0 : 1.0, static_cast<double>(l), k,
                                   static_cast<double>(mode.n), mode.omega, mode.p, mode.norm_constant,
                                   mode.residual});
    });
    CsvTable t;
    t.config = {{"command", "modes solve"}, {"model", m.to_json()}, {"l_min", l_min},   {"l_max", l_max},
                {"omega_max", omega_max},   {"regime", regime},     {"regime_codes", {"diving", "reflecting"}}};
    t.columns = {"regime", "l", "k", "n", "omega", "p", "norm_constant", "residual"};
    for (auto& v : rows)
        for (auto& row : v) t.rows.push_back(std::move(row));
    out.write(t);
}

/// "a..b" or a single integer.
std::pair<int, int> parse_int_range(const std::string& text) {
    const auto dots = text.find("..");
    const std::string lo = text.substr(0, dots);
    const std::string hi = dots == std::string::npos ? lo : text.substr(dots + 2);
    std::pair<int, int> out{};
    const auto a = std::from_chars(lo.data(), lo.data() + lo.size(), out.first);
    const auto b = std::from_chars(hi.data(), hi.data() + hi.size(), out.second);
    if (a.ec != std::errc{} || a.ptr != lo.data() + lo.size() || b.ec != std::errc{} ||
        b.ptr != hi.data() + hi.size() || out.first > out.second)
        throw ValidationError("expected an integer range a..b, got '" + text + "'");
    return out;
}

/// Comma-separated wavenumbers, or "a..b" for unit steps from a to b.
std::vector<double> parse_k_values(const std::string& text) {
    std::vector<double> out;
    auto number = [&](const std::string& item) {
        double v = 0.0;
        const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (r.ec != std::errc{} || r.ptr != item.data() + item.size() || !(v >= 0.0))
            throw ValidationError("bad wavenumber '" + item + "'");
        return v;
    };
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const double a = number(text.substr(0, dots));
        const double b = number(text.substr(dots + 2));
        if (b < a || b - a > 5000.0) throw ValidationError("wavenumber range must be increasing and at most 5000 long");
        for (double k = a; k <= b + 1e-9; k += 1.0) out.push_back(k);
        return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
    if (out.empty()) throw ValidationError("no wavenumbers given");
    return out;
}

/// Eigenfrequencies at explicit overtones n and raw wavenumbers k.
void modes_solve_nk(const std::string& path, const std::string& n_text, const std::string& k_text,
                    const std::string& regime, const Output& out) {
    if (regime == "all") throw ValidationError("--n/--k need a single --regime (diving or reflecting)");
    const Regime r = regime_option(regime);
    const auto [n_lo, n_hi] = parse_int_range(n_text);
    if (n_lo < 0) throw ValidationError("overtone numbers must be non-negative");
    const std::vector<double> ks = parse_k_values(k_text);
    const RadialModel m = load(path);
    const std::size_t per_k = static_cast<std::size_t>(n_hi - n_lo + 1);
    std::vector<std::vector<double>> rows(ks.size() * per_k);
    numerics::parallel_for(rows.size(), [&](std::size_t i) {
        const double k = ks[i / per_k];
        const int n = n_lo + static_cast<int>(i % per_k);
        const Mode mode = solve_omega(m, r, n, k);
        rows[i] = {r == Regime::diving ? 0.0 : 1.0, static_cast<double>(n), k, mode.omega,
                   mode.p,  mode.norm_constant,  mode.residual};
    });
    CsvTable t;
    t.config = {{"command", "modes solve"}, {"model", m.to_json()}, {"n", n_text},
                {"k", k_text},              {"regime", regime},     {"regime_codes", {"diving", "reflecting"}}};
    t.columns = {"regime", "n", "k", "omega", "p", "norm_constant", "residual"};
    t.rows = std::move(rows);
    out.write(t);
}

// trace ------------------------------------------------------------------

void trace_synth(const std::string& path, int l_max, double omega_max, double window, double t_min, double t_max,
                 std::size_t samples, const Output& out) {
    check_grid(samples, "--samples");
    const RadialModel m = load(path);
    const ModeSet modes = build_mode_set(m, l_max, omega_max);
    const TraceSeries tr = synth_trace(modes, uniform_grid(t_min, t_max, samples), window, {true});
    CsvTable t;
    t.config = {{"command", "trace synth"}, {"model", m.to_json()}, {"l_max", l_max},
                {"omega_max", omega_max},   {"window", window},     {"t_min", t_min},
                {"t_max", t_max},           {"samples", samples},   {"mode_count", tr.mode_count},
                {"modes", modes.provenance}};
    t.columns = {"t", "value", "quadrature"};
    for (std::size_t i = 0; i < tr.t.size(); ++i) t.rows.push_back({tr.t[i], tr.values[i], tr.quadrature[i]});
    out.write(t);
}

TraceSeries trace_from_csv(const CsvTable& t) {
    TraceSeries tr;
    tr.t = t.values("t");
    tr.values = t.values("value");
    try {
        tr.quadrature = t.values("quadrature");
    } catch (const SchemaError&) {
        tr.quadrature.clear();
    }
    if (t.config.is_object() && t.config.contains("window")) tr.window = t.config["window"].get<double>();
    return tr;
}

PeakSource source_option(const std::string& s) {
    if (s == "envelope") return PeakSource::envelope;
    if (s == "magnitude") return PeakSource::magnitude;
    throw ValidationError("unknown peak source '" + s + "'");
}

void trace_peaks(const std::string& path, double threshold, const std::string& source, const Output& out) {
    const CsvTable in = read_csv(path);
    const TraceSeries tr = trace_from_csv(in);
    if (source == "envelope" && tr.quadrature.empty()) throw ValidationError("envelope peaks need a quadrature column");
    CsvTable t;
    t.config = {{"command", "trace peaks"}, {"trace", in.config}, {"threshold", threshold}, {"source", source}};
    t.columns = {"t", "height"};
    for (const Peak& p : detect_peaks(tr, threshold, source_option(source))) t.rows.push_back({p.t, p.height});
    out.write(t);
}

void trace_match(const std::string& trace_path, const std::string& lsp_path, double threshold,
                 const std::string& source, double tol, const Output& out) {
    const CsvTable in = read_csv(trace_path);
    const json lsp = read_json(lsp_path);
    if (!lsp.contains("result") || !lsp["result"].contains("orbits") || !lsp.contains("config") ||
        !lsp["config"].contains("model"))
        throw SchemaError(lsp_path + " is not a length spectrum artifact");
    if (!in.config.is_object() || !in.config.contains("model"))
        throw SchemaError(trace_path + " has no model in its configuration header");
    if (in.config["model"] != lsp["config"]["model"])
        throw ValidationError("trace and length spectrum were computed for different models");
    const RadialModel m = load_model(lsp["config"]["model"]);
    const TraceSeries tr = trace_from_csv(in);
    if (source == "envelope" && tr.quadrature.empty()) throw ValidationError("envelope peaks need a quadrature column");
    if (!(tol > 0.0)) {
        if (!std::isfinite(tr.window)) throw ValidationError("--tol is required for an unsmoothed trace");
        tol = 2.0 * std::numbers::pi / tr.window;
    }
    std::vector<PeriodicOrbit> orbits;
    for (const auto& o : lsp["result"]["orbits"]) orbits.push_back(orbit_from_json(o));
    const auto peaks = detect_peaks(tr, threshold, source_option(source));
    const auto preds = predict_singularities(m, orbits, tr.t.back());
    const MatchReport rep = match_report(preds, peaks, tol);

    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json predictions = json::array();
    for (const auto& mt : rep.matches) {
        const auto& p = preds[mt.prediction];
        json row = {{"kind", to_string(p.orbit.kind)},
                    {"m", p.orbit.m},
                    {"n", p.orbit.n},
                    {"q", p.q},
                    {"period", p.period},
                    {"amplitude", num(p.amplitude)},
                    {"tau_pp", num(p.tau_pp)},
                    {"caustics", p.caustics},
                    {"maslov_leg", p.maslov_leg},
                    {"degenerate", p.degenerate},
                    {"isolated", mt.isolated},
                    {"matched", mt.peak.has_value()},
                    {"peak_t", mt.peak ? json(peaks[*mt.peak].t) : json(nullptr)},
                    {"offset", num(mt.offset)}};
        if (!p.note.empty()) row["note"] = p.note;
        predictions.push_back(row);
    }
    json unexplained = json::array();
    for (std::size_t j : rep.unexplained_peaks) unexplained.push_back({{"t", peaks[j].t}, {"height", peaks[j].height}});
    json amplitudes = json::array();
    for (const auto& a : rep.amplitudes)
        amplitudes.push_back({{"m", preds[a.prediction].orbit.m},
                              {"n", preds[a.prediction].orbit.n},
                              {"period", preds[a.prediction].period},
                              {"measured", a.measured},
                              {"predicted", a.predicted},
                              {"ratio", a.ratio}});
    out.write(artifact({{"command", "trace match"},
                        {"trace", in.config},
                        {"lsp", lsp["config"]},
                        {"threshold", threshold},
                        {"source", source},
                        {"tolerance", tol}},
                       {{"peak_count", peaks.size()},
                        {"missing", rep.missing},
                        {"predictions", predictions},
                        {"unexplained_peaks", unexplained},
                        {"amplitudes", amplitudes},
                        {"scale", num(rep.scale)}}));
}

// abel -------------------------------------------------------------------

void abel_forward_cmd(const std::string& path, const std::string& f_spec, std::size_t grid, const Output& out) {
    const RadialModel m = load(path);
    json description;
    const RadialFunction f = radial_function(f_spec, description);
    const AbelGrid g = make_abel_grid(m, grid);
    const auto values = abel_sample(m, g, f);
    CsvTable t;
    t.config = {{"command", "abel forward"}, {"model", m.to_json()}, {"f", description}, {"grid", grid}};
    t.columns = {"r", "g"};
    for (std::size_t i = 0; i < g.size(); ++i) t.rows.push_back({g.r[i], values[i]});
    out.write(t);
}

void abel_invert_cmd(const std::string& path, const std::string& g_path, const Output& out) {
    const RadialModel m = load(path);
    const CsvTable in = read_csv(g_path);
    const AbelGrid g = make_abel_grid(m, in.values("r"));
    const AbelInversion inv = abel_invert(g, in.values("g"));
    CsvTable t;
    t.config = {{"command", "abel invert"},
                {"model", m.to_json()},
                {"data", in.config},
                {"effective_rank", inv.effective_rank},
                {"forward_residual", inv.forward_residual}};
    t.columns = {"r", "f"};
    for (std::size_t i = 0; i < g.size(); ++i) t.rows.push_back({inv.r[i], inv.f[i]});
    out.write(t);
}

// rigidity ---------------------------------------------------------------

void rigidity_check(const std::string& path, const std::string& h_spec, int n_max, double epsilon, bool additive,
                    std::size_t grid, const Output& out) {
    const RadialModel m = load(path);
    const auto family = DeformationFamily::create(m, profile_argument(h_spec), epsilon,
                                                  additive ? DeformationKind::additive : DeformationKind::multiplicative);
    RigidityOptions opt;
    opt.grid_size = grid;
    const RigidityReport rep = rigidity_experiment(family, n_max, opt);
    out.write(artifact({{"command", "rigidity check"}, {"family", family.to_json()}, {"n_max", n_max}, {"grid", grid}},
                       to_json(rep)));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial models, periodic rays, WKB modes, spectral traces and rigidity experiments."};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    app.add_option("-o,--output", out.path, "Write the artifact here instead of stdout");
    app.set_version_flag("--version", kVersion);

    std::string model_path, other_path, kind = "diving", regime = "all", source = "envelope", spec;
    int n_max = 8, l_min = 0, l_max = 300;
    std::size_t count = 200, samples = 4001, grid = 400;
    double parameter = 0.5, omega_max = 400.0, window = 150.0, t_min = 0.5, t_max = 8.0, threshold = 0.1, tol = 0.0,
           epsilon = 0.01, qtol = 1e-12, collision_tol = 1e-8;
    std::string lsp_kind = "diving", n_range, k_values;
    bool reflecting = false, additive = false;

    auto* model = app.add_subcommand("model", "Validate or normalize radial models");
    model->require_subcommand(1);
    auto* validate = model->add_subcommand("validate", "Check a model document");
    validate->add_option("model", model_path)->required();
    auto* normalize = model->add_subcommand("normalize", "Conformally normalize a metric table");
    normalize->add_option("metric", model_path)->required();
    normalize->add_option("--tol", qtol, "Quadrature tolerance")->check(CLI::PositiveNumber);

    auto* rays = app.add_subcommand("rays", "Ray geometry");
    rays->require_subcommand(1);
    auto* table = rays->add_subcommand("table", "Half angle and length over tip radii (or B(z))");
    table->add_option("model", model_path)->required();
    table->add_option("--kind", kind, "diving or reflecting");
    table->add_option("--r-grid,--count", count, "Number of tip radii (or momenta)");
    auto* path = rays->add_subcommand("path", "Sample one maximal ray");
    path->add_option("model", model_path)->required();
    path->add_option("--kind", kind, "diving or reflecting");
    path->add_option("--tip,--parameter", parameter, "Tip radius (diving) or momentum (reflecting)");
    path->add_option("--samples", samples);

    auto* lsp = app.add_subcommand("lsp", "Length spectrum");
    lsp->require_subcommand(1);
    auto* list = lsp->add_subcommand("list", "Enumerate primitive periodic orbits");
    list->add_option("model", model_path)->required();
    list->add_option("--n-max", n_max)->check(CLI::Range(2, 1000));
    list->add_option("--kind", lsp_kind, "diving, reflecting or both");
    list->add_flag("--reflecting", reflecting, "Same as --kind both");
    auto* check = lsp->add_subcommand("check", "Conjugacy scan and length collisions");
    check->add_option("model", model_path)->required();
    check->add_option("--n-max", n_max)->check(CLI::Range(2, 1000));
    check->add_option("--kind", lsp_kind, "diving, reflecting or both");
    check->add_flag("--reflecting", reflecting, "Same as --kind both");
    std::size_t scan_grid = 256;
    check->add_option("--tol", collision_tol, "Length collision tolerance")->check(CLI::PositiveNumber);
    check->add_option("--grid", scan_grid, "Conjugacy scan grid")->check(CLI::Range(64, 1 << 20));

    auto* modes = app.add_subcommand("modes", "WKB eigenfrequencies");
    modes->require_subcommand(1);
    auto* solve = modes->add_subcommand("solve", "All modes with l in [l-min, l-max] and omega <= omega-max");
    solve->add_option("model", model_path)->required();
    solve->add_option("--l-min", l_min);
    solve->add_option("--l-max", l_max);
    solve->add_option("--omega-max", omega_max);
    solve->add_option("--regime", regime, "diving, reflecting or all");
    solve->add_option("--n", n_range, "Overtones a..b; with --k solves single (n, k) cells");
    solve->add_option("--k", k_values, "Wavenumbers: comma list or a..b");

    auto* trace = app.add_subcommand("trace", "Smoothed spectral trace");
    trace->require_subcommand(1);
    auto* synth = trace->add_subcommand("synth", "Sum (2l+1) cos(t omega) exp(-(omega/W)^2)");
    synth->add_option("model", model_path)->required();
    synth->add_option("--l-max", l_max)->check(CLI::Range(0, 5000));
    synth->add_option("--omega-max", omega_max)->check(CLI::PositiveNumber);
    synth->add_option("--window", window)->check(CLI::PositiveNumber);
    synth->add_option("--t-min", t_min);
    synth->add_option("--t-max", t_max);
    synth->add_option("--samples", samples);
    auto* peaks = trace->add_subcommand("peaks", "Peaks above threshold * max");
    peaks->add_option("trace", other_path)->required();
    peaks->add_option("--threshold", threshold)->check(CLI::Range(0.0, 1.0));
    peaks->add_option("--source", source, "envelope or magnitude");
    auto* match = trace->add_subcommand("match", "Compare peaks with predicted singularities");
    match->add_option("trace", other_path)->required();
    match->add_option("lsp", model_path, "Output of lsp list")->required();
    match->add_option("--threshold", threshold)->check(CLI::Range(0.0, 1.0));
    match->add_option("--source", source, "envelope or magnitude");
    match->add_option("--tol", tol, "Match tolerance; default 2 pi / window");

    auto* abel = app.add_subcommand("abel", "Abel-type transform along diving rays");
    abel->require_subcommand(1);
    auto* forward = abel->add_subcommand("forward", "Sample A f on a uniform grid");
    forward->add_option("model", model_path)->required();
    forward->add_option("--f", spec, "Profile JSON (file or inline) or CSV with columns r,f")->required();
    forward->add_option("--grid", grid)->check(CLI::Range(4, static_cast<int>(kAbelGridLimit)));
    auto* invert = abel->add_subcommand("invert", "Recover f from samples of A f");
    invert->add_option("model", model_path)->required();
    invert->add_option("--g", other_path, "CSV with columns r,g ending at r = 1")->required();

    auto* rigidity = app.add_subcommand("rigidity", "Length-derivative experiments");
    rigidity->require_subcommand(1);
    auto* rcheck = rigidity->add_subcommand("check", "First variation of orbit lengths under c0 (1 + tau h)");
    rcheck->set_help_flag("--help", "Print this help message and exit");
    rcheck->add_option("model", model_path)->required();
    rcheck->add_option("--h", spec, "Perturbation profile JSON (file or inline)")->required();
    rcheck->add_option("--n-max", n_max)->check(CLI::Range(2, 1000));
    rcheck->add_option("--epsilon", epsilon)->check(CLI::PositiveNumber);
    rcheck->add_flag("--additive", additive, "Use c0 + tau h");
    rcheck->add_option("--grid", grid)->check(CLI::Range(4, static_cast<int>(kAbelGridLimit)));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) model_validate(model_path, out);
        else if (*normalize) model_normalize(model_path, qtol, out);
        else if (*table) rays_table(model_path, kind, count, out);
        else if (*path) rays_path(model_path, kind, parameter, samples, out);
        else if (*list) lsp_list(model_path, n_max, reflecting ? "both" : lsp_kind, out);
        else if (*check) lsp_check(model_path, n_max, reflecting ? "both" : lsp_kind, collision_tol, scan_grid, out);
        else if (*solve && (!n_range.empty() || !k_values.empty())) {
            if (n_range.empty() || k_values.empty()) throw ValidationError("--n and --k go together");
            modes_solve_nk(model_path, n_range, k_values, regime, out);
        } else if (*solve) modes_solve(model_path, l_min, l_max, omega_max, regime, out);
        else if (*synth) trace_synth(model_path, l_max, omega_max, window, t_min, t_max, samples, out);
        else if (*peaks) trace_peaks(other_path, threshold, source, out);
        else if (*match) trace_match(other_path, model_path, threshold, source, tol, out);
        else if (*forward) abel_forward_cmd(model_path, spec, grid, out);
        else if (*invert) abel_invert_cmd(model_path, other_path, out);
        else if (*rcheck) rigidity_check(model_path, spec, n_max, epsilon, additive, grid, out);
    } catch (const ValidationError& e) {
        std::cerr << "helioseis: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "helioseis: numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "helioseis: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
