#include "io.hpp"

#include "qpsl/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qpsl::cli {

std::string JsonConfig::to_config(const CLI::App* app, bool, bool, std::string) const {
    return run_config(app).dump(2);
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
    json j;
    try {
        input >> j;
    } catch (const json::exception& e) {
        throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::string sub;
    if (root_) {
        const auto chosen = root_->get_subcommands();
        if (!chosen.empty()) sub = chosen.front()->get_name();
    }
    std::vector<CLI::ConfigItem> items;
    auto scalar = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string() || (!sub.empty() && value.get<std::string>() != sub))
                throw CLI::ConversionError("config file is for command " + value.dump() + ", not '" + sub + "'");
            continue;
        }
        CLI::ConfigItem item;
        if (!sub.empty()) item.parents = {sub};
        item.name = key;
        if (value.is_array()) {
            for (const auto& v : value) item.inputs.push_back(scalar(v));
        } else if (value.is_object()) {
            throw CLI::ConversionError("nested objects are not supported in config files (key '" + key + "')");
        } else {
            item.inputs.push_back(scalar(value));
        }
        items.push_back(std::move(item));
    }
    return items;
}

json run_config(const CLI::App* app) {
    json cfg = json::object();
    cfg["command"] = app->get_name();
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config" || name == "out" || name == "csv") continue;
        std::vector<std::string> vals;
        if (opt->count() > 0) {
            vals = opt->reduced_results();
            if (opt->get_type_size() == 0 && vals.empty()) vals.push_back("true");
        } else {
            std::string d = opt->get_default_str();
            if (d.size() >= 2 && d.front() == '[' && d.back() == ']') {
                std::stringstream ss(d.substr(1, d.size() - 2));
                std::string tok;
                while (std::getline(ss, tok, ',')) vals.push_back(tok);
            } else if (!d.empty()) {
                vals.push_back(d);
            } else if (opt->get_type_size() == 0) {
                vals.push_back("false");
            }
        }
        if (vals.empty()) continue;
        if (opt->get_items_expected_max() > 1) {
            cfg[name] = vals;
            continue;
        }
        if (vals.size() == 1)
            cfg[name] = vals[0];
        else
            cfg[name] = vals;
    }
    return cfg;
}

std::string config_hash(const json& config) {
    const std::string s = config.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json document(const std::string& schema, const json& config) {
    json doc = json::object();
    doc["schema"] = schema;
    doc["config_hash"] = config_hash(config);
    doc["config"] = config;
    return doc;
}

std::string csv_header(const std::string& schema, const json& config, const std::vector<std::string>& columns) {
    std::ostringstream os;
    os << "# schema: " << schema << "\n# config-hash: " << config_hash(config) << "\n# config: " << config.dump()
       << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    return os.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::ConfigInvalid, "cannot open output file " + path);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::ConfigInvalid, "cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string fmt(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json to_json(const IVec& n) {
    json a = json::array();
    for (auto v : n) a.push_back(v);
    return a;
}

IVec ivec_from_json(const json& j) {
    IVec n;
    for (const auto& v : j) n.push_back(v.get<std::int64_t>());
    return n;
}

json to_json(const Mat2& A) {
    json m = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int k = 0; k < 2; ++k) row.push_back({A(i, k).real(), A(i, k).imag()});
        m.push_back(row);
    }
    return m;
}

json to_json(const RMat2& A) { return json{{A(0, 0), A(0, 1)}, {A(1, 0), A(1, 1)}}; }

json to_json(const MatrixSeries& S) {
    json rows = json::array();
    for (const auto& [m, c] : S.coeffs()) {
        json r = json::array();
        for (auto v : m) r.push_back(v);
        for (int e = 0; e < 4; ++e) {
            r.push_back(c(e / 2, e % 2).real());
            r.push_back(c(e / 2, e % 2).imag());
        }
        rows.push_back(r);
    }
    return json{{"dim", S.dim()}, {"key_units", S.doubled() ? "half" : "integer"}, {"coeffs", rows}};
}

json to_json(const LabelSet& ks, int digits) {
    json j = json::object();
    j["d"] = ks.d;
    json alpha = json::array();
    for (const auto& c : ks.alpha.components) alpha.push_back(c.text);
    j["alpha"] = alpha;
    j["digits"] = digits;
    j["gamma"] = ks.alpha.gamma;
    j["tau"] = ks.alpha.tau;
    j["schedule"] = {{"M", ks.schedule.M},
                     {"s", ks.schedule.s},
                     {"depth", ks.schedule.depth()},
                     {"ell_star", ks.schedule.ell_star},
                     {"strict", ks.schedule.strict},
                     {"log_levels", ks.schedule.log_levels}};
    json entries = json::array();
    for (const auto& e : ks.entries)
        entries.push_back({{"m", e.m}, {"base", to_json(e.base)}, {"shift", e.shift}, {"label", to_json(e.label)},
                           {"level", e.level}});
    j["entries"] = entries;
    j["relaxations"] = ks.relaxations;
    return j;
}

LabelSet label_set_from_json(const json& j) {
    try {
        LabelSet ks;
        ks.d = j.at("d").get<std::size_t>();
        const int digits = j.value("digits", 0);
        for (const auto& a : j.at("alpha")) ks.alpha.components.push_back(ExactReal::parse(a.get<std::string>(), digits));
        ks.alpha.gamma = j.value("gamma", 1.0);
        ks.alpha.tau = j.value("tau", 1.0);
        const auto& s = j.at("schedule");
        ks.schedule = build_schedule(s.at("M").get<double>(), s.at("s").get<double>(), s.at("depth").get<std::size_t>(),
                                     s.value("strict", false), s.value("ell_star", 0.0));
        for (const auto& e : j.at("entries")) {
            LabelEntry le;
            le.m = e.at("m").get<std::size_t>();
            le.base = ivec_from_json(e.at("base"));
            le.shift = e.at("shift").get<std::int64_t>();
            le.label = ivec_from_json(e.at("label"));
            le.level = e.at("level").get<std::size_t>();
            if (le.label.size() != ks.d) fail(ErrorKind::ConfigInvalid, "label dimension differs from d");
            ks.entries.push_back(le);
        }
        if (j.contains("relaxations")) ks.relaxations = j.at("relaxations").get<std::vector<std::string>>();
        if (ks.alpha.dim() != ks.d) fail(ErrorKind::ConfigInvalid, "alpha dimension differs from d");
        return ks;
    } catch (const json::exception& e) {
        fail(ErrorKind::ConfigInvalid, std::string("malformed label-set file: ") + e.what());
    }
}

json to_json(const LabelSetReport& r) {
    json rows = json::array();
    for (const auto& d : r.density)
        rows.push_back({{"target", d.target}, {"best_by_count", d.best_by_count}, {"best", d.best},
                        {"within_tol", d.within_tol}});
    return json{{"structural_ok", r.structural_ok()}, {"sparsity_ok", r.sparsity_ok}, {"annulus_ok", r.annulus_ok},
                {"floor_ok", r.floor_ok},           {"windows_ok", r.windows_ok},   {"spacing_ok", r.spacing_ok},
                {"violations", r.violations},       {"density", rows}};
}

json to_json(const StepReport& r) {
    return json{{"step", r.step},
                {"case", to_string(r.kind)},
                {"site", to_json(r.site)},
                {"resonance_distance", r.resonance_distance},
                {"resonance_unique", r.resonance_unique},
                {"norm_before", r.norm_before},
                {"norm_after", r.norm_after},
                {"rho_before", r.rho_before},
                {"rho_after", r.rho_after},
                {"xi", r.diag.xi},
                {"M", r.diag.big_m},
                {"m", r.diag.small_m},
                {"b_next", {r.b_next.real(), r.b_next.imag()}},
                {"newton_iterations", r.newton_iterations},
                {"conj_residual", r.conj_residual},
                {"dropped", r.dropped},
                {"notes", r.notes}};
}

json to_json(const ReducibilityResult& r, bool with_steps) {
    json j{{"energy_initial", r.energy_initial},
           {"energy", r.energy},
           {"lock_label", to_json(r.lock_label)},
           {"lock_distance", r.lock_distance},
           {"zeta", r.zeta},
           {"sign", r.sign},
           {"phi", r.phi},
           {"A_final", to_json(r.A_final)},
           {"final_f_norm", r.final_f_norm},
           {"parabolic_defect", r.parabolic_defect},
           {"conj_residual", r.conj_residual},
           {"k0", r.k0},
           {"B_norm_k0", r.B_norm_k0},
           {"B_norm_bound", r.B_norm_bound},
           {"zeta_window",
            {{"label_norm", r.window.label_norm},
             {"lower", r.window.lower},
             {"upper", r.window.upper},
             {"holds", r.window.holds}}},
           {"dropped", r.dropped},
           {"refinements", r.refinements},
           {"B", to_json(r.B)}};
    if (with_steps) {
        json steps = json::array();
        for (const auto& s : r.steps) steps.push_back(to_json(s));
        j["steps"] = steps;
    }
    return j;
}

json to_json(const ProbeResult& r) {
    return json{{"delta", r.delta},         {"energy", r.energy},       {"d_delta", r.d_delta},
                {"verdict", to_string(r.verdict)}, {"rotation_shift", r.rotation_shift}, {"residual", r.residual},
                {"lyapunov", r.lyapunov},   {"horizon", r.horizon},     {"margin", r.margin}};
}

json to_json(const PolyBoundsReport& r) {
    return json{{"kappa", r.kappa},         {"B_norm", r.B_norm},       {"precondition", r.precondition},
                {"ratio", r.ratio},         {"ratio_bound", r.ratio_bound}, {"ratio_ok", r.ratio_ok},
                {"det", r.det},             {"det_bound", r.det_bound}, {"det_ok", r.det_ok},
                {"a11_bound", r.a11_bound}, {"a11_ok", r.a11_ok},       {"degenerate", r.degenerate},
                {"notes", r.notes}};
}

MatrixSeries matrix_series_from_json(const json& j) {
    try {
        const std::size_t dim = j.at("dim").get<std::size_t>();
        const bool doubled = j.at("key_units").get<std::string>() == "half";
        MatrixSeries S(dim, doubled, ValueKind::SL2R);
        for (const auto& r : j.at("coeffs")) {
            if (r.size() != dim + 8) fail(ErrorKind::ConfigInvalid, "matrix series row has the wrong length");
            IVec m(dim);
            for (std::size_t i = 0; i < dim; ++i) m[i] = r[i].get<std::int64_t>();
            Mat2 c;
            for (int e = 0; e < 4; ++e) c(e / 2, e % 2) = cplx(r[dim + 2 * e].get<double>(), r[dim + 2 * e + 1].get<double>());
            S.set(m, c);
        }
        return S;
    } catch (const json::exception& e) {
        fail(ErrorKind::ConfigInvalid, std::string("malformed matrix series: ") + e.what());
    }
}

std::string label_text(const IVec& n) {
    std::string s;
    for (std::size_t i = 0; i < n.size(); ++i) s += (i ? ":" : "") + std::to_string(n[i]);
    return s;
}

IVec parse_vector(const std::string& spec) {
    IVec n;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            n.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            fail(ErrorKind::ConfigInvalid, "cannot parse integer '" + tok + "'");
        }
    }
    if (n.empty()) fail(ErrorKind::ConfigInvalid, "empty lattice vector");
    return n;
}

std::vector<IVec> parse_labels(const std::string& spec, std::size_t d) {
    std::vector<IVec> out;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        if (d != 1) fail(ErrorKind::ConfigInvalid, "label ranges are only available for d = 1");
        const IVec a = parse_vector(spec.substr(0, dots)), b = parse_vector(spec.substr(dots + 2));
        if (a.size() != 1 || b.size() != 1 || a[0] > b[0]) fail(ErrorKind::ConfigInvalid, "bad label range " + spec);
        for (auto k = a[0]; k <= b[0]; ++k) out.push_back({k});
        return out;
    }
    if (d == 1) {
        for (auto v : parse_vector(spec)) out.push_back({v});
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        IVec n = parse_vector(tok);
        if (n.size() != d) fail(ErrorKind::ConfigInvalid, "label " + tok + " has the wrong dimension");
        out.push_back(n);
    }
    return out;
}

} // namespace qpsl::cli
