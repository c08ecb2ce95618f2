// qpsl: batch front end for the quasi-periodic Schrödinger toolkit.
//
// Every subcommand accepts --config <file.json> (flat object keyed by long
// option names) and --out <path>; outputs embed the effective configuration
// and its hash.  Exit codes: 0 success, 1 invalid configuration, 2 computation
// error (a JSON object {"error", "message"} is written to stderr).

#include "io.hpp"

#include "qpsl/cocycle.hpp"
#include "qpsl/diophantine.hpp"
#include "qpsl/errors.hpp"
#include "qpsl/kam.hpp"
#include "qpsl/label_set.hpp"
#include "qpsl/moser_poschel.hpp"
#include "qpsl/potential.hpp"
#include "qpsl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace qpsl;
using namespace qpsl::cli;

namespace {

constexpr const char* kSchemaCf = "qpsl.cf/1";
constexpr const char* kSchemaSet = "qpsl.label-set/1";
constexpr const char* kSchemaVerify = "qpsl.verify-set/1";
constexpr const char* kSchemaPotential = "qpsl.potential/1";
constexpr const char* kSchemaRotation = "qpsl.rotation/1";
constexpr const char* kSchemaIds = "qpsl.ids/1";
constexpr const char* kSchemaGaps = "qpsl.gaps/1";
constexpr const char* kSchemaKam = "qpsl.kam/1";
constexpr const char* kSchemaProbe = "qpsl.edge-probe/1";
constexpr const char* kSchemaProbeRow = "qpsl.edge-probe-rows/1";
constexpr const char* kSchemaReport = "qpsl.report/1";

// ---------------------------------------------------------------------------
// Shared option groups

struct FrequencyOpts {
    std::vector<std::string> alpha{"golden"};
    int digits = 0;
    double gamma = 0.1;
    double tau = 1.0;

    void add(CLI::App* app) {
        app->add_option("--alpha", alpha, "frequency components: decimal strings or presets (golden, silver)")
            ->capture_default_str();
        app->add_option("--digits", digits, "decimal precision of the frequency strings (0: as written)")
            ->capture_default_str();
        app->add_option("--gamma", gamma, "Diophantine constant")->capture_default_str();
        app->add_option("--tau", tau, "Diophantine exponent")->capture_default_str();
    }

    FrequencyVector build() const {
        FrequencyVector f;
        for (const auto& a : alpha) f.components.push_back(ExactReal::parse(a, digits));
        f.gamma = gamma;
        f.tau = tau;
        if (f.dim() == 0) fail(ErrorKind::ConfigInvalid, "at least one frequency component is required");
        return f;
    }
};

struct PotentialOpts {
    std::string set;
    std::string preset;
    double lambda = 0.5;
    double k = 3.0;
    std::string label;
    double coeff = 0.0;

    void add(CLI::App* app) {
        app->add_option("--set", set, "label-set file; the potential is Σ |n|^{-k} cos⟨n,θ⟩ over its labels");
        app->add_option("--preset", preset, "named potential: amo (2λ cos θ)");
        app->add_option("--lambda", lambda, "coupling of the amo preset")->capture_default_str();
        app->add_option("--k", k, "decay exponent of the coefficients")->capture_default_str();
        app->add_option("--label", label, "single-mode potential: lattice vector n1,n2,…");
        app->add_option("--coeff", coeff, "coefficient of the single-mode potential (0: |n|^{-k})")
            ->capture_default_str();
    }
};

struct Model {
    Potential V;
    std::vector<double> alpha;
    std::optional<LabelSet> set;
};

Model build_model(const PotentialOpts& p, const FrequencyOpts& f) {
    Model m;
    const int sources = int(!p.set.empty()) + int(!p.preset.empty()) + int(!p.label.empty());
    if (sources != 1) fail(ErrorKind::ConfigInvalid, "exactly one of --set, --preset, --label is required");
    if (!p.set.empty()) {
        m.set = label_set_from_json(json::parse(read_file(p.set), nullptr, false));
        m.V = build_potential(*m.set, p.k);
        m.alpha = m.set->alpha.values();
    } else if (!p.preset.empty()) {
        if (p.preset != "amo") fail(ErrorKind::ConfigInvalid, "unknown potential preset '" + p.preset + "'");
        m.V = amo_potential(p.lambda);
        m.alpha = f.build().values();
        if (m.alpha.size() != 1) fail(ErrorKind::ConfigInvalid, "the amo preset needs a single frequency");
    } else {
        const IVec n = parse_vector(p.label);
        const double c = p.coeff != 0.0 ? p.coeff : std::pow(static_cast<double>(sup_norm(n)), -p.k);
        m.V = single_label_potential(n, c, p.k);
        m.alpha = f.build().values();
        if (m.alpha.size() != n.size()) fail(ErrorKind::ConfigInvalid, "label and frequency dimensions differ");
    }
    return m;
}

json potential_json(const Potential& V) {
    json labels = json::array(), coeffs = json::array();
    for (const auto& n : V.labels) labels.push_back(to_json(n));
    for (double c : V.coeffs) coeffs.push_back(c);
    return json{{"dim", V.dim},           {"labels", labels}, {"coeffs", coeffs}, {"k", V.k_exponent},
                {"c_bound", V.c_bound}, {"sup_bound", V.sup_bound()}};
}

Potential potential_from_json(const json& j) {
    Potential V;
    V.dim = j.at("dim").get<std::size_t>();
    for (const auto& n : j.at("labels")) V.labels.push_back(ivec_from_json(n));
    V.coeffs = j.at("coeffs").get<std::vector<double>>();
    V.k_exponent = j.at("k").get<double>();
    V.c_bound = j.at("c_bound").get<double>();
    return V;
}

struct EnergyGrid {
    double emin = NAN;
    double emax = NAN;
    int points = 801;

    void add(CLI::App* app) {
        app->add_option("--emin", emin, "lower end of the energy grid (default: spectrum hull)");
        app->add_option("--emax", emax, "upper end of the energy grid (default: spectrum hull)");
        app->add_option("--grid", points, "number of grid energies")->capture_default_str()->check(CLI::Range(2, 100000000));
    }

    std::vector<double> build(const Potential& V) const {
        const double hull = 2.0 + V.sup_bound();
        const double lo = std::isnan(emin) ? -hull : emin;
        const double hi = std::isnan(emax) ? hull : emax;
        if (!(lo < hi)) fail(ErrorKind::ConfigInvalid, "empty energy range");
        std::vector<double> g(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
        return g;
    }
};

json parse_json_file(const std::string& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::ConfigInvalid, path + " is not valid JSON");
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Subcommands

void cmd_cf(CLI::App& root) {
    auto* app = root.add_subcommand("cf", "continued-fraction expansion and best denominators");
    auto freq = std::make_shared<FrequencyOpts>();
    auto depth = std::make_shared<int>(10);
    auto out = std::make_shared<std::string>();
    auto json_out = std::make_shared<bool>(false);
    app->add_option("--alpha", freq->alpha, "frequency (decimal string or preset)")->capture_default_str();
    app->add_option("--digits", freq->digits, "decimal precision (0: as written)")->capture_default_str();
    app->add_option("--depth", *depth, "number of denominators q_0..q_{depth-1}")
        ->capture_default_str()
        ->check(CLI::Range(1, 100000));
    app->add_flag("--json", *json_out, "write the full expansion as JSON");
    app->add_option("--out", *out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        if (freq->alpha.size() != 1) fail(ErrorKind::ConfigInvalid, "cf takes a single frequency");
        const auto alpha = ExactReal::parse(freq->alpha[0], freq->digits);
        const auto cf = cf_expand(alpha, static_cast<std::size_t>(*depth));
        if (!*json_out) {
            std::ostringstream os;
            os << "q =";
            for (int k = 0; k < *depth; ++k) os << (k ? "," : " ") << cf.q[k].str();
            os << "\n";
            write_output(*out, os.str());
            return;
        }
        json doc = document(kSchemaCf, cfg);
        json rows = json::array();
        for (std::size_t k = 0; k <= cf.depth(); ++k)
            rows.push_back({{"k", k}, {"a", cf.a[k].str()}, {"p", cf.p[k].str()}, {"q", cf.q[k].str()},
                            {"dist", cf.q_dist(k)}});
        doc["alpha"] = alpha.text;
        doc["rows"] = rows;
        write_output(*out, dump(doc));
    });
}

void cmd_build_set(CLI::App& root) {
    auto* app = root.add_subcommand("build-set", "construct the sparse label set");
    struct Opts {
        FrequencyOpts freq;
        double M = 10.0, s = 0.9, ell_star = 0.0;
        std::size_t depth = 8, j1 = 0, spacing = 2, count = 1, cf_depth = 0;
        bool strict = false;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->freq.add(app);
    app->add_option("--M", o->M, "growth base ℓ_0")->capture_default_str();
    app->add_option("--s", o->s, "growth exponent: ℓ_{j+1} = ℓ_j^{1+s}")->capture_default_str();
    app->add_option("--levels", o->depth, "number of schedule levels")->capture_default_str();
    app->add_option("--ell-star", o->ell_star, "floor ℓ* (strict mode; 0 = computed)")->capture_default_str();
    app->add_option("--j1", o->j1, "level of the first label")->capture_default_str();
    app->add_option("--spacing", o->spacing, "level spacing between labels")->capture_default_str();
    app->add_option("--count", o->count, "number of labels")->capture_default_str();
    app->add_option("--cf-depth", o->cf_depth, "continued-fraction depth (0 = automatic)")->capture_default_str();
    app->add_flag("--strict", o->strict, "enforce every schedule requirement");
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        const auto alpha = o->freq.build();
        const auto schedule = build_schedule(o->M, o->s, o->depth, o->strict, o->ell_star);
        const auto ks = construct_label_set(alpha, schedule, o->j1, o->spacing, o->count, o->cf_depth);
        json doc = document(kSchemaSet, cfg);
        doc.update(to_json(ks, o->freq.digits));
        write_output(o->out, dump(doc));
    });
}

void cmd_verify_set(CLI::App& root) {
    auto* app = root.add_subcommand("verify-set", "check sparsity, windows and density of a label set");
    struct Opts {
        std::string set, out;
        std::vector<double> targets;
        double tol = 0.05;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--set", o->set, "label-set file")->required();
    app->add_option("--density-targets", o->targets, "half-phase targets t checked for ‖⟨n,α⟩/2 − t‖");
    app->add_option("--density-tol", o->tol, "accepted distance to each target")->capture_default_str();
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        const auto ks = label_set_from_json(parse_json_file(o->set));
        const auto rep = verify_label_set(ks, ks.schedule, o->targets, o->tol);
        json doc = document(kSchemaVerify, cfg);
        doc["report"] = to_json(rep);
        write_output(o->out, dump(doc));
    });
}

void cmd_potential(CLI::App& root) {
    auto* app = root.add_subcommand("potential", "coefficients and samples of the potential");
    struct Opts {
        FrequencyOpts freq;
        PotentialOpts pot;
        int samples = 0;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->freq.add(app);
    o->pot.add(app);
    app->add_option("--samples", o->samples, "sample V on this many points of the diagonal θ = t(1,…,1)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        const auto m = build_model(o->pot, o->freq);
        json doc = document(kSchemaPotential, cfg);
        doc["potential"] = potential_json(m.V);
        doc["coefficient_bound_holds"] = m.V.coefficient_bound_holds();
        json samples = json::array();
        for (int i = 0; i < o->samples; ++i) {
            const double t = 2.0 * M_PI * i / o->samples;
            samples.push_back({t, m.V(std::vector<double>(m.V.dim, t))});
        }
        doc["samples"] = samples;
        write_output(o->out, dump(doc));
    });
}

void cmd_rotation(CLI::App& root) {
    auto* app = root.add_subcommand("rotation", "fibered rotation number ρ(E) on an energy grid");
    struct Opts {
        FrequencyOpts freq;
        PotentialOpts pot;
        EnergyGrid grid;
        long long iters = 100000;
        int samples = 2;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->freq.add(app);
    o->pot.add(app);
    o->grid.add(app);
    app->add_option("--iters", o->iters, "cocycle iterations per phase")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--samples", o->samples, "phase samples")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        const auto m = build_model(o->pot, o->freq);
        const auto curve = rotation_curve(m.V, m.alpha, o->grid.build(m.V), o->iters, o->samples);
        std::string s = csv_header(kSchemaRotation, cfg, {"E", "rho"});
        for (std::size_t i = 0; i < curve.energies.size(); ++i)
            s += fmt(curve.energies[i]) + "," + fmt(curve.rho[i]) + "\n";
        write_output(o->out, s);
        if (!curve.monotone)
            std::cerr << "warning: rotation number decreases by up to " << curve.max_increase
                      << " along the grid; increase --iters\n";
    });
}

void cmd_ids(CLI::App& root) {
    auto* app = root.add_subcommand("ids", "finite-volume integrated density of states");
    struct Opts {
        FrequencyOpts freq;
        PotentialOpts pot;
        EnergyGrid grid;
        int N = 500;
        int phases = 4;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->freq.add(app);
    o->pot.add(app);
    o->grid.add(app);
    app->add_option("--N", o->N, "half-width of the Dirichlet box [−N, N]")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--phases", o->phases, "phase average count")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        const auto m = build_model(o->pot, o->freq);
        const auto curve = ids_curve(m.V, m.alpha, o->grid.build(m.V), o->N, o->phases);
        std::string s = csv_header(kSchemaIds, cfg, {"E", "ids"});
        for (std::size_t i = 0; i < curve.energies.size(); ++i)
            s += fmt(curve.energies[i]) + "," + fmt(curve.values[i]) + "\n";
        write_output(o->out, s);
    });
}

void cmd_gaps(CLI::App& root) {
    auto* app = root.add_subcommand("gaps", "locate labelled spectral gaps");
    struct Opts {
        FrequencyOpts freq;
        PotentialOpts pot;
        EnergyGrid grid;
        std::string labels = "1..5";
        long long iters = 20000;
        long long refine_iters = 100000;
        int samples = 2;
        double tol = 0.0;
        double edge_tol = 1e-10;
        int min_plateau = 3;
        int ids_N = 0;
        int ids_phases = 4;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->freq.add(app);
    o->pot.add(app);
    o->grid.add(app);
    app->add_option("--labels", o->labels, "gap labels: a..b, a,b,c, or vectors n1,n2;m1,m2")->capture_default_str();
    app->add_option("--iters", o->iters, "rotation iterations on the grid")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--refine-iters", o->refine_iters, "rotation iterations during edge bisection")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--samples", o->samples, "phase samples")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--tol", o->tol, "plateau tolerance on ρ (0: 4/refine-iters)")->capture_default_str();
    app->add_option("--edge-tol", o->edge_tol, "energy resolution of the edges")->capture_default_str();
    app->add_option("--min-plateau", o->min_plateau, "grid points required on a plateau")->capture_default_str();
    app->add_option("--ids-N", o->ids_N, "also locate edges from the finite-volume IDS with this N (0: off)")
        ->capture_default_str();
    app->add_option("--ids-phases", o->ids_phases, "phase average count for the IDS edges")->capture_default_str();
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        const auto m = build_model(o->pot, o->freq);
        const auto labels = parse_labels(o->labels, m.alpha.size());
        GapScanOptions go;
        go.iters = o->refine_iters;
        go.samples = o->samples;
        go.tol = o->tol > 0 ? o->tol : 4.0 / static_cast<double>(o->refine_iters);
        go.edge_tol = o->edge_tol;
        go.min_plateau = o->min_plateau;
        const auto grid = o->grid.build(m.V);
        const auto curve = rotation_curve(m.V, m.alpha, grid, o->iters, o->samples);
        auto gaps = detect_gaps(curve, m.V, m.alpha, labels, go);
        auto rank = [&](const IVec& n) { return std::find(labels.begin(), labels.end(), n) - labels.begin(); };
        std::stable_sort(gaps.begin(), gaps.end(),
                         [&](const GapRecord& a, const GapRecord& b) { return rank(a.label) < rank(b.label); });
        std::vector<std::string> cols{"label", "E_minus", "E_plus", "length", "rho_locked", "r", "window_lower",
                                      "window_upper"};
        if (o->ids_N > 0) {
            cols.push_back("ids_E_minus");
            cols.push_back("ids_E_plus");
        }
        std::string s = csv_header(kSchemaGaps, cfg, cols);
        for (const auto& g : gaps) {
            const auto b = gap_bounds_check(g, o->pot.k, o->freq.tau);
            s += label_text(g.label) + "," + fmt(g.e_minus) + "," + fmt(g.e_plus) + "," + fmt(g.length) + "," +
                 fmt(g.rho_locked) + "," + (b.label_norm > 1 ? fmt(b.ratio) : "") + "," + fmt(b.lower) + "," +
                 fmt(b.upper);
            if (o->ids_N > 0) {
                const double pad = std::max(10.0 * g.length, 0.05);
                const auto e = ids_gap_edges(m.V, m.alpha, g.label, o->ids_N, o->ids_phases, g.e_minus - pad,
                                             g.e_plus + pad);
                s += e.found ? "," + fmt(e.e_minus) + "," + fmt(e.e_plus) : ",,";
            }
            s += "\n";
        }
        write_output(o->out, s);
    });
}

void cmd_kam(CLI::App& root) {
    auto* app = root.add_subcommand("kam", "reduce the cocycle at a gap edge to a parabolic constant");
    struct Opts {
        FrequencyOpts freq;
        PotentialOpts pot;
        std::size_t label_index = 0;
        std::string lock;
        double energy = NAN;
        std::string edge = "upper";
        long long iters = 2000000;
        bool relaxed = false;
        double max_degree = 96;
        double threshold = 1e-3;
        double window = 32;
        int max_steps = 25;
        double k0 = -1;
        bool steps = false;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->freq.add(app);
    o->pot.add(app);
    app->add_option("--label-index", o->label_index, "entry of the label set whose gap is reduced")->capture_default_str();
    app->add_option("--lock", o->lock, "gap label n1,n2,… (when the potential is not given by a set)");
    app->add_option("--energy", o->energy, "start energy (default: located gap edge)");
    app->add_option("--edge", o->edge, "which gap edge to use")->capture_default_str()->check(CLI::IsMember({"upper", "lower"}));
    app->add_option("--iters", o->iters, "rotation iterations when locating the gap")->capture_default_str();
    app->add_flag("--relaxed", o->relaxed, "desk-scale windows instead of the label-set schedule");
    app->add_option("--max-degree", o->max_degree, "Fourier truncation")->capture_default_str();
    app->add_option("--threshold", o->threshold, "resonance threshold (relaxed mode)")->capture_default_str();
    app->add_option("--window", o->window, "resonance window (relaxed mode)")->capture_default_str();
    app->add_option("--max-steps", o->max_steps, "KAM step limit")->capture_default_str();
    app->add_option("--k0", o->k0, "smoothness budget for the conjugacy norm (<0: default)")->capture_default_str();
    app->add_flag("--steps", o->steps, "include per-step reports");
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        const auto m = build_model(o->pot, o->freq);
        IVec label;
        if (!o->lock.empty()) {
            label = parse_vector(o->lock);
        } else if (m.set) {
            if (o->label_index >= m.set->entries.size())
                fail(ErrorKind::ConfigInvalid, "--label-index is beyond the label set");
            label = m.set->entries[o->label_index].label;
        } else {
            fail(ErrorKind::ConfigInvalid, "--lock is required without --set");
        }
        json doc = document(kSchemaKam, cfg);
        double E = o->energy;
        if (std::isnan(E)) {
            GapScanOptions go;
            go.iters = o->iters;
            go.tol = 4.0 / static_cast<double>(o->iters);
            go.edge_tol = 1e-11;
            const double hull = 2.0 + m.V.sup_bound();
            const auto g = locate_gap(m.V, m.alpha, label, -hull, hull, go);
            if (!g) fail(ErrorKind::TargetNotLocked, "no open gap with label " + label_text(label) + " was found");
            doc["gap"] = {{"E_minus", g->e_minus}, {"E_plus", g->e_plus}, {"length", g->length},
                          {"rho_locked", g->rho_locked}};
            E = o->edge == "upper" ? g->e_plus : g->e_minus;
        }
        ReducibilityParams p;
        p.kam.gamma = o->freq.gamma;
        p.kam.tau = o->freq.tau;
        p.kam.k_exponent = o->pot.k;
        p.kam.relaxed = o->relaxed;
        p.kam.max_degree = o->max_degree;
        p.kam.resonance_threshold = o->threshold;
        p.kam.resonance_window = o->window;
        if (!o->relaxed) {
            if (!m.set) fail(ErrorKind::ConfigInvalid, "the scheduled mode needs --set (or pass --relaxed)");
            p.kam.schedule = m.set->schedule;
            p.kam.s = m.set->schedule.s;
        }
        p.max_steps = o->max_steps;
        p.k0 = o->k0;
        const auto r = run_reducibility(m.V, m.alpha, E, label, p);
        doc["label"] = to_json(label);
        doc["alpha_values"] = m.alpha;
        doc["tau"] = o->freq.tau;
        doc["potential"] = potential_json(m.V);
        doc["rho_locked"] = locked_rho(label, m.alpha);
        doc["result"] = to_json(r, o->steps);
        write_output(o->out, dump(doc));
    });
}

void cmd_edge_probe(CLI::App& root) {
    auto* app = root.add_subcommand("edge-probe", "bracket a gap length from a reduced gap edge");
    struct Opts {
        std::string kam, csv, out;
        double kappa = 0.1;
        double k_hat = -1;
        long long rotation_iters = 2000000;
        long long max_horizon = 20000000;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--kam", o->kam, "output of the kam subcommand")->required();
    app->add_option("--kappa", o->kappa, "exponent κ ∈ (0, ¼) of the polynomial bounds")->capture_default_str();
    app->add_option("--k-hat", o->k_hat, "smoothness of the averaged matrix (<0: default)")->capture_default_str();
    app->add_option("--rotation-iters", o->rotation_iters, "rotation iterations per probe")->capture_default_str();
    app->add_option("--max-horizon", o->max_horizon, "longest uniform-hyperbolicity horizon")->capture_default_str();
    app->add_option("--csv", o->csv, "append one bracket row to this CSV file");
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        json cfg = run_config(app);
        const json in = parse_json_file(o->kam);
        cfg["kam_config_hash"] = in.value("config_hash", "");
        EdgeData e;
        Potential V;
        std::vector<double> alpha;
        double rho_locked = 0, E_edge = 0;
        IVec label;
        try {
            const auto& r = in.at("result");
            const MatrixSeries B = matrix_series_from_json(r.at("B"));
            e = make_edge_data(B, r.at("zeta").get<double>(), r.at("sign").get<int>(), r.at("k0").get<double>(),
                               in.at("tau").get<double>(), o->k_hat);
            V = potential_from_json(in.at("potential"));
            alpha = in.at("alpha_values").get<std::vector<double>>();
            rho_locked = in.at("rho_locked").get<double>();
            E_edge = r.at("energy").get<double>();
            label = ivec_from_json(in.at("label"));
        } catch (const json::exception& ex) {
            fail(ErrorKind::ConfigInvalid, std::string("malformed kam file: ") + ex.what());
        }
        ProbeOptions po;
        po.rotation_iters = o->rotation_iters;
        po.max_horizon = o->max_horizon;
        const auto bounds = poly_bounds_check(e, o->kappa);
        const auto br = bracket_gap(e, V, alpha, E_edge, rho_locked, po);
        const double det = e.gram_det();
        const double predicted = det != 0.0 ? std::abs(e.zeta * e.A11 / det) : NAN;
        json doc = document(kSchemaProbe, cfg);
        doc["label"] = to_json(label);
        doc["energy"] = E_edge;
        doc["edge"] = {{"zeta", e.zeta}, {"sign", e.sign}, {"A11", e.A11}, {"A12", e.A12},
                       {"A22", e.A22},   {"det", det},     {"k0", e.k0},   {"k_hat", e.k_hat},
                       {"D_tau", e.D_tau}, {"B_norm_k0", e.B_norm_k0}, {"predicted_length", predicted}};
        doc["bounds"] = to_json(bounds);
        doc["bracket"] = {{"lower", br.lower},
                          {"upper", br.upper},
                          {"degenerate", br.degenerate},
                          {"consistent", br.consistent},
                          {"lower_probe", to_json(br.lower_probe)},
                          {"upper_probe", to_json(br.upper_probe)}};
        if (in.contains("gap")) doc["measured_length"] = in["gap"].at("length");
        write_output(o->out, dump(doc));
        if (!o->csv.empty()) {
            const bool fresh = !std::filesystem::exists(o->csv) || std::filesystem::file_size(o->csv) == 0;
            std::ofstream f(o->csv, std::ios::app | std::ios::binary);
            if (!f) fail(ErrorKind::ConfigInvalid, "cannot open " + o->csv);
            if (fresh)
                f << "# schema: " << kSchemaProbeRow << "\n"
                  << "config_hash,label,E_edge,zeta,A11,A12,A22,predicted_length,measured_length,lower,upper,"
                     "lower_verdict,upper_verdict,consistent\n";
            const std::string measured = in.contains("gap") ? fmt(in["gap"].at("length").get<double>()) : "";
            f << config_hash(cfg) << "," << label_text(label) << "," << fmt(E_edge) << "," << fmt(e.zeta) << ","
              << fmt(e.A11) << "," << fmt(e.A12) << "," << fmt(e.A22) << "," << fmt(predicted) << "," << measured
              << "," << fmt(br.lower) << "," << fmt(br.upper) << "," << to_string(br.lower_probe.verdict) << ","
              << to_string(br.upper_probe.verdict) << "," << (br.consistent ? "true" : "false") << "\n";
        }
    });
}

void cmd_report(CLI::App& root) {
    auto* app = root.add_subcommand("report", "summarise kam and edge-probe artifacts");
    struct Opts {
        std::vector<std::string> kam, probe;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--kam", o->kam, "kam outputs");
    app->add_option("--probe", o->probe, "edge-probe outputs");
    app->add_option("--out", o->out, "output path (default stdout)");
    app->callback([=] {
        const json cfg = run_config(app);
        json doc = document(kSchemaReport, cfg);
        json kams = json::array(), probes = json::array();
        for (const auto& path : o->kam) {
            const json k = parse_json_file(path);
            const auto& r = k.at("result");
            kams.push_back({{"source_hash", k.value("config_hash", "")},
                            {"label", k.at("label")},
                            {"energy", r.at("energy")},
                            {"zeta", r.at("zeta")},
                            {"sign", r.at("sign")},
                            {"conj_residual", r.at("conj_residual")},
                            {"zeta_window_holds", r.at("zeta_window").at("holds")},
                            {"gap_length", k.contains("gap") ? k["gap"].at("length") : json()}});
        }
        for (const auto& path : o->probe) {
            const json p = parse_json_file(path);
            const auto& b = p.at("bracket");
            json row{{"source_hash", p.value("config_hash", "")},
                     {"label", p.at("label")},
                     {"zeta", p.at("edge").at("zeta")},
                     {"lower", b.at("lower")},
                     {"upper", b.at("upper")},
                     {"consistent", b.at("consistent")},
                     {"predicted_length", p.at("edge").at("predicted_length")}};
            if (p.contains("measured_length")) {
                const double L = p["measured_length"].get<double>();
                row["measured_length"] = L;
                row["within_bracket"] =
                    L >= b.at("lower").get<double>() && L <= b.at("upper").get<double>();
            }
            probes.push_back(row);
        }
        doc["kam"] = kams;
        doc["probes"] = probes;
        write_output(o->out, dump(doc));
    });
}

int error_exit(const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qpsl: quasi-periodic Schrödinger cocycles, spectral gaps and KAM reducibility"};
    app.require_subcommand(1);
    app.set_config("--config", "", "JSON file with option values keyed by long option name");
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.allow_config_extras(CLI::config_extras_mode::error);
    cmd_cf(app);
    cmd_build_set(app);
    cmd_verify_set(app);
    cmd_potential(app);
    cmd_rotation(app);
    cmd_ids(app);
    cmd_gaps(app);
    cmd_kam(app);
    cmd_edge_probe(app);
    cmd_report(app);
    for (auto* sub : app.get_subcommands({})) {
        // --config is owned by the root app; accept it after the subcommand name.
        sub->fallthrough();
        sub->footer("Options may also be read from a JSON object with --config FILE "
                    "(keys are long option names; command-line values take precedence).");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return error_exit("ConfigInvalid", e.what(), 1);
    } catch (const qpsl::Error& e) {
        const int code = e.kind() == ErrorKind::ConfigInvalid ? 1 : 2;
        return error_exit(std::string(to_string(e.kind())), e.what(), code);
    } catch (const json::exception& e) {
        return error_exit("ConfigInvalid", e.what(), 1);
    } catch (const std::exception& e) {
        return error_exit("Internal", e.what(), 2);
    }
    return 0;
}
