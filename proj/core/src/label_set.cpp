#include "qpsl/label_set.hpp"

#include "qpsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qpsl {

namespace {

constexpr double kLogInt64 = 43.668;  // ln(2^63) ≈ 43.668

// Integer N compared against a real bound given as ln(x): N ≥ x ⇔ N ≥ ⌈x⌉.
bool int_geq(std::int64_t N, double log_x) {
    if (log_x == -std::numeric_limits<double>::infinity()) return true;
    if (log_x > kLogInt64 - 0.1) return false;
    double x = std::exp(log_x);
    return static_cast<double>(N) >= std::ceil(x - 1e-9 * x);
}

bool int_lt(std::int64_t N, double log_x) { return !int_geq(N, log_x); }

} // namespace

double GrowthSchedule::log_level(std::size_t j) const {
    if (j >= log_levels.size())
        fail(ErrorKind::ScheduleTooShort, "schedule has no level " + std::to_string(j));
    return log_levels[j];
}

double GrowthSchedule::level(std::size_t j) const {
    double l = log_level(j);
    return l > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(l);
}

GrowthSchedule build_schedule(double M, double s, std::size_t depth, bool strict, double ell_star_value) {
    if (!(M > 1.0)) fail(ErrorKind::InvalidArgument, "schedule: M must exceed 1");
    if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::InvalidArgument, "schedule: s must lie in [0,1)");
    if (depth < 1) fail(ErrorKind::InvalidArgument, "schedule: depth must be >= 1");
    GrowthSchedule g;
    g.M = M;
    g.s = s;
    g.strict = strict;
    g.ell_star = ell_star_value;
    const bool m_ok = M > 1000.0;
    const bool s_ok = s > 0.8 && s < 1.0;
    if (strict && (!m_ok || !s_ok))
        fail(ErrorKind::InvalidArgument, "strict schedule requires M > 1000 and 4/5 < s < 1");
    if (!m_ok) g.relaxations.push_back("M = " + std::to_string(M) + " <= 1000");
    if (!s_ok) g.relaxations.push_back("s = " + std::to_string(s) + " outside (4/5,1)");
    const double logM = std::log(M);
    g.log_levels.resize(depth + 1);
    for (std::size_t j = 0; j <= depth; ++j)
        g.log_levels[j] = logM * std::pow(1.0 + s, static_cast<double>(j));
    return g;
}

double ell_star(double k, double gamma, double tau, double s, double a_norm) {
    if (!(gamma > 0 && tau > 0 && a_norm > 0 && s > 0 && s < 1 && k >= 0))
        fail(ErrorKind::InvalidArgument, "ell_star: parameters out of range");
    const double denom = 3.0 - 2.0 * s - s * s;
    if (!(denom > 0)) fail(ErrorKind::DegenerateExponent, "3 - 2s - s^2 <= 0");
    const double ninf = -std::numeric_limits<double>::infinity();
    const double t1 = (2.5 / tau) * std::log(2.0 * a_norm);
    const double t2 = k > 0 ? std::log(2.0 * k / 5.0) / s : ninf;
    const double t3 = k;
    const double t4 = (1.0 / tau) / denom * std::log(5.0 / gamma * std::pow(2.0, tau));
    return std::exp(std::max({t1, t2, t3, t4}));
}

std::vector<IVec> lex_enumerate(std::size_t d, std::size_t count) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "lex_enumerate: d must be >= 1");
    std::vector<IVec> out;
    out.reserve(count);
    auto first_sign = [](const IVec& n) {
        for (auto v : n)
            if (v != 0) return v < 0 ? 0 : 1;
        return 0;
    };
    auto l1 = [](const IVec& n) {
        std::int64_t t = 0;
        for (auto v : n) t += std::llabs(v);
        return t;
    };
    auto before = [&](const IVec& a, const IVec& b) {
        const auto la = l1(a), lb = l1(b);
        if (la != lb) return la < lb;
        int sa = first_sign(a), sb = first_sign(b);
        if (sa != sb) return sa < sb;
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto ma = std::llabs(a[i]), mb = std::llabs(b[i]);
            if (ma != mb) return ma > mb;
        }
        return a < b;
    };
    for (std::int64_t shell = 0; out.size() < count; ++shell) {
        std::vector<IVec> ring;
        for_each_in_box(d, shell, [&](const IVec& n) {
            if (sup_norm(n) == shell) ring.push_back(n);
        });
        std::sort(ring.begin(), ring.end(), before);
        for (auto& n : ring) {
            if (out.size() == count) break;
            out.push_back(std::move(n));
        }
    }
    return out;
}

std::vector<IVec> LabelSet::labels() const {
    std::vector<IVec> v;
    for (const auto& e : entries) v.push_back(e.label);
    return v;
}

LabelSet construct_label_set(const FrequencyVector& alpha, const GrowthSchedule& schedule,
                             std::size_t j1, std::size_t spacing, std::size_t count,
                             std::size_t cf_depth) {
    const std::size_t d = alpha.dim();
    if (d < 1) fail(ErrorKind::InvalidArgument, "label set needs a frequency vector");
    if (spacing < 2) fail(ErrorKind::InvalidArgument, "label spacing must be >= 2");
    if (count < 1) fail(ErrorKind::InvalidArgument, "label count must be >= 1");
    const std::size_t last_level = j1 + (count - 1) * spacing;
    if (last_level + 2 > schedule.depth())
        fail(ErrorKind::ScheduleTooShort, "schedule depth " + std::to_string(schedule.depth()) +
                                               " cannot hold level " + std::to_string(last_level) + " + 2");
    LabelSet ks;
    ks.d = d;
    ks.alpha = alpha;
    ks.schedule = schedule;
    ks.relaxations = schedule.relaxations;
    if (schedule.ell_star > 0 && schedule.log_level(j1) < std::log(schedule.ell_star)) {
        std::ostringstream os;
        os << "l_{j1} = " << schedule.level(j1) << " below ell_star = " << schedule.ell_star;
        if (schedule.strict) fail(ErrorKind::InvalidArgument, os.str());
        ks.relaxations.push_back(os.str());
    }
    // Only α_1 is expanded. Deep enough to pass the largest level.
    const double top = schedule.log_level(last_level);
    if (top > kLogInt64 - std::log(3.0))
        fail(ErrorKind::Overflow, "level l_" + std::to_string(last_level) + " too large for int64 labels");
    std::size_t depth = cf_depth ? cf_depth : static_cast<std::size_t>(top / std::log(1.5)) + 8;
    ContinuedFraction cf;
    try {
        cf = cf_expand(alpha.components[0], depth);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::PrecisionExhausted) throw;
        fail(ErrorKind::ExpansionTooShallow, std::string("alpha_1 precision too low for the schedule: ") + e.what());
    }
    const auto bases = lex_enumerate(d, count);
    for (std::size_t m = 0; m < count; ++m) {
        const std::size_t j = j1 + m * spacing;
        const double ell = schedule.level(j);
        auto rd = resonant_denominator(cf, ell);
        LabelEntry e;
        e.m = m;
        e.base = bases[m];
        e.shift = rd.q;
        e.label = e.base;
        e.label[0] += rd.q;
        e.level = j;
        const std::int64_t norm = sup_norm(e.label);
        if (!int_geq(norm, schedule.log_level(j)) || !int_lt(norm, schedule.log_level(j) + std::log(2.1)))
            fail(ErrorKind::ScheduleTooShort, "label " + to_string(e.label) + " leaves its level window; "
                                              "increase M or reduce count");
        ks.entries.push_back(std::move(e));
    }
    return ks;
}

double half_phase_distance(const IVec& n, const FrequencyVector& alpha, double t) {
    BigRational s = 0;
    for (std::size_t i = 0; i < n.size(); ++i) s += BigRational(BigInt(n[i])) * alpha.components.at(i).midpoint();
    s /= 2;
    s -= BigRational(t);
    return dist_to_integers(s);
}

LabelSetReport verify_label_set(const LabelSet& ks, const GrowthSchedule& schedule,
                                const std::vector<double>& density_targets, double density_tol) {
    if (ks.entries.empty()) fail(ErrorKind::InvalidArgument, "verify_label_set: empty set");
    LabelSetReport rep;
    std::vector<std::int64_t> norms;
    for (const auto& e : ks.entries) norms.push_back(sup_norm(e.label));
    const std::size_t depth = schedule.depth();
    // (2.7): at most one label per double band [ℓ_j, ℓ_{j+2}).
    for (std::size_t j = 0; j + 2 <= depth; ++j) {
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < norms.size(); ++i)
            if (int_geq(norms[i], schedule.log_level(j)) && int_lt(norms[i], schedule.log_level(j + 2)))
                hits.push_back(i);
        if (hits.size() > 1) {
            rep.sparsity_ok = false;
            rep.violations.push_back("sparsity: labels " + to_string(ks.entries[hits[0]].label) + " and " +
                                     to_string(ks.entries[hits[1]].label) + " share [l_" + std::to_string(j) +
                                     ", l_" + std::to_string(j + 2) + ")");
        }
    }
    // (2.8): forbidden annuli [21ℓ_j/10, ℓ_{j+1}).
    for (std::size_t j = 0; j + 1 <= depth; ++j) {
        const double lo = schedule.log_level(j) + std::log(2.1), hi = schedule.log_level(j + 1);
        if (!(lo < hi)) continue;
        for (std::size_t i = 0; i < norms.size(); ++i)
            if (int_geq(norms[i], lo) && int_lt(norms[i], hi)) {
                rep.annulus_ok = false;
                rep.violations.push_back("annulus: label " + to_string(ks.entries[i].label) +
                                         " lies in [21 l_" + std::to_string(j) + "/10, l_" + std::to_string(j + 1) + ")");
            }
    }
    // (2.9): nothing below ℓ*.
    if (schedule.ell_star > 0) {
        for (std::size_t i = 0; i < norms.size(); ++i)
            if (int_lt(norms[i], std::log(schedule.ell_star))) {
                rep.floor_ok = false;
                rep.violations.push_back("floor: label " + to_string(ks.entries[i].label) + " below ell_star");
            }
    }
    for (std::size_t i = 0; i < ks.entries.size(); ++i) {
        const auto& e = ks.entries[i];
        if (e.level > depth) {
            rep.windows_ok = false;
            rep.violations.push_back("window: level beyond schedule depth");
            continue;
        }
        const double l = schedule.log_level(e.level);
        if (!(int_geq(norms[i], l) && int_lt(norms[i], l + std::log(2.1)))) {
            rep.windows_ok = false;
            rep.violations.push_back("window: label " + to_string(e.label) + " outside [l_j, 21 l_j/10)");
        }
        if (i > 0 && e.level < ks.entries[i - 1].level + 2) {
            rep.spacing_ok = false;
            rep.violations.push_back("spacing: levels " + std::to_string(ks.entries[i - 1].level) + " and " +
                                     std::to_string(e.level));
        }
    }
    for (double t : density_targets) {
        DensityRow row;
        row.target = t;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : ks.entries) {
            best = std::min(best, half_phase_distance(e.label, ks.alpha, t));
            row.best_by_count.push_back(best);
        }
        row.best = best;
        row.within_tol = best < density_tol;
        rep.density.push_back(std::move(row));
    }
    return rep;
}

} // namespace qpsl
