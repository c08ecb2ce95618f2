#pragma once

#include "qpsl/diophantine.hpp"
#include "qpsl/lattice.hpp"

#include <string>
#include <vector>

namespace qpsl {

// ℓ_j = M^{(1+s)^j}, stored as ln ℓ_j so deep levels never overflow.
struct GrowthSchedule {
    double M = 0.0;
    double s = 0.0;
    std::vector<double> log_levels;  // ln ℓ_j, j = 0..depth
    double ell_star = 0.0;
    bool strict = false;
    std::vector<std::string> relaxations;  // every waived strict-mode requirement

    std::size_t depth() const { return log_levels.empty() ? 0 : log_levels.size() - 1; }
    double log_level(std::size_t j) const;
    double level(std::size_t j) const;  // +inf when not representable
};

GrowthSchedule build_schedule(double M, double s, std::size_t depth, bool strict = false,
                              double ell_star_value = 0.0);

// max{(2‖A‖)^{2.5/τ}, (2k/5)^{1/s}, e^k, (5γ^{−1}2^τ)^{τ^{−1}/(3−2s−s²)}}
double ell_star(double k, double gamma, double tau, double s, double a_norm);

// Lattice vectors ordered shell by shell (sup-norm). Inside a shell: vectors
// whose first nonzero coordinate is negative come first, then larger |n_1|,
// |n_2|, …, then lexicographic order. d=1 gives 0, −1, 1, −2, 2, …
std::vector<IVec> lex_enumerate(std::size_t d, std::size_t count);

struct LabelEntry {
    std::size_t m = 0;
    IVec base;             // n^{(m)}
    std::int64_t shift = 0;  // q_{n_{j_m}} multiple from the resonant-denominator search
    IVec label;            // ñ^{(m)} = n^{(m)} + (shift, 0, …, 0)
    std::size_t level = 0; // j_m
};

struct LabelSet {
    std::size_t d = 0;
    FrequencyVector alpha;
    GrowthSchedule schedule;
    std::vector<LabelEntry> entries;
    std::vector<std::string> relaxations;

    std::vector<IVec> labels() const;
};

LabelSet construct_label_set(const FrequencyVector& alpha, const GrowthSchedule& schedule,
                             std::size_t j1, std::size_t spacing, std::size_t count,
                             std::size_t cf_depth = 0);

struct DensityRow {
    double target = 0.0;
    std::vector<double> best_by_count;  // best distance using the first c+1 entries
    double best = 0.0;
    bool within_tol = false;
};

struct LabelSetReport {
    bool sparsity_ok = true;   // at most one label with ℓ_j ≤ |n| < ℓ_{j+2}
    bool annulus_ok = true;    // none with 21ℓ_j/10 ≤ |n| < ℓ_{j+1}
    bool floor_ok = true;      // none with |n| < ℓ*
    bool windows_ok = true;    // |ñ^{(m)}| ∈ [ℓ_{j_m}, 21ℓ_{j_m}/10)
    bool spacing_ok = true;    // j_{m+1} − j_m ≥ 2
    std::vector<std::string> violations;
    std::vector<DensityRow> density;

    bool structural_ok() const { return sparsity_ok && annulus_ok && floor_ok && windows_ok && spacing_ok; }
};

LabelSetReport verify_label_set(const LabelSet& ks, const GrowthSchedule& schedule,
                                const std::vector<double>& density_targets, double density_tol);

// ‖½⟨n,α⟩ − t‖_{ℝ/ℤ} computed exactly from the rational enclosure midpoints.
double half_phase_distance(const IVec& n, const FrequencyVector& alpha, double t);

} // namespace qpsl
