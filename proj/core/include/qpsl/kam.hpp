#pragma once

#include "qpsl/cocycle.hpp"
#include "qpsl/homological.hpp"
#include "qpsl/label_set.hpp"
#include "qpsl/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qpsl {

struct KamParams {
    double gamma = 0.1;
    double tau = 1.0;
    double k_exponent = 4.0;
    double s = 0.9;
    std::optional<GrowthSchedule> schedule;  // drives window/threshold/strip widths when set
    double max_degree = 64.0;
    double newton_tol = 1e-15;
    double conj_residual_tol = 1e-9;
    bool relaxed = true;
    // Used when no schedule is set (or when explicitly positive).
    double resonance_window = 32.0;
    double resonance_threshold = 1e-3;
    double removal_window = 0.0;     // modes 0 < |n| ≤ this are removed; ≤ 0 means max_degree
    double divisor_floor = 1e-10;
    int newton_max_iter = 40;
    double stop_tol = 1e-14;         // f_j below this (analytic norm) ends the iteration
    double strip_width = 0.0;        // h used for norms when no schedule is set
    double oversample = 4.0;
    std::size_t check_points = 256;

    void validate() const;
    double window(int j) const;      // N_j
    double removal(int j) const;     // removal window (never below N_j)
    double threshold(int j) const;   // resonance threshold at step j
    double strip(int j) const;       // h_j
};

// A term V_p·W waiting for injection once the window reaches its label.
struct PendingTerm {
    IVec label;
    double coeff = 0.0;
};

struct KamState {
    int step = 0;
    Mat2 A = Mat2::Identity();  // constant part (SU(1,1))
    MatrixSeries f;             // su(1,1)-valued perturbation
    std::vector<PendingTerm> pending;
    MatrixSeries B;             // accumulated conjugation B^{(j)} (SU(1,1), possibly on 2𝕋^d)
    IVec n_tilde;               // sum of resonant sites
    double sigma = 0.0;         // ‖A_0‖
    std::vector<double> alpha;
    double dropped = 0.0;       // total coefficient mass lost to truncation
};

enum class StepCase { Identity, NonResonant, Resonant };
const char* to_string(StepCase c);

struct Diagnostics {
    double xi = 0.0;      // |⟨w⟩|
    double big_m = 0.0;   // |w|_h + |u|_h
    double small_m = 0.0; // sup_{|n| ≥ |ñ|} ½(|ŵ(n)| + |û(n)|)
};

// W = [[iu, w],[w̄, −iu]].
Diagnostics compute_diagnostics(const MatrixSeries& W, const IVec& n_tilde, double h);

struct StepReport {
    int step = 0;
    StepCase kind = StepCase::Identity;
    IVec site;                     // resonant site (RS only)
    double resonance_distance = 1.0;
    bool resonance_unique = true;
    double norm_before = 0.0;      // analytic norm of F̃_j at h_j
    double norm_after = 0.0;       // analytic norm of f_{j+1} at h_j
    double rho_before = 0.0;       // rotation of A_j (turns, signed)
    double rho_after = 0.0;        // rotation of ±A_{j+1} (PSL sign removed)
    Diagnostics diag;
    cplx b_next{0.0, 0.0};         // off-diagonal entry of A_{j+1}
    int newton_iterations = 0;
    double conj_residual = 0.0;
    double dropped = 0.0;
    std::vector<std::string> notes;  // relaxed-regime observations
};

// Initial state for S_E^V = A_0 e^{V W̃}: A_0 = M [[E,−1],[1,0]] M^{-1},
// f_0 = V(θ) M W̃ M^{-1}.  With inject_all=false the potential terms are left
// pending and enter when the step window reaches their label.
KamState initial_state(const Potential& V, const std::vector<double>& alpha, double E, bool inject_all = true,
                       double max_degree = 64.0);
// State from a constant and an explicit perturbation.
KamState make_state(const Mat2& A, const MatrixSeries& f, const std::vector<double>& alpha);

// One KAM step.  Postcondition (checked):
//   B_j(θ+α) A_j e^{F̃_j(θ)} B_j(θ)^{-1} = A_{j+1} e^{f_{j+1}(θ)}.
std::pair<KamState, StepReport> kam_step(const KamState& state, const KamParams& params);

struct EstimateWindow {
    double label_norm = 0.0;
    double lower = 0.0;   // n^{−(k+5τ)}
    double upper = 0.0;   // n^{−(k−62τ)}
    bool holds = false;
};

struct ReducibilityParams {
    KamParams kam;
    int max_steps = 25;
    double lock_tol = 1e-4;          // ‖2ρ − ⟨n,α⟩‖ accepted as locked
    long long lock_iters = 200000;   // rotation-number iterations for the lock check
    bool refine_energy = true;       // move E onto the exact parabolic point
    int refine_max = 80;
    double parabolic_tol = 1e-20;    // target for |b|² − (Im a)² of A_∞
    double parabolic_normalize_tol = 1e-8;
    std::size_t residual_grid = 512;
    double k0 = -1.0;                // smoothness budget; < 0 means max(0, floor(k − 90τ))
};

struct ReducibilityResult {
    double energy_initial = 0.0;
    double energy = 0.0;             // refined (parabolic) energy
    IVec lock_label;                 // n with 2ρ ≡ ⟨n,α⟩
    double lock_distance = 0.0;
    MatrixSeries B;                  // real SL(2,ℝ)-valued series on 2𝕋^d
    double zeta = 0.0;
    int sign = 1;                    // B(θ+α)^{-1} S_E B(θ) = sign·[[1,ζ],[0,1]]
    double phi = 0.0;
    Mat2 A_final = Mat2::Identity();
    double final_f_norm = 0.0;
    double parabolic_defect = 0.0;   // |b|² − (Im a)² of A_∞
    double conj_residual = 0.0;
    double k0 = 0.0;
    double B_norm_k0 = 0.0;
    double B_norm_bound = 0.0;       // n_J^{k0+36τ}
    EstimateWindow window;
    double dropped = 0.0;
    int refinements = 0;
    std::vector<StepReport> steps;
};

// Runs the KAM scheme on S_E^V.  When `label` is given the lock
// 2ρ(E) ≡ ⟨label,α⟩ is checked; otherwise any site in the window is accepted.
ReducibilityResult run_reducibility(const Potential& V, const std::vector<double>& alpha, double E,
                                    const std::optional<IVec>& label, const ReducibilityParams& params);

} // namespace qpsl
