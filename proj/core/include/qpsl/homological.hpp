#pragma once

#include "qpsl/fourier.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qpsl {

// Resonance scan for a constant with rotation ρ (turns): the sites are the
// integer vectors 0 < |n| ≤ N with ‖2ρ − ⟨n,α⟩‖_{ℝ/ℤ} < threshold.
struct ResonanceResult {
    bool resonant = false;
    IVec site;               // minimising site (empty when non-resonant)
    double distance = 1.0;   // ‖2ρ − ⟨site,α⟩‖ (or the best distance overall when NR)
    IVec closest;            // best site over the whole window, resonant or not
    double rho = 0.0;
    int count_below = 0;     // number of sites under the threshold
    bool unique = true;      // count_below ≤ 1
};

ResonanceResult classify_resonance(double rho, const std::vector<double>& alpha, double N, double threshold);
// ρ taken from the constant: su11_rotation for elliptic A, 0 (resp. ½) for
// non-elliptic A with positive (resp. negative) trace.
ResonanceResult classify_resonance(const Mat2& A, const std::vector<double>& alpha, double N, double threshold);

// Entry classes used by the mode-splitting rule.
enum class Component { Diagonal, Upper, Lower };

// Returns true when the coefficient of F̂(key) in the given component is to be
// removed (non-resonant).  key is in the series' own key units.
using ModeMask = std::function<bool(const IVec& key, Component c)>;

// Splits F into the part selected by the mask and the remainder.
std::pair<MatrixSeries, MatrixSeries> split_modes(const MatrixSeries& F, const ModeMask& mask);

// Solves A^{-1} Y(θ+ω) A − Y(θ) = −F mode by mode.  Diagonal A uses the
// closed form per entry; any other A uses the 4×4 Kronecker system
// (e^{i⟨n,ω⟩} Aᵀ⊗A^{-1} − I) vec Ŷ = −vec F̂.  A divisor (resp. smallest
// singular value) below `floor` raises SmallDivisor.
MatrixSeries solve_homological(const Mat2& A, const MatrixSeries& F, const std::vector<double>& alpha,
                               double floor = 1e-12);

// Divisor of the homological operator at a mode (smallest singular value of
// the 4×4 operator; for diagonal A the smallest |e^{iφ}λ_iλ_j^{-1} − 1|
// among the components present).
double homological_divisor(const Mat2& A, const IVec& key, bool doubled, const std::vector<double>& alpha);

struct NewtonOptions {
    double max_degree = 64.0;       // truncation of every series (actual frequency)
    double tol = 1e-15;             // stop once the removable part is below this (analytic norm, h = 0)
    int max_iter = 40;
    double floor = 1e-12;           // small-divisor floor
    double oversample = 4.0;        // grid oversampling for pointwise exp/log
    std::size_t check_points = 256; // probe points for the conjugation identity
};

struct NewtonResult {
    MatrixSeries B;         // e^{Y_p}⋯e^{Y_0}
    MatrixSeries Y;         // log B (pointwise principal logarithm)
    MatrixSeries F_star;
    std::vector<double> nre_norms;  // removable-part norm before each sweep
    int iterations = 0;
    double dropped = 0.0;   // coefficient mass lost to truncation
    double residual = 0.0;  // max ‖B(θ+ω)Ae^{F}B(θ)^{-1} − Ae^{F*}‖ on the probe points
    double y_norm = 0.0;    // analytic_norm(Y, h)
};

// Newton iteration removing the masked modes:
//   e^{Y(θ+ω)} A e^{F(θ)} e^{−Y(θ)} = A e^{F*(θ)},
// with F* carrying only the unmasked modes up to the final tolerance.
NewtonResult remove_nonresonant(const Mat2& A, const MatrixSeries& F, const std::vector<double>& alpha,
                                const ModeMask& mask, const NewtonOptions& opt = {});

// Mask removing every mode 0 < |n| ≤ window (all components).
ModeMask nonresonant_mask(double window, bool doubled);

} // namespace qpsl
