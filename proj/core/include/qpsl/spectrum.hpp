#pragma once

#include "qpsl/cocycle.hpp"
#include "qpsl/potential.hpp"

#include <optional>
#include <vector>

namespace qpsl {

// Fraction of eigenvalues ≤ E of the (2N+1)×(2N+1) Dirichlet truncation of
// (Hx)_n = x_{n+1} + x_{n−1} + V(θ + 2πnα) x_n, n = −N..N (Sturm count).
double finite_ids(const Potential& V, const std::vector<double>& alpha, const std::vector<double>& theta, int N,
                  double E);
// Average over `phases` equally spaced phases θ = 2π(p/phases)(1,…,1).
double finite_ids_averaged(const Potential& V, const std::vector<double>& alpha, int N, int phases, double E);

struct IdsCurve {
    std::vector<double> energies;
    std::vector<double> values;
    int N = 0;
    int phases = 1;
};
IdsCurve ids_curve(const Potential& V, const std::vector<double>& alpha, const std::vector<double>& grid, int N,
                   int phases);

struct RotationCurve {
    std::vector<double> energies;
    std::vector<double> rho;  // in [0,½]
    long long iters = 0;
    int samples = 0;
    double max_increase = 0.0;  // largest ρ(E_{i+1}) − ρ(E_i) (monotonicity check)
    bool monotone = true;       // max_increase ≤ 1e−4
};
RotationCurve rotation_curve(const Potential& V, const std::vector<double>& alpha, const std::vector<double>& grid,
                             long long iters, int samples);

// ρ(E) ∈ [0,½] of the Schrödinger cocycle.
double schrodinger_rho(const Potential& V, const std::vector<double>& alpha, double E, long long iters, int samples);

// Locked value ρ_n ∈ [0,½) with 2ρ_n ≡ ⟨n,α⟩ (mod 1).
double locked_rho(const IVec& n, const std::vector<double>& alpha);

struct GapRecord {
    IVec label;
    double e_minus = 0.0;
    double e_plus = 0.0;
    double length = 0.0;
    double rho_locked = 0.0;
    std::optional<double> zeta_estimate;
    double window_lower = 0.0;  // exponent −11k/10 − 6τ
    double window_upper = 0.0;  // exponent −9k/10 + 56τ
};

struct GapScanOptions {
    double tol = 1e-4;            // plateau test |ρ(E) − ρ_n| < tol
    long long iters = 100000;     // rotation iterations during edge refinement
    int samples = 2;
    double edge_tol = 1e-10;      // bisection stops below this energy width
    int min_plateau = 3;          // grid points
};

// Plateaus of the curve locked to one of the candidate labels (label 0 and
// plateaus touching the ends of the grid are not gaps), with bisection-refined edges.
std::vector<GapRecord> detect_gaps(const RotationCurve& curve, const Potential& V, const std::vector<double>& alpha,
                                   const std::vector<IVec>& labels, const GapScanOptions& opt = {});

// Gap of one label located by bisection on ρ inside [lo, hi] (suited to gaps far
// below any grid resolution).  Empty when no locked energy is found.
std::optional<GapRecord> locate_gap(const Potential& V, const std::vector<double>& alpha, const IVec& label,
                                    double lo, double hi, const GapScanOptions& opt = {});

// Gap edges from the plateau of the phase-averaged finite-volume IDS at the
// locked value 1 − 2ρ_n (independent of the rotation number).
struct IdsEdges {
    bool found = false;
    double e_minus = 0.0;
    double e_plus = 0.0;
    double level = 0.0;
};
IdsEdges ids_gap_edges(const Potential& V, const std::vector<double>& alpha, const IVec& label, int N, int phases,
                       double lo, double hi, double edge_tol = 1e-9);

struct GapBoundsReport {
    double label_norm = 0.0;
    double ratio = 0.0;           // r = log|I| / log|n|
    double lower = 0.0;           // −11k/10 − 6τ
    double upper = 0.0;           // −9k/10 + 56τ
    bool inside = false;
    bool window_nonempty = true;
    bool strict_asserted = false; // strict mode only
};
GapBoundsReport gap_bounds_check(const GapRecord& g, double k, double tau, bool strict = false);

} // namespace qpsl
