#pragma once

#include "qpsl/cocycle.hpp"
#include "qpsl/potential.hpp"

#include <string>
#include <vector>

namespace qpsl {

// Data at a gap edge: B(θ+α)^{-1} S_E(θ) B(θ) = sign·[[1,ζ],[0,1]] with
// B real-valued on 2𝕋^d; averages [·] are Fourier coefficients at 0.
struct EdgeData {
    MatrixSeries B;
    double zeta = 0.0;
    int sign = 1;
    double A11 = 0.0;  // [B11²]
    double A12 = 0.0;  // [B11 B12]
    double A22 = 0.0;  // [B12²]
    double k0 = 0.0;
    double k_hat = 0.0;
    double D_tau = 0.0;
    double B_norm_k0 = 0.0;

    double gram_det() const { return A11 * A22 - A12 * A12; }
};

// Averages and budgets; k̂ < 0 selects the default k0 − ⌈3τ⌉ − d − 1.
EdgeData make_edge_data(const MatrixSeries& B, double zeta, int sign, double k0, double tau, double k_hat = -1.0);

// P = [[B11B12 − ζB11², −ζB11B12 + B12²],[−B11², −B11B12]].
MatrixSeries perturbation_matrix(const MatrixSeries& B, double zeta);
// c₁ = [[A12 − (ζ/2)A11, −ζA12 + A22],[−A11, −A12 + (ζ/2)A11]].
RMat2 averaged_matrix(const EdgeData& e);
// d(δ) = −δ A11 ζ + δ² (A11 A22 − A12²).
double discriminant(const EdgeData& e, double delta);

struct PolyBoundsReport {
    double kappa = 0.0;
    double B_norm = 0.0;
    bool precondition = false;      // ‖B‖_{k0} ζ^{κ/2} ≤ ¼
    double ratio = 0.0;             // A11 / (A11A22 − A12²)
    double ratio_bound = 0.0;       // ½ ζ^{−κ}
    bool ratio_ok = false;
    double det = 0.0;
    double det_bound = 0.0;         // 8 ζ^{2κ}
    bool det_ok = false;
    double a11_bound = 0.0;         // (2‖B‖_{k0})^{−2}
    bool a11_ok = false;
    bool degenerate = false;        // A11A22 − A12² = 0
    std::vector<std::string> notes;
};
PolyBoundsReport poly_bounds_check(const EdgeData& e, double kappa);

struct ProbeOptions {
    long long rotation_iters = 2000000;
    int rotation_samples = 2;
    double rotation_tol = 0.0;      // 0: 8/rotation_iters
    long long max_horizon = 20000000;
    std::size_t uh_grid = 8;
    std::size_t residual_grid = 128;
};

struct ProbeResult {
    double delta = 0.0;
    double energy = 0.0;            // probe energy E_edge − sgn(ζ)δ
    double d_delta = 0.0;           // d(σ) with σ = sgn(ζ)δ
    Verdict verdict = Verdict::Inconclusive;
    double rotation_shift = 0.0;    // ρ(E_probe) − ρ_locked (turns)
    double residual = 0.0;          // conjugation identity residual (NaN-free; 0 for constant B)
    double lyapunov = 0.0;
    long long horizon = 0;
    double margin = 0.0;
};

// Probe δ away from the edge into the gap side selected by sgn(ζ).
// Constant B: the constant cocycle C − δP decided by the trace test.
// Otherwise the Schrödinger cocycle at E_edge − sgn(ζ)δ: a rotation-number
// shift off the locked value gives "not"; a locked value is confirmed by the
// uniform-hyperbolicity test (hyperbolic or inconclusive).
ProbeResult probe_gap_edge(const EdgeData& e, const Potential& V, const std::vector<double>& alpha, double E_edge,
                           double rho_locked, double delta, const ProbeOptions& opt = {});

struct BracketResult {
    double lower = 0.0;  // |ζ|^{11/10}
    double upper = 0.0;  // |ζ|^{9/10}
    bool degenerate = false;
    ProbeResult lower_probe;
    ProbeResult upper_probe;
    bool consistent = false;  // lower probe hyperbolic and upper probe not
};
BracketResult bracket_gap(const EdgeData& e, const Potential& V, const std::vector<double>& alpha, double E_edge,
                          double rho_locked, const ProbeOptions& opt = {});
// Probe scales only.
std::pair<double, double> bracket_scales(double zeta);

} // namespace qpsl
