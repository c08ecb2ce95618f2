#pragma once

#include "qpsl/fourier.hpp"
#include "qpsl/potential.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace qpsl {

// Quasi-periodic cocycle (α, A): (θ, v) ↦ (θ + 2πα, A(θ)v).
struct QpCocycle {
    std::vector<double> alpha;  // turns
    std::function<RMat2(const std::vector<double>&)> map;
    std::optional<RMat2> constant;  // set when A is constant
    bool doubled = false;           // A defined on 2𝕋^d
    // Fast path for Schrödinger cocycles.
    std::shared_ptr<const Potential> potential;
    double energy = 0.0;

    std::size_t dim() const { return alpha.size(); }
    std::vector<double> omega() const;  // 2πα
    RMat2 operator()(const std::vector<double>& theta) const;
    bool is_schrodinger() const { return static_cast<bool>(potential); }
};

QpCocycle constant_cocycle(const std::vector<double>& alpha, const RMat2& A);
QpCocycle schrodinger_cocycle(const Potential& V, const std::vector<double>& alpha, double E);
// A given as a real-valued matrix series (possibly on 2𝕋^d).
QpCocycle series_cocycle(const MatrixSeries& A, const std::vector<double>& alpha);

RMat2 schrodinger_matrix(double E, double V);

// n ≥ 0: A(θ+(n−1)α)⋯A(θ); n < 0: A(θ+nα)^{-1}⋯A(θ−α)^{-1}; n = 0: I.
RMat2 transfer_product(const QpCocycle& c, const std::vector<double>& theta, long long n);

struct RotationOptions {
    long long iters = 100000;
    int phase_samples = 4;
    double max_dispersion = 1e300;  // NonConvergence above this
};

struct RotationResult {
    double rho = 0.0;       // in [0,1)
    double rho_lift = 0.0;  // lifted mean advance per step in turns
    long long iterations = 0;
    int samples = 0;
    double dispersion = 0.0;
};

RotationResult rotation_number(const QpCocycle& c, const RotationOptions& opt = {});

double lyapunov_exponent(const QpCocycle& c, long long iters = 100000, int phase_samples = 4);

enum class Verdict { Hyperbolic, NotHyperbolic, Inconclusive };
const char* to_string(Verdict v);

struct UhResult {
    Verdict verdict = Verdict::Inconclusive;
    double margin = 0.0;  // constant: |tr|−2; otherwise min growth rate log‖S_H‖/H
    double transversality = 0.0;  // min angle between unstable/stable directions (rad)
    long long horizon = 0;
};

// Constant cocycles: exact trace test. Otherwise: uniform growth of ‖S_H(θ)‖
// and ‖S_{2H}(θ)‖ on a θ-grid together with a transversal invariant splitting
// (unstable direction pulled from the past, stable from the future).
UhResult uh_test(const QpCocycle& c, long long horizon, std::size_t grid);

// (α, Z(θ+α)^{-1} A(θ) Z(θ)); Z real-valued matrix series on 𝕋^d or 2𝕋^d.
QpCocycle conjugate(const QpCocycle& c, const MatrixSeries& Z, std::size_t probe_grid = 64);

// Max over a grid of ‖Z(θ+α)^{-1} A(θ) Z(θ) − target(θ)‖.
double conjugation_residual(const QpCocycle& c, const MatrixSeries& Z,
                            const std::function<RMat2(const std::vector<double>&)>& target,
                            std::size_t grid_per_axis);

} // namespace qpsl
