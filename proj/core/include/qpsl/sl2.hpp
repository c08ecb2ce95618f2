#pragma once

#include "qpsl/fourier.hpp"

namespace qpsl {

// M = (1/(1+i)) [[1, −i],[1, i]] maps SL(2,ℝ) onto SU(1,1) by A ↦ M A M^{-1}.
Mat2 M_matrix();
Mat2 M_inverse();

Mat2 to_su11(const RMat2& A);
RMat2 from_su11(const Mat2& A);  // real part of M^{-1} A M

// Deviation of A from the pattern [[a, b],[b̄, ā]] with |a|²−|b|² = 1.
double su11_defect(const Mat2& A);
double sl2_defect(const RMat2& A);  // |det A − 1|

Mat2 su11_element(cplx a, cplx b);
Mat2 su11_algebra(double u, cplx w);  // [[iu, w],[w̄, −iu]]

// Rotation by the angle 2π·phi (phi in turns).
RMat2 rotation(double phi);

// exp/log on sl(2,ℂ) in closed form: e^X = cosh λ I + (sinh λ/λ) X with λ² = −det X.
Mat2 exp_traceless(const Mat2& X);
// Principal logarithm of an SL(2,ℂ) element away from −I. Sets *ok=false
// (and returns the best effort) when outside the injectivity radius.
Mat2 log_sl2(const Mat2& G, bool* ok = nullptr);

// su(1,1) exponential, C = [[ia, b],[b̄, −ia]] (the same closed form).
Mat2 su11_exp(const Mat2& C);

enum class ConstantType { Elliptic, Parabolic, Hyperbolic };
ConstantType classify_constant(const Mat2& A, double tol = 1e-12);

// Signed rotation angle of an elliptic SU(1,1) element in turns:
// eigenvalues e^{±2πiρ} with sign(ρ) = sign(Im a).
double su11_rotation(const Mat2& A);

struct Diagonalization {
    Mat2 P;               // P A P^{-1} = diag(e^{2πiρ}, e^{−2πiρ})
    double rho = 0.0;     // turns, signed as in su11_rotation
    double residual = 0.0;
    double norm_sq = 0.0;  // ‖P‖²
    double bound = 0.0;    // 2(1 + 2/|2πρ|)
    bool bound_holds = false;
};

// Elliptic A only. rho is the caller's spectral datum (turns); its sign is
// reconciled with A (the diagonal form uses the orientation of A).
Diagonalization diagonalize_su11(const Mat2& A, double rho);

struct ParabolicForm {
    double phi = 0.0;   // turns
    double zeta = 0.0;  // signed
    double residual = 0.0;
    RMat2 normal;       // R_{−φ} M^{-1} A M R_φ as computed
};

// Unipotent A (Re a = 1 within tol): R_{−φ} M^{-1} A M R_φ = [[1, ζ],[0, 1]].
ParabolicForm parabolic_normalize(const Mat2& A, double tol = 1e-8);
// Same for a real unipotent matrix.
ParabolicForm parabolic_normalize_real(const RMat2& A, double tol = 1e-8);

} // namespace qpsl
