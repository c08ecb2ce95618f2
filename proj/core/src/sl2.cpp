#include "qpsl/sl2.hpp"

#include "qpsl/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace qpsl {

namespace {
const cplx I1(0.0, 1.0);
}

Mat2 M_matrix() {
    Mat2 m;
    m << 1.0, -I1, 1.0, I1;
    return m / cplx(1.0, 1.0);
}

Mat2 M_inverse() {
    // M is unitary: M^{-1} = M^*.
    return M_matrix().adjoint();
}

Mat2 to_su11(const RMat2& A) { return M_matrix() * A.cast<cplx>() * M_inverse(); }

RMat2 from_su11(const Mat2& A) { return (M_inverse() * A * M_matrix()).real(); }

double su11_defect(const Mat2& A) {
    double d = std::abs(A(1, 0) - std::conj(A(0, 1)));
    d = std::max(d, std::abs(A(1, 1) - std::conj(A(0, 0))));
    d = std::max(d, std::abs(std::norm(A(0, 0)) - std::norm(A(0, 1)) - 1.0));
    return d;
}

double sl2_defect(const RMat2& A) { return std::abs(A.determinant() - 1.0); }

Mat2 su11_element(cplx a, cplx b) {
    Mat2 m;
    m << a, b, std::conj(b), std::conj(a);
    return m;
}

Mat2 su11_algebra(double u, cplx w) {
    Mat2 m;
    m << I1 * u, w, std::conj(w), -I1 * u;
    return m;
}

RMat2 rotation(double phi) {
    const double t = 2.0 * M_PI * phi;
    RMat2 r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
}

Mat2 exp_traceless(const Mat2& X) {
    const cplx lam2 = -X.determinant();
    cplx c, s;  // cosh λ, sinh λ / λ as even functions of λ
    if (std::abs(lam2) < 1e-6) {
        c = 1.0 + lam2 / 2.0 + lam2 * lam2 / 24.0 + lam2 * lam2 * lam2 / 720.0;
        s = 1.0 + lam2 / 6.0 + lam2 * lam2 / 120.0 + lam2 * lam2 * lam2 / 5040.0;
    } else {
        const cplx lam = std::sqrt(lam2);
        c = std::cosh(lam);
        s = std::sinh(lam) / lam;
    }
    return c * Mat2::Identity() + s * X;
}

Mat2 su11_exp(const Mat2& C) { return exp_traceless(C); }

Mat2 log_sl2(const Mat2& G, bool* ok) {
    const cplx t = G.trace() / 2.0;  // cosh λ
    const Mat2 N = G - t * Mat2::Identity();
    const cplx x = t - 1.0;
    cplx f;  // λ / sinh λ as a function of λ²
    bool good = true;
    if (std::abs(x) < 1e-4) {
        // λ² from cosh λ = 1 + x by fixed-point on the Taylor series.
        cplx y = 2.0 * x;
        for (int it = 0; it < 4; ++it) y = 2.0 * x - y * y / 12.0 - y * y * y / 360.0;
        f = 1.0 / (1.0 + y / 6.0 + y * y / 120.0 + y * y * y / 5040.0);
    } else {
        const cplx lam = std::acosh(t);
        if (std::abs(lam.imag()) > M_PI - 1e-3 || std::abs(t + 1.0) < 1e-6) good = false;
        f = lam / std::sinh(lam);
    }
    if (ok) *ok = good;
    return f * N;
}

ConstantType classify_constant(const Mat2& A, double tol) {
    const double h = std::abs(A.trace().real()) / 2.0;
    if (std::abs(h - 1.0) <= tol) return ConstantType::Parabolic;
    return h < 1.0 ? ConstantType::Elliptic : ConstantType::Hyperbolic;
}

double su11_rotation(const Mat2& A) {
    const double re = std::clamp(A(0, 0).real(), -1.0, 1.0);
    const double ang = std::acos(re);
    const double sign = A(0, 0).imag() < 0 ? -1.0 : 1.0;
    return sign * ang / (2.0 * M_PI);
}

Diagonalization diagonalize_su11(const Mat2& A, double rho) {
    const double re = A(0, 0).real();
    if (!(std::abs(re) < 1.0)) fail(ErrorKind::NotElliptic, "diagonalize_su11: |Re a| >= 1");
    const double own = su11_rotation(A);
    if (std::abs(std::cos(2.0 * M_PI * rho) - re) > 1e-8)
        fail(ErrorKind::InvalidArgument, "diagonalize_su11: rho does not match the spectrum of A");
    if (own == 0.0) fail(ErrorKind::NotElliptic, "diagonalize_su11: rho = 0");
    Diagonalization D;
    D.rho = own;
    const double th = 2.0 * M_PI * own;
    const cplx lam(std::cos(th), std::sin(th));
    const cplx b = A(0, 1);
    Mat2 P;
    if (std::abs(b) < 1e-300) {
        P = Mat2::Identity();
    } else {
        // Left eigenvector (p, q) of A for e^{iθ}: p a + q b̄ = e^{iθ} p.
        cplx p = 1.0;
        cplx q = (lam - A(0, 0)) / std::conj(b);
        const double nrm = std::norm(p) - std::norm(q);
        if (!(nrm > 0)) fail(ErrorKind::NotElliptic, "diagonalize_su11: eigenvector not normalisable");
        const double s = 1.0 / std::sqrt(nrm);
        p *= s;
        q *= s;
        P = su11_element(p, q);
    }
    D.P = P;
    Mat2 Dg = Mat2::Zero();
    Dg(0, 0) = lam;
    Dg(1, 1) = std::conj(lam);
    D.residual = (P * A * P.inverse() - Dg).cwiseAbs().maxCoeff();
    D.norm_sq = std::pow(value_norm(P), 2);
    D.bound = 2.0 * (1.0 + 2.0 / std::abs(th));
    D.bound_holds = D.norm_sq <= D.bound;
    return D;
}

ParabolicForm parabolic_normalize_real(const RMat2& A, double tol) {
    if (std::abs(A.trace() - 2.0) > 2.0 * tol) fail(ErrorKind::NotUnipotent, "trace differs from 2");
    ParabolicForm out;
    const RMat2 N = A - RMat2::Identity();
    // N = ζ R_ψ e12 R_ψ^{-1}: N12 − N21 = ζ, (N12+N21, −2N11) = ζ(cos 2ψ, sin 2ψ).
    out.zeta = N(0, 1) - N(1, 0);
    double psi = 0.0;
    if (std::abs(out.zeta) > 0.0) {
        const double sgn = out.zeta > 0 ? 1.0 : -1.0;
        psi = 0.5 * std::atan2(-2.0 * N(0, 0) * sgn, (N(0, 1) + N(1, 0)) * sgn);
    }
    out.phi = psi / (2.0 * M_PI);
    if (out.phi < 0) out.phi += 1.0;
    out.normal = rotation(-out.phi) * A * rotation(out.phi);
    RMat2 target;
    target << 1.0, out.zeta, 0.0, 1.0;
    out.residual = (out.normal - target).cwiseAbs().maxCoeff();
    return out;
}

ParabolicForm parabolic_normalize(const Mat2& A, double tol) {
    if (std::abs(A(0, 0).real() - 1.0) > tol) fail(ErrorKind::NotUnipotent, "Re(a) differs from 1");
    return parabolic_normalize_real(from_su11(A), tol);
}

} // namespace qpsl
