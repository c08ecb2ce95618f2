#include "qpsl/errors.hpp"
#include "qpsl/sl2.hpp"

#include "test_support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

using namespace qpsl;
using namespace qpsl::testing;

namespace {
const cplx I1(0.0, 1.0);

RMat2 random_sl2(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    RMat2 A;
    do {
        A << g(rng), g(rng), g(rng), g(rng);
    } while (std::abs(A.determinant()) < 0.1);
    A /= std::sqrt(std::abs(A.determinant()));
    if (A.determinant() < 0) A.col(0) *= -1.0;
    return A;
}
} // namespace

TEST(Su11, MIsUnitary) {
    EXPECT_LT((M_matrix() * M_inverse() - Mat2::Identity()).norm(), 1e-15);
    EXPECT_LT((M_matrix().adjoint() - M_inverse()).norm(), 1e-15);
}

TEST(Su11, SchrodingerAtZeroEnergy) {
    RMat2 A;
    A << 2.0, -1.0, 1.0, 0.0;
    const Mat2 B = to_su11(A);
    // Hand computation: a = ((A11+A22) + i(A12−A21))/2, b = ((A11−A22) − i(A12+A21))/2.
    EXPECT_LT(std::abs(B(0, 0) - cplx(1.0, -1.0)), 1e-15);
    EXPECT_LT(std::abs(B(0, 1) - cplx(1.0, 0.0)), 1e-15);
    EXPECT_LT(su11_defect(B), 1e-15);
}

TEST(Su11, PropertySweep) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const RMat2 A = random_sl2(rng);
        ASSERT_LT(sl2_defect(A), 1e-12);
        const Mat2 B = to_su11(A);
        const cplx a = 0.5 * cplx(A(0, 0) + A(1, 1), A(0, 1) - A(1, 0));
        const cplx b = 0.5 * cplx(A(0, 0) - A(1, 1), -(A(0, 1) + A(1, 0)));
        EXPECT_LT(std::abs(B(0, 0) - a), 1e-12);
        EXPECT_LT(std::abs(B(0, 1) - b), 1e-12);
        EXPECT_LT(su11_defect(B), 1e-11);
        EXPECT_LT((from_su11(B) - A).norm(), 1e-12);
    }
}

TEST(Su11, ExponentialSpecialCases) {
    EXPECT_LT((su11_exp(Mat2::Zero()) - Mat2::Identity()).norm(), 1e-16);
    // Elliptic generator: exp(diag(iu, −iu)).
    const double u = 0.7;
    const Mat2 E = su11_exp(su11_algebra(u, 0.0));
    EXPECT_LT(std::abs(E(0, 0) - std::polar(1.0, u)), 1e-15);
    EXPECT_LT(std::abs(E(0, 1)), 1e-16);
    // Hyperbolic generator: [[0, w],[w̄, 0]] gives cosh|w| on the diagonal.
    const cplx w(0.3, -0.4);
    const Mat2 H = su11_exp(su11_algebra(0.0, w));
    EXPECT_NEAR(H(0, 0).real(), std::cosh(0.5), 1e-15);
    EXPECT_LT(std::abs(H(0, 1) - std::sinh(0.5) / 0.5 * w), 1e-15);
    // Nilpotent generator: 1 + X.
    const Mat2 N = su11_algebra(1.0, 1.0);
    EXPECT_LT((su11_exp(N) - (Mat2::Identity() + N)).norm(), 1e-15);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < 50; ++i) {
        const Mat2 C = su11_algebra(g(rng), cplx(g(rng), g(rng)));
        const Mat2 X = su11_exp(C);
        EXPECT_LT((X - expm(C)).norm() / X.norm(), 1e-12);
        EXPECT_LT(su11_defect(X), 1e-10 * X.squaredNorm());
    }
}

TEST(Su11, LogInvertsExp) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const Mat2 C = su11_algebra(U(rng), cplx(U(rng), U(rng)) * 0.5);
        bool ok = false;
        const Mat2 L = log_sl2(su11_exp(C), &ok);
        EXPECT_TRUE(ok);
        EXPECT_LT((L - C).norm(), 1e-10);
    }
    bool ok = true;
    log_sl2(-Mat2::Identity(), &ok);
    EXPECT_FALSE(ok);
}

TEST(Su11, ClassificationAndRotation) {
    EXPECT_EQ(classify_constant(to_su11(rotation(0.1))), ConstantType::Elliptic);
    EXPECT_NEAR(std::abs(su11_rotation(to_su11(rotation(0.1)))), 0.1, 1e-14);
    RMat2 P;
    P << 1.0, 2.0, 0.0, 1.0;
    EXPECT_EQ(classify_constant(to_su11(P)), ConstantType::Parabolic);
    RMat2 H;
    H << 2.0, 0.0, 0.0, 0.5;
    EXPECT_EQ(classify_constant(to_su11(H)), ConstantType::Hyperbolic);
}

TEST(Su11, DiagonalizeElliptic) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.02, 0.48);
    std::normal_distribution<double> g(0.0, 0.5);
    for (int i = 0; i < 50; ++i) {
        // Conjugate a rotation by a random SU(1,1) element.
        const double rho = U(rng);
        const Mat2 R = su11_element(std::polar(1.0, 2 * M_PI * rho), 0.0);
        const Mat2 Q = su11_exp(su11_algebra(g(rng), cplx(g(rng), g(rng))));
        const Mat2 A = Q * R * Q.inverse();
        const auto D = diagonalize_su11(A, rho);
        EXPECT_LT(D.residual, 1e-10);
        EXPECT_LT(su11_defect(D.P), 1e-10 * std::max(1.0, D.P.squaredNorm()));
        EXPECT_NEAR(D.rho, rho, 1e-12);
    }
    EXPECT_THROW(diagonalize_su11(to_su11(rotation(0.1)), 0.2), Error);
    RMat2 H;
    H << 2.0, 0.0, 0.0, 0.5;
    EXPECT_THROW(diagonalize_su11(to_su11(H), 0.1), Error);
}

TEST(Su11, ParabolicNormalForm) {
    // b = 0.3i: the conjugation identity fixes |ζ| = 2|b| (Frobenius norms).
    const Mat2 A = su11_element(cplx(1.0, 0.3), cplx(0.0, 0.3));
    const auto pf = parabolic_normalize(A);
    EXPECT_NEAR(std::abs(pf.zeta), 0.6, 1e-12);
    EXPECT_LT(pf.residual, 1e-12);
    // Check the identity independently of the returned normal form.
    const RMat2 X = rotation(-pf.phi) * from_su11(A) * rotation(pf.phi);
    RMat2 T;
    T << 1.0, pf.zeta, 0.0, 1.0;
    EXPECT_LT((X - T).norm(), 1e-12);
    RMat2 S;
    S << 2.0, -1.0, 1.0, 0.0;
    const auto ps = parabolic_normalize(to_su11(S));
    EXPECT_NEAR(std::abs(ps.zeta), 2.0, 1e-12);
    EXPECT_LT(ps.residual, 1e-12);
    EXPECT_THROW(parabolic_normalize(to_su11(rotation(0.2))), Error);
}

TEST(Su11, ParabolicZetaIsFrobeniusInvariant) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double z = U(rng), phi = 0.5 * (U(rng) + 2.0);
        RMat2 T;
        T << 1.0, z, 0.0, 1.0;
        const RMat2 A = rotation(phi) * T * rotation(-phi);
        const auto pf = parabolic_normalize_real(A);
        EXPECT_NEAR(pf.zeta, z, 1e-12);
        EXPECT_LT(pf.residual, 1e-12);
        EXPECT_NEAR(2.0 + pf.zeta * pf.zeta, A.squaredNorm(), 1e-12);
    }
}
