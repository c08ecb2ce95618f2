#include "qpsl/errors.hpp"
#include "qpsl/fourier.hpp"
#include "qpsl/potential.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace qpsl;
using namespace qpsl::testing;

namespace {

ScalarSeries random_scalar(std::size_t dim, std::int64_t degree, std::mt19937_64& rng, bool doubled = false) {
    std::normal_distribution<double> g;
    ScalarSeries f(dim, doubled, ValueKind::Scalar);
    for_each_in_box(dim, degree, [&](const IVec& n) {
        f.set(n, std::exp(-0.3 * static_cast<double>(sup_norm(n))) * cplx(g(rng), g(rng)));
    });
    return f;
}

cplx direct(const ScalarSeries& f, const std::vector<double>& theta) {
    cplx s = 0.0;
    const double p = f.doubled() ? 2.0 : 1.0;
    for (const auto& [m, c] : f.coeffs()) {
        double ph = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) ph += static_cast<double>(m[i]) * theta[i];
        s += c * std::polar(1.0, ph / p);
    }
    return s;
}

} // namespace

TEST(Series, EmptySeriesEvaluatesToZero) {
    ScalarSeries f(2, false, ValueKind::Scalar);
    EXPECT_EQ(eval(f, {0.3, 1.2}), cplx(0.0));
    EXPECT_EQ(f.degree(), 0.0);
}

TEST(Series, CosinePair) {
    ScalarSeries f(1, false, ValueKind::Scalar);
    f.set({3}, 0.5);
    f.set({-3}, 0.5);
    EXPECT_NEAR(std::abs(eval(f, {0.0}) - 1.0), 0.0, 1e-15);
    for (double t : {0.1, 0.7, 2.9}) EXPECT_NEAR(std::abs(eval(f, {t}) - std::cos(3 * t)), 0.0, 1e-14);
}

TEST(Series, EvalMatchesDirectSum) {
    std::mt19937_64 rng(11);
    for (std::size_t d : {1u, 2u}) {
        for (bool doubled : {false, true}) {
            const auto f = random_scalar(d, d == 1 ? 20 : 6, rng, doubled);
            for (const auto& th : probe_points(d, 20, doubled))
                EXPECT_LT(std::abs(eval(f, th) - direct(f, th)), 1e-12);
        }
    }
}

TEST(Series, DoubledDegreeUsesActualFrequency) {
    ScalarSeries f(1, true, ValueKind::Scalar);
    f.set({5}, 1.0);
    EXPECT_DOUBLE_EQ(f.degree(), 2.5);
    ScalarSeries g(1, false, ValueKind::Scalar);
    g.set({3}, 1.0);
    const auto p = g.promoted();
    EXPECT_TRUE(p.doubled());
    EXPECT_EQ(p.at({6}), cplx(1.0));
    EXPECT_NEAR(std::abs(eval(p, {0.4}) - eval(g, {0.4})), 0.0, 1e-14);
}

TEST(Series, TruncateAndTailPartition) {
    std::mt19937_64 rng(12);
    const auto f = random_scalar(2, 8, rng);
    for (double K : {0.0, 2.0, 4.5, 8.0, 20.0}) {
        const auto lo = truncate(f, K), hi = project_tail(f, K);
        EXPECT_EQ(lo.size() + hi.size(), f.size());
        for (const auto& [n, c] : lo.coeffs()) EXPECT_LE(static_cast<double>(sup_norm(n)), K);
        for (const auto& [n, c] : hi.coeffs()) EXPECT_GT(static_cast<double>(sup_norm(n)), K);
        const auto sum = lo + hi;
        for (const auto& [n, c] : f.coeffs()) EXPECT_EQ(sum.at(n), c);
    }
}

TEST(Series, MultiplicationIdentities) {
    std::mt19937_64 rng(13);
    const auto f = random_scalar(1, 15, rng), g = random_scalar(1, 12, rng), h = random_scalar(1, 9, rng);
    ScalarSeries zero(1, false, ValueKind::Scalar), one(1, false, ValueKind::Scalar);
    one.set({0}, 1.0);
    EXPECT_TRUE(multiply(f, zero).empty());
    const auto f1 = multiply(f, one);
    for (const auto& [n, c] : f.coeffs()) EXPECT_LT(std::abs(f1.at(n) - c), 1e-15);
    const auto fg = multiply(f, g), gf = multiply(g, f);
    EXPECT_EQ(fg.degree(), 27.0);
    for (const auto& [n, c] : fg.coeffs()) EXPECT_LT(std::abs(gf.at(n) - c), 1e-13);
    const auto a = multiply(multiply(f, g), h), b = multiply(f, multiply(g, h));
    for (const auto& [n, c] : a.coeffs()) EXPECT_LT(std::abs(b.at(n) - c), 1e-12);
    for (const auto& th : probe_points(1, 25, false))
        EXPECT_LT(std::abs(eval(fg, th) - eval(f, th) * eval(g, th)), 1e-10);
}

TEST(Series, MatrixProductIsNotCommutativeButPointwise) {
    std::mt19937_64 rng(14);
    const auto F = random_su11_series(1, 6, 0.3, rng), G = random_su11_series(1, 6, 0.3, rng);
    const auto FG = multiply(F, G);
    for (const auto& th : probe_points(1, 20, false))
        EXPECT_LT((eval_direct(FG, th) - eval_direct(F, th) * eval_direct(G, th)).norm(), 1e-12);
}

TEST(Series, ProductOverflowPolicies) {
    std::mt19937_64 rng(15);
    const auto f = random_scalar(1, 10, rng), g = random_scalar(1, 10, rng);
    ProductOptions opt;
    opt.max_degree = 12;
    double dropped = 0.0;
    const auto fg = multiply(f, g, opt, &dropped);
    EXPECT_LE(fg.degree(), 12.0);
    // Dropped mass is the majorant Σ|f̂(m)||ĝ(n)| over overflowing pairs,
    // which bounds the ℓ¹ mass of the removed part of the full product.
    double majorant = 0.0;
    for (const auto& [m, a] : f.coeffs())
        for (const auto& [n, b] : g.coeffs())
            if (sup_norm(m + n) > 12) majorant += std::abs(a) * std::abs(b);
    EXPECT_NEAR(dropped, majorant, 1e-12 * majorant);
    const auto full = multiply(f, g);
    double tail = 0.0;
    for (const auto& [n, c] : project_tail(full, 12).coeffs()) tail += std::abs(c);
    EXPECT_GE(dropped, tail);
    const auto kept = truncate(full, 12);
    for (const auto& [n, c] : kept.coeffs()) EXPECT_LT(std::abs(fg.at(n) - c), 1e-14);
    opt.policy = OverflowPolicy::Error;
    EXPECT_THROW(multiply(f, g, opt), Error);
}

TEST(Series, ShiftIsTranslation) {
    std::mt19937_64 rng(16);
    for (bool doubled : {false, true}) {
        const auto f = random_scalar(2, 5, rng, doubled);
        const std::vector<double> omega{0.7, -1.3};
        const auto fs = shift(f, omega);
        for (const auto& th : probe_points(2, 10, doubled)) {
            const std::vector<double> t2{th[0] + omega[0], th[1] + omega[1]};
            EXPECT_LT(std::abs(eval(fs, th) - eval(f, t2)), 1e-12);
        }
    }
}

TEST(Series, Norms) {
    ScalarSeries f(1, false, ValueKind::Scalar);
    f.set({1}, 0.5);
    f.set({-1}, 0.5);
    EXPECT_NEAR(analytic_norm(f, 0.3), std::exp(0.3), 1e-15);
    ScalarSeries g(1, false, ValueKind::Scalar);
    g.set({4}, 2.0);
    g.set({0}, 1.0);
    const double k = 2.5;
    EXPECT_NEAR(ck_norm_estimate(g, k), 1.0 + 2.0 * std::pow(5.0, k), 1e-12);
    EXPECT_NEAR(ck_norm_estimate(g, k + 1) / ck_norm_estimate(g, k), (1.0 + 2.0 * std::pow(5.0, k + 1)) / (1.0 + 2.0 * std::pow(5.0, k)), 1e-14);
    EXPECT_EQ(sup_coeff_beyond(g, 5), 0.0);
    EXPECT_EQ(sup_coeff_beyond(g, 1), 2.0);
}

TEST(Series, Su11StructureSurvivesProducts) {
    std::mt19937_64 rng(17);
    const auto F = random_su11_series(2, 3, 0.2, rng);
    EXPECT_LT(su11_defect(F), 1e-15);
    const auto S = symmetrize_su11(F);
    for (const auto& [n, c] : F.coeffs()) EXPECT_LT((S.at(n) - c).norm(), 1e-15);
    // Pointwise values are traceless with the su(1,1) pattern.
    for (const auto& th : probe_points(2, 10, false)) {
        const Mat2 v = eval_direct(F, th);
        EXPECT_LT(std::abs(v.trace()), 1e-14);
        EXPECT_LT(std::abs(v(1, 0) - std::conj(v(0, 1))), 1e-14);
    }
}

TEST(Potential, SingleLabelValues) {
    const auto V = single_label_potential({5}, std::pow(5.0, -2.0), 2.0);
    EXPECT_NEAR(V({0.0}), 0.04, 1e-15);
    EXPECT_NEAR(V({M_PI / 5.0}), -0.04, 1e-15);
    EXPECT_TRUE(V.coefficient_bound_holds());
}

TEST(Potential, TwoLabelsFromLabelSet) {
    LabelSet ks;
    ks.d = 1;
    for (std::int64_t n : {5, 11}) {
        LabelEntry e;
        e.label = IVec({n});
        ks.entries.push_back(e);
    }
    const auto V = build_potential(ks, 2.0);
    const double want = std::cos(5.0) / 25.0 + std::cos(11.0) / 121.0;
    EXPECT_NEAR(V({1.0}), want, 1e-15);
    EXPECT_NEAR(V.sup_bound(), 1.0 / 25 + 1.0 / 121, 1e-15);
    const auto s = potential_series(V);
    EXPECT_EQ(s.size(), 4u);
    EXPECT_NEAR(std::abs(eval(s, {1.0}) - want), 0.0, 1e-15);
    EXPECT_THROW(build_potential(ks, 2.0, [](const IVec&) { return 1.0; }), Error);
}

TEST(Potential, AlmostMathieu) {
    const auto V = amo_potential(0.5);
    for (double t : {0.0, 0.4, 2.0}) EXPECT_NEAR(V({t}), std::cos(t), 1e-15);
}
