#include "qpsl/diophantine.hpp"
#include "qpsl/errors.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qpsl;
using namespace qpsl::testing;

TEST(ContinuedFraction, GoldenMeanHasUnitQuotients) {
    const auto cf = cf_expand(ExactReal::preset("golden"), 8);
    ASSERT_EQ(cf.depth(), 8u);
    const std::vector<int> q{1, 1, 2, 3, 5, 8, 13, 21};
    for (std::size_t k = 1; k <= 8; ++k) EXPECT_EQ(cf.a[k], 1) << k;
    for (std::size_t k = 0; k < q.size(); ++k) EXPECT_EQ(cf.q_int(k), q[k]) << k;
}

TEST(ContinuedFraction, SilverMeanFromDecimalString) {
    const auto cf = cf_expand(ExactReal::from_decimal("0.41421356237309504880168872420969807856967187537694"), 5);
    const std::vector<int> q{1, 2, 5, 12, 29, 70};
    for (std::size_t k = 1; k <= 5; ++k) EXPECT_EQ(cf.a[k], 2) << k;
    for (std::size_t k = 0; k <= 5; ++k) EXPECT_EQ(cf.q_int(k), q[k]) << k;
    // p_k is the minimiser of |q_k α − p| over p.
    for (std::size_t k = 1; k <= 5; ++k) {
        const long double x = static_cast<long double>(cf.q_int(k)) * kSilverL;
        EXPECT_EQ(cf.p[k], static_cast<long long>(std::llround(x))) << k;
    }
}

TEST(ContinuedFraction, RecurrenceAndDeterminantIdentity) {
    const auto cf = cf_expand(ExactReal::preset("silver"), 30);
    for (std::size_t k = 2; k <= cf.depth(); ++k) {
        EXPECT_EQ(cf.q[k], cf.a[k] * cf.q[k - 1] + cf.q[k - 2]);
        EXPECT_EQ(cf.p[k], cf.a[k] * cf.p[k - 1] + cf.p[k - 2]);
        EXPECT_GT(cf.q[k], cf.q[k - 1]);
    }
    for (std::size_t k = 1; k <= cf.depth(); ++k) {
        const BigInt lhs = cf.p[k] * cf.q[k - 1] - cf.p[k - 1] * cf.q[k];
        EXPECT_EQ(lhs, (k % 2 == 1) ? 1 : -1) << k;
    }
}

TEST(ContinuedFraction, BestApproximationBounds) {
    const auto cf = cf_expand(ExactReal::preset("golden"), 25);
    for (std::size_t k = 1; k + 1 <= cf.depth(); ++k) {
        const long double q = static_cast<long double>(cf.q_int(k)), q1 = static_cast<long double>(cf.q_int(k + 1));
        const long double d = dist_int(q * kGoldenL);
        EXPECT_LT(1.0L / (q + q1), d) << k;
        EXPECT_LE(d, 1.0L / q1) << k;
    }
}

TEST(ContinuedFraction, BestApproximationPropertyExhaustive) {
    const auto cf = cf_expand(ExactReal::preset("golden"), 22);
    for (std::size_t k = 2; k <= cf.depth() && cf.q_int(k) <= 10000; ++k) {
        const long double prev = dist_int(static_cast<long double>(cf.q_int(k - 1)) * kGoldenL);
        for (std::int64_t m = 1; m < cf.q_int(k); ++m)
            ASSERT_GE(dist_int(static_cast<long double>(m) * kGoldenL), prev - 1e-18L) << "k=" << k << " m=" << m;
    }
}

TEST(ContinuedFraction, RationalInputRunsOutOfPrecision) {
    EXPECT_THROW(cf_expand(ExactReal::from_decimal("0.5"), 4), Error);
    EXPECT_THROW(cf_expand(ExactReal::from_decimal("1.5"), 4), Error);
}

TEST(ContinuedFraction, LeadingZeroDigitsAreDecimal) {
    // "0618…" must not be read as an octal literal.
    const auto x = ExactReal::from_decimal("0.6180339887498949");
    EXPECT_NEAR(x.value(), 0.6180339887498949, 1e-16);
}

TEST(DistToIntegers, Examples) {
    EXPECT_EQ(dist_to_integers(0.0), 0.0);
    EXPECT_EQ(dist_to_integers(3.25), 0.25);
    EXPECT_EQ(dist_to_integers(-0.75), 0.25);
    // High-precision oracle for ‖178·golden‖.
    const double d = dist_multiple(ExactReal::preset("golden"), BigInt(178));
    EXPECT_NEAR(d, static_cast<double>(dist_int(178.0L * kGoldenL)), 1e-15);
    EXPECT_NEAR(d, 0.0100500, 1e-6);
}

TEST(DiophantineCheck, GoldenMean) {
    FrequencyVector a;
    a.components.push_back(ExactReal::preset("golden"));
    a.gamma = 0.2;
    a.tau = 2.0;
    EXPECT_TRUE(dc_check(a, 50).holds);
    a.gamma = 1.0;
    a.tau = 1.0;
    const auto r = dc_check(a, 10);
    EXPECT_FALSE(r.holds);
    // Oracle: the worst ratio over 0 < |n| ≤ 10.
    long double worst = 1e9L;
    for (int n = 1; n <= 10; ++n) worst = std::min(worst, dist_int(n * kGoldenL) * n);
    EXPECT_NEAR(r.worst_ratio, static_cast<double>(worst), 1e-12);
}

TEST(DiophantineCheck, SymmetricUnderNegation) {
    FrequencyVector a;
    a.components.push_back(ExactReal::preset("golden"));
    a.components.push_back(ExactReal::preset("silver"));
    a.gamma = 1e-3;
    a.tau = 2.5;
    const auto r = dc_check(a, 12);
    ASSERT_FALSE(r.worst_n.empty());
    const auto neg = -r.worst_n;
    const long double x = r.worst_n[0] * kGoldenL + r.worst_n[1] * kSilverL;
    const long double y = neg[0] * kGoldenL + neg[1] * kSilverL;
    EXPECT_NEAR(static_cast<double>(dist_int(x)), static_cast<double>(dist_int(y)), 1e-15);
    EXPECT_NEAR(r.worst_value, static_cast<double>(dist_int(x)), 1e-14);
}

TEST(ResonantDenominator, SpecExamples) {
    const auto cf = cf_expand(ExactReal::preset("golden"), 30);
    auto r = resonant_denominator(cf, 100.0);
    EXPECT_EQ(r.q_nj, 89);
    EXPECT_EQ(r.q, 178);
    EXPECT_LT(r.dist, 3.0 / 89.0);
    r = resonant_denominator(cf, 10.0);
    EXPECT_EQ(r.q_nj, 8);
    EXPECT_EQ(r.q, 16);
    EXPECT_LT(r.dist, 3.0 / 8.0);
}

TEST(ResonantDenominator, RandomLevelsAgainstExhaustiveScan) {
    const auto cf = cf_expand(ExactReal::preset("silver"), 40);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(std::log(20.0), std::log(1e6));
    for (int i = 0; i < 100; ++i) {
        const double ell = std::exp(U(rng));
        const auto r = resonant_denominator(cf, ell);
        // Denominators of the silver mean by recurrence.
        std::int64_t a = 1, b = 2;
        while (!(a < ell && ell <= b)) {
            const std::int64_t c = 2 * b + a;
            a = b;
            b = c;
        }
        EXPECT_EQ(r.q_nj, a);
        std::int64_t want = -1;
        for (auto q = static_cast<std::int64_t>(std::ceil(21 * ell / 20)); q <= std::floor(41 * ell / 20); ++q)
            if (q % a == 0 && dist_int(q * kSilverL) < 3.0L / a) {
                want = q;
                break;
            }
        EXPECT_EQ(r.q, want) << "ell=" << ell;
    }
}

TEST(ResonantDenominator, ShallowExpansionFails) {
    const auto cf = cf_expand(ExactReal::preset("golden"), 5);
    try {
        resonant_denominator(cf, 1e6);
        FAIL() << "expected ExpansionTooShallow";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ExpansionTooShallow);
    }
}
