#pragma once

#include "qpsl/lattice.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qpsl {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// A real number known only through an exact rational enclosure [lo, hi].
// Frequencies enter the library this way so that continued-fraction digits
// are certified rather than guessed from floating point.
struct ExactReal {
    BigRational lo;
    BigRational hi;
    std::string text;  // the user-facing spelling (decimal string or preset name)

    double value() const;
    BigRational midpoint() const;

    // Decimal string such as "0.6180339887498949". The enclosure radius is
    // 10^{-digits} when digits > 0, otherwise half a unit in the last given digit.
    static ExactReal from_decimal(const std::string& s, int digits = 0);
    // Shortest round-trip decimal of x with half-ulp radius.
    static ExactReal from_double(double x);
    // Named quadratic irrationals: "golden" = (√5−1)/2, "silver" = √2−1.
    // The enclosure comes from consecutive convergents and is exact.
    static ExactReal preset(const std::string& name, int depth = 400);
    // Accepts a preset name or a decimal string.
    static ExactReal parse(const std::string& s, int digits = 0);
};

struct ContinuedFraction {
    ExactReal alpha;
    std::vector<BigInt> a;  // a[0] = 0, a[k] partial quotient for k = 1..depth
    std::vector<BigInt> p;  // p[0] = 0, p[1] = 1, ...
    std::vector<BigInt> q;  // q[0] = 1, q[1] = a_1, ...

    std::size_t depth() const { return a.empty() ? 0 : a.size() - 1; }
    std::int64_t q_int(std::size_t k) const;  // throws Overflow beyond int64
    // ‖q_k α‖_{ℝ/ℤ} evaluated from the exact enclosure midpoint.
    double q_dist(std::size_t k) const;
    // |q_k α − p_k|
    double q_error(std::size_t k) const;
};

ContinuedFraction cf_expand(const ExactReal& alpha, std::size_t depth);
ContinuedFraction cf_expand(double alpha, std::size_t depth);

double dist_to_integers(double x);
double dist_to_integers(const BigRational& x);
// ‖m·α‖ for an integer m using the exact midpoint of α.
double dist_multiple(const ExactReal& alpha, const BigInt& m);

struct FrequencyVector {
    std::vector<ExactReal> components;
    double gamma = 1.0;
    double tau = 1.0;

    std::size_t dim() const { return components.size(); }
    std::vector<double> values() const;
    // Componentwise irrationality check: no convergent denominator up to
    // cutoff leaves remainder zero at working precision.
    bool looks_irrational(std::int64_t cutoff = 1000000) const;
};

struct DcReport {
    bool holds = true;
    IVec worst_n;
    double worst_value = 0.0;  // ‖⟨n,α⟩‖ at worst_n
    double worst_ratio = 0.0;  // ‖⟨n,α⟩‖ / (γ|n|^{−τ}); < 1 means violation
};

DcReport dc_check(const FrequencyVector& alpha, std::int64_t max_norm);

struct ResonantDenominator {
    std::int64_t q = 0;     // m·q_{n_j}
    std::int64_t q_nj = 0;  // q_{n_j} < ℓ ≤ q_{n_j+1}
    std::int64_t m = 0;
    std::size_t index = 0;  // n_j
    double dist = 0.0;      // ‖qα‖
    double bound = 0.0;     // 3/q_{n_j}
    bool within_two_over_q = false;  // also ‖qα‖ < 2/q_{n_j}
};

ResonantDenominator resonant_denominator(const ContinuedFraction& cf, double ell);

} // namespace qpsl
