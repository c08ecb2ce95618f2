#include "qpsl/diophantine.hpp"

#include "qpsl/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace qpsl {

namespace {

BigInt pow10(int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

BigInt floor_rational(const BigRational& x) {
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    BigInt f = num / den;  // truncates toward zero
    if (num < 0 && f * den != num) f -= 1;
    return f;
}

double to_double(const BigRational& x) { return static_cast<double>(x); }

} // namespace

double ExactReal::value() const { return to_double(midpoint()); }

BigRational ExactReal::midpoint() const { return (lo + hi) / 2; }

ExactReal ExactReal::from_decimal(const std::string& s, int digits) {
    std::string t = s;
    bool negative = false;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
        negative = t[0] == '-';
        t = t.substr(1);
    }
    auto dot_pos = t.find('.');
    std::string int_part = dot_pos == std::string::npos ? t : t.substr(0, dot_pos);
    std::string frac_part = dot_pos == std::string::npos ? "" : t.substr(dot_pos + 1);
    if (int_part.empty()) int_part = "0";
    auto all_digits = [](const std::string& x) {
        for (char c : x)
            if (c < '0' || c > '9') return false;
        return true;
    };
    if (!all_digits(int_part) || !all_digits(frac_part) || (int_part.empty() && frac_part.empty()))
        fail(ErrorKind::InvalidArgument, "not a decimal number: '" + s + "'");
    // Leading zeros would make the string parse as octal.
    std::string digits_str = int_part + frac_part;
    const auto first = digits_str.find_first_not_of('0');
    digits_str = first == std::string::npos ? "0" : digits_str.substr(first);
    BigInt num(digits_str);
    if (negative) num = -num;
    int nfrac = static_cast<int>(frac_part.size());
    BigRational x(num, pow10(nfrac));
    BigRational radius;
    if (digits > 0)
        radius = BigRational(1, pow10(digits));
    else
        radius = BigRational(1, 2 * pow10(nfrac));
    ExactReal r;
    r.lo = x - radius;
    r.hi = x + radius;
    r.text = s;
    return r;
}

ExactReal ExactReal::from_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed,
                             std::numeric_limits<double>::max_digits10);
    std::string s(buf, res.ptr);
    ExactReal r = from_decimal(s);
    // Widen to at least half an ulp of the double itself.
    double ulp = std::nextafter(std::abs(x), INFINITY) - std::abs(x);
    BigRational half_ulp(ulp / 2);
    BigRational mid(x);
    if (mid - half_ulp < r.lo) r.lo = mid - half_ulp;
    if (mid + half_ulp > r.hi) r.hi = mid + half_ulp;
    return r;
}

ExactReal ExactReal::preset(const std::string& name, int depth) {
    // Convergents of [0; a, a, a, ...] bracket the value alternately.
    int pq;
    if (name == "golden" || name == "(sqrt5-1)/2")
        pq = 1;
    else if (name == "silver" || name == "sqrt2-1")
        pq = 2;
    else
        fail(ErrorKind::InvalidArgument, "unknown frequency preset '" + name + "'");
    BigInt p_prev = 1, p = 0, q_prev = 0, q = 1;  // p_{-1}, p_0, q_{-1}, q_0
    BigRational last, cur;
    for (int k = 1; k <= depth; ++k) {
        BigInt pn = pq * p + p_prev;
        BigInt qn = pq * q + q_prev;
        p_prev = p;
        p = pn;
        q_prev = q;
        q = qn;
        last = cur;
        cur = BigRational(p, q);
    }
    ExactReal r;
    r.lo = last < cur ? last : cur;
    r.hi = last < cur ? cur : last;
    r.text = name;
    return r;
}

ExactReal ExactReal::parse(const std::string& s, int digits) {
    if (!s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '('))
        return preset(s);
    return from_decimal(s, digits);
}

std::int64_t ContinuedFraction::q_int(std::size_t k) const {
    const BigInt& v = q.at(k);
    if (v > std::numeric_limits<std::int64_t>::max())
        fail(ErrorKind::Overflow, "denominator q_" + std::to_string(k) + " exceeds int64");
    return static_cast<std::int64_t>(v);
}

double ContinuedFraction::q_dist(std::size_t k) const { return dist_multiple(alpha, q.at(k)); }

double ContinuedFraction::q_error(std::size_t k) const {
    BigRational e = BigRational(q.at(k)) * alpha.midpoint() - BigRational(p.at(k));
    return std::abs(to_double(e));
}

ContinuedFraction cf_expand(const ExactReal& alpha, std::size_t depth) {
    if (depth < 1) fail(ErrorKind::InvalidArgument, "cf_expand: depth must be >= 1");
    if (!(alpha.lo > 0) || !(alpha.hi < 1))
        fail(ErrorKind::NotInUnitInterval, "alpha enclosure not inside (0,1): " + alpha.text);
    ContinuedFraction cf;
    cf.alpha = alpha;
    cf.a.push_back(0);
    cf.p = {BigInt(0)};
    cf.q = {BigInt(1)};
    BigRational lo = alpha.lo, hi = alpha.hi;
    BigInt p_prev = 1, q_prev = 0;  // index −1
    for (std::size_t k = 1; k <= depth; ++k) {
        if (lo <= 0)
            fail(ErrorKind::PrecisionExhausted,
                 "cannot certify partial quotient a_" + std::to_string(k) + " (remainder may vanish)");
        // x ↦ 1/x is decreasing, so the image of [lo,hi] is [1/hi, 1/lo].
        BigRational inv_lo = 1 / hi, inv_hi = 1 / lo;
        BigInt a_lo = floor_rational(inv_lo), a_hi = floor_rational(inv_hi);
        if (a_lo != a_hi || BigRational(a_hi) == inv_hi)
            fail(ErrorKind::PrecisionExhausted,
                 "cannot certify partial quotient a_" + std::to_string(k) + " at the given precision");
        const BigInt& ak = a_lo;
        lo = inv_lo - BigRational(ak);
        hi = inv_hi - BigRational(ak);
        BigInt pk = ak * cf.p.back() + p_prev;
        BigInt qk = ak * cf.q.back() + q_prev;
        p_prev = cf.p.back();
        q_prev = cf.q.back();
        cf.a.push_back(ak);
        cf.p.push_back(pk);
        cf.q.push_back(qk);
    }
    return cf;
}

ContinuedFraction cf_expand(double alpha, std::size_t depth) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail(ErrorKind::NotInUnitInterval, "alpha must lie in (0,1)");
    return cf_expand(ExactReal::from_double(alpha), depth);
}

double dist_to_integers(double x) {
    double r = x - std::round(x);
    return std::abs(r);
}

double dist_to_integers(const BigRational& x) {
    BigRational f = x - BigRational(floor_rational(x));
    if (f > BigRational(1, 2)) f = 1 - f;
    return to_double(f);
}

double dist_multiple(const ExactReal& alpha, const BigInt& m) {
    return dist_to_integers(BigRational(m) * alpha.midpoint());
}

std::vector<double> FrequencyVector::values() const {
    std::vector<double> v;
    v.reserve(components.size());
    for (const auto& c : components) v.push_back(c.value());
    return v;
}

bool FrequencyVector::looks_irrational(std::int64_t cutoff) const {
    for (const auto& c : components) {
        if (!(c.lo > 0) || !(c.hi < 1)) return false;
        // Expand until denominators pass the cutoff; a certified zero
        // remainder (rational) shows up as an exact integer reciprocal.
        BigRational lo = c.lo, hi = c.hi;
        BigInt q_prev = 0, q = 1;
        while (q <= cutoff) {
            if (lo <= 0) return false;
            BigRational inv_lo = 1 / hi, inv_hi = 1 / lo;
            BigInt a1 = floor_rational(inv_lo), a2 = floor_rational(inv_hi);
            if (a1 != a2) break;  // precision limit reached before cutoff: no evidence of rationality
            if (BigRational(a1) == inv_lo && BigRational(a2) == inv_hi) return false;
            lo = inv_lo - BigRational(a1);
            hi = inv_hi - BigRational(a1);
            BigInt qn = a1 * q + q_prev;
            q_prev = q;
            q = qn;
        }
    }
    return true;
}

DcReport dc_check(const FrequencyVector& alpha, std::int64_t max_norm) {
    if (max_norm < 1) fail(ErrorKind::InvalidArgument, "dc_check: max_norm must be >= 1");
    const std::size_t d = alpha.dim();
    std::vector<long double> a(d);
    for (std::size_t i = 0; i < d; ++i) a[i] = static_cast<long double>(alpha.components[i].value());
    DcReport rep;
    rep.worst_ratio = std::numeric_limits<double>::infinity();
    for_each_in_box(d, max_norm, [&](const IVec& n) {
        std::int64_t norm = sup_norm(n);
        if (norm == 0) return;
        long double s = 0;
        for (std::size_t i = 0; i < d; ++i) s += static_cast<long double>(n[i]) * a[i];
        long double r = s - std::round(s);
        double value = static_cast<double>(r < 0 ? -r : r);
        double bound = alpha.gamma * std::pow(static_cast<double>(norm), -alpha.tau);
        double ratio = value / bound;
        if (ratio < rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_value = value;
            rep.worst_n = n;
        }
    });
    rep.holds = rep.worst_ratio >= 1.0;
    return rep;
}

ResonantDenominator resonant_denominator(const ContinuedFraction& cf, double ell) {
    if (cf.depth() < 2) fail(ErrorKind::ExpansionTooShallow, "need at least two convergents");
    if (!(ell > static_cast<double>(cf.q_int(1))))
        fail(ErrorKind::InvalidArgument, "resonant_denominator: ell must exceed q_1");
    std::size_t nj = 0;
    bool found = false;
    for (std::size_t k = 1; k + 1 <= cf.depth(); ++k) {
        if (BigRational(cf.q[k]) < BigRational(ell) && BigRational(ell) <= BigRational(cf.q[k + 1])) {
            nj = k;
            found = true;
            break;
        }
    }
    if (!found)
        fail(ErrorKind::ExpansionTooShallow,
             "no q_n < ell <= q_{n+1} within depth " + std::to_string(cf.depth()));
    ResonantDenominator r;
    r.index = nj;
    r.q_nj = cf.q_int(nj);
    r.bound = 3.0 / static_cast<double>(r.q_nj);
    // Exact integer window [⌈21ℓ/20⌉, ⌊41ℓ/20⌋].
    const double lo = 21.0 * ell / 20.0, hi = 41.0 * ell / 20.0;
    std::int64_t m = static_cast<std::int64_t>(std::ceil(lo / static_cast<double>(r.q_nj)));
    for (; static_cast<double>(m) * static_cast<double>(r.q_nj) <= hi; ++m) {
        if (static_cast<double>(m) * static_cast<double>(r.q_nj) < lo) continue;
        BigInt q = BigInt(m) * cf.q[nj];
        double dist = dist_multiple(cf.alpha, q);
        if (dist < r.bound) {
            r.m = m;
            r.q = static_cast<std::int64_t>(q);
            r.dist = dist;
            r.within_two_over_q = dist < 2.0 / static_cast<double>(r.q_nj);
            return r;
        }
    }
    fail(ErrorKind::ExpansionTooShallow,
         "no multiple of q_nj in [21l/20, 41l/20] meets the 3/q_nj bound");
}

} // namespace qpsl
