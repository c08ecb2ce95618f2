#include "qpsl/lattice.hpp"

#include "qpsl/errors.hpp"

#include <cstdlib>
#include <sstream>

namespace qpsl {

std::int64_t sup_norm(const IVec& n) {
    std::int64_t m = 0;
    for (auto v : n) m = std::max<std::int64_t>(m, std::llabs(v));
    return m;
}

IVec zero_vec(std::size_t d) { return IVec(d, 0); }

IVec unit_vec(std::size_t d, std::size_t i, std::int64_t sign) {
    IVec e(d, 0);
    e.at(i) = sign;
    return e;
}

static void require_same(const IVec& a, const IVec& b) {
    if (a.size() != b.size()) fail(ErrorKind::DomainMismatch, "lattice dimension mismatch");
}

IVec operator+(const IVec& a, const IVec& b) {
    require_same(a, b);
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

IVec operator-(const IVec& a, const IVec& b) {
    require_same(a, b);
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

IVec operator-(const IVec& a) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

IVec scaled(const IVec& a, std::int64_t s) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

double dot(const IVec& n, const std::vector<double>& x) {
    if (n.size() != x.size()) fail(ErrorKind::DomainMismatch, "dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) s += static_cast<double>(n[i]) * x[i];
    return s;
}

std::string to_string(const IVec& n) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
    os << ')';
    return os.str();
}

} // namespace qpsl
