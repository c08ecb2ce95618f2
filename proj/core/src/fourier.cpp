#include "qpsl/fourier.hpp"

#include "qpsl/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace qpsl {

double value_norm(const cplx& v) { return std::abs(v); }

double value_norm(const Mat2& v) {
    // Largest singular value of a 2×2 matrix in closed form.
    Eigen::Matrix2cd h = v.adjoint() * v;
    double tr = h.trace().real();
    double det = std::abs(h.determinant());
    double disc = std::max(0.0, tr * tr / 4.0 - det);
    return std::sqrt(std::max(0.0, tr / 2.0 + std::sqrt(disc)));
}

template <> cplx zero_value<cplx>() { return cplx(0.0, 0.0); }
template <> Mat2 zero_value<Mat2>() { return Mat2::Zero(); }
template <> cplx identity_value<cplx>() { return cplx(1.0, 0.0); }
template <> Mat2 identity_value<Mat2>() { return Mat2::Identity(); }

template <class T> T Series<T>::at(const IVec& m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? zero_value<T>() : it->second;
}

template <class T> void Series<T>::add(const IVec& m, const T& v) {
    auto it = coeffs_.find(m);
    if (it == coeffs_.end())
        coeffs_.emplace(m, v);
    else
        it->second += v;
}

template <class T> double Series<T>::degree() const {
    double d = 0.0;
    for (const auto& [m, c] : coeffs_) d = std::max(d, freq_norm(m));
    return d;
}

template <class T> Series<T> Series<T>::promoted() const {
    if (doubled_) return *this;
    Series<T> r(dim_, true, kind_);
    for (const auto& [m, c] : coeffs_) r.coeffs_.emplace(scaled(m, 2), c);
    return r;
}

template <class T> double Series<T>::prune(double tol) {
    double dropped = 0.0;
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        double n = value_norm(it->second);
        if (n <= tol) {
            dropped += n;
            it = coeffs_.erase(it);
        } else {
            ++it;
        }
    }
    return dropped;
}

template class Series<cplx>;
template class Series<Mat2>;

template <class T> T eval(const Series<T>& F, const std::vector<double>& theta) {
    if (theta.size() != F.dim()) fail(ErrorKind::DomainMismatch, "eval: point dimension differs from series");
    T acc = zero_value<T>();
    const double inv_p = 1.0 / F.period();
    for (const auto& [m, c] : F.coeffs()) {
        double phase = dot(m, theta) * inv_p;
        acc += c * cplx(std::cos(phase), std::sin(phase));
    }
    return acc;
}

template <class T> Series<T> truncate(const Series<T>& F, double K) {
    Series<T> r(F.dim(), F.doubled(), F.kind());
    for (const auto& [m, c] : F.coeffs())
        if (F.freq_norm(m) <= K) r.coeffs().emplace(m, c);
    return r;
}

template <class T> Series<T> project_tail(const Series<T>& F, double K) {
    Series<T> r(F.dim(), F.doubled(), F.kind());
    for (const auto& [m, c] : F.coeffs())
        if (F.freq_norm(m) > K) r.coeffs().emplace(m, c);
    return r;
}

namespace {

template <class T>
void align(const Series<T>& F, const Series<T>& G, Series<T>& Fa, Series<T>& Ga) {
    if (F.dim() != G.dim()) fail(ErrorKind::DomainMismatch, "series dimensions differ");
    if (F.doubled() == G.doubled()) {
        Fa = F;
        Ga = G;
    } else {
        Fa = F.promoted();
        Ga = G.promoted();
    }
}

ValueKind product_kind(ValueKind a, ValueKind b) {
    if (a == ValueKind::Scalar && b == ValueKind::Scalar) return ValueKind::Scalar;
    return ValueKind::Matrix;
}

} // namespace

template <class T>
Series<T> multiply(const Series<T>& F, const Series<T>& G, const ProductOptions& opt, double* dropped) {
    Series<T> Fa, Ga;
    align(F, G, Fa, Ga);
    Series<T> r(Fa.dim(), Fa.doubled(), product_kind(F.kind(), G.kind()));
    double lost = 0.0;
    for (const auto& [m, a] : Fa.coeffs()) {
        for (const auto& [n, b] : Ga.coeffs()) {
            IVec k = m + n;
            T v = a * b;
            if (r.freq_norm(k) > opt.max_degree) {
                if (opt.policy == OverflowPolicy::Error)
                    fail(ErrorKind::DegreeOverflow, "product degree exceeds max_degree");
                lost += value_norm(v);
                continue;
            }
            r.add(k, v);
        }
    }
    if (dropped) *dropped += lost;
    return r;
}

template <class T> Series<T> operator+(const Series<T>& F, const Series<T>& G) {
    Series<T> Fa, Ga;
    align(F, G, Fa, Ga);
    Series<T> r = Fa;
    if (F.kind() != G.kind()) r.set_kind(ValueKind::Matrix);
    for (const auto& [m, c] : Ga.coeffs()) r.add(m, c);
    return r;
}

template <class T> Series<T> operator-(const Series<T>& F, const Series<T>& G) { return F + scale(G, -1.0); }

template <class T> Series<T> scale(const Series<T>& F, cplx s) {
    Series<T> r = F;
    for (auto& [m, c] : r.coeffs()) c *= s;
    return r;
}

template <class T> Series<T> shift(const Series<T>& F, const std::vector<double>& omega) {
    Series<T> r = F;
    const double inv_p = 1.0 / F.period();
    for (auto& [m, c] : r.coeffs()) {
        double ph = dot(m, omega) * inv_p;
        c *= cplx(std::cos(ph), std::sin(ph));
    }
    return r;
}

template <class T> double analytic_norm(const Series<T>& F, double h) {
    if (h < 0) fail(ErrorKind::InvalidArgument, "analytic_norm: h must be >= 0");
    double s = 0.0;
    for (const auto& [m, c] : F.coeffs()) s += value_norm(c) * std::exp(F.freq_norm(m) * h);
    return s;
}

template <class T> double ck_norm_estimate(const Series<T>& F, double k) {
    if (k < 0) fail(ErrorKind::InvalidArgument, "ck_norm_estimate: k must be >= 0");
    double s = 0.0;
    for (const auto& [m, c] : F.coeffs()) s += value_norm(c) * std::pow(1.0 + F.freq_norm(m), k);
    return s;
}

template <class T> double sup_coeff_beyond(const Series<T>& F, double K) {
    double s = 0.0;
    for (const auto& [m, c] : F.coeffs())
        if (F.freq_norm(m) >= K) s = std::max(s, value_norm(c));
    return s;
}

template <class T> Series<T> symmetrize_real(const Series<T>& F) {
    Series<T> r(F.dim(), F.doubled(), F.kind());
    for (const auto& [m, c] : F.coeffs()) {
        T mirror = F.at(-m);
        T v;
        if constexpr (std::is_same_v<T, cplx>)
            v = 0.5 * (c + std::conj(mirror));
        else
            v = 0.5 * (c + mirror.conjugate());
        r.set(m, v);
        if constexpr (std::is_same_v<T, cplx>)
            r.set(-m, std::conj(v));
        else
            r.set(-m, v.conjugate());
    }
    return r;
}

#define QPSL_INSTANTIATE(T)                                                                     \
    template T eval(const Series<T>&, const std::vector<double>&);                              \
    template Series<T> truncate(const Series<T>&, double);                                      \
    template Series<T> project_tail(const Series<T>&, double);                                  \
    template Series<T> multiply(const Series<T>&, const Series<T>&, const ProductOptions&, double*); \
    template Series<T> operator+(const Series<T>&, const Series<T>&);                           \
    template Series<T> operator-(const Series<T>&, const Series<T>&);                           \
    template Series<T> scale(const Series<T>&, cplx);                                           \
    template Series<T> shift(const Series<T>&, const std::vector<double>&);                     \
    template double analytic_norm(const Series<T>&, double);                                    \
    template double ck_norm_estimate(const Series<T>&, double);                                 \
    template double sup_coeff_beyond(const Series<T>&, double);                                 \
    template Series<T> symmetrize_real(const Series<T>&);

QPSL_INSTANTIATE(cplx)
QPSL_INSTANTIATE(Mat2)
#undef QPSL_INSTANTIATE

MatrixSeries constant_series(std::size_t dim, const Mat2& A, bool doubled) {
    MatrixSeries r(dim, doubled, ValueKind::Matrix);
    r.set(zero_vec(dim), A);
    return r;
}

ScalarSeries entry(const MatrixSeries& F, int i, int j) {
    ScalarSeries r(F.dim(), F.doubled(), ValueKind::Scalar);
    for (const auto& [m, c] : F.coeffs())
        if (c(i, j) != cplx(0.0, 0.0)) r.set(m, c(i, j));
    return r;
}

MatrixSeries from_entries(const ScalarSeries& f11, const ScalarSeries& f12, const ScalarSeries& f21,
                          const ScalarSeries& f22) {
    const ScalarSeries* parts[4] = {&f11, &f12, &f21, &f22};
    bool doubled = false;
    for (auto* p : parts) doubled = doubled || p->doubled();
    MatrixSeries r(f11.dim(), doubled, ValueKind::Matrix);
    for (int k = 0; k < 4; ++k) {
        ScalarSeries s = doubled ? parts[k]->promoted() : *parts[k];
        for (const auto& [m, c] : s.coeffs()) {
            Mat2 v = Mat2::Zero();
            v(k / 2, k % 2) = c;
            r.add(m, v);
        }
    }
    return r;
}

MatrixSeries left_mul(const Mat2& A, const MatrixSeries& F) {
    MatrixSeries r = F;
    r.set_kind(ValueKind::Matrix);
    for (auto& [m, c] : r.coeffs()) c = A * c;
    return r;
}

MatrixSeries right_mul(const MatrixSeries& F, const Mat2& A) {
    MatrixSeries r = F;
    r.set_kind(ValueKind::Matrix);
    for (auto& [m, c] : r.coeffs()) c = c * A;
    return r;
}

MatrixSeries conjugate_const(const Mat2& P, const MatrixSeries& F) {
    Mat2 Pinv = P.inverse();
    MatrixSeries r = F;
    for (auto& [m, c] : r.coeffs()) c = P * c * Pinv;
    return r;
}

MatrixSeries symmetrize_su11(const MatrixSeries& F) {
    MatrixSeries r(F.dim(), F.doubled(), ValueKind::SU11);
    std::vector<IVec> keys;
    for (const auto& [m, c] : F.coeffs()) {
        keys.push_back(m);
        keys.push_back(-m);
    }
    for (const auto& m : keys) {
        if (r.coeffs().count(m)) continue;
        Mat2 c = F.at(m), cm = F.at(-m);
        // i û(m) from the diagonal, with û real: X11(−m) = −conj X11(m).
        cplx x11 = 0.5 * (c(0, 0) - c(1, 1));
        cplx x11m = 0.5 * (cm(0, 0) - cm(1, 1));
        cplx d = 0.5 * (x11 - std::conj(x11m));
        // w at m and w̄ relation: X21(m) = conj X12(−m).
        cplx w = 0.5 * (c(0, 1) + std::conj(cm(1, 0)));
        cplx wm = 0.5 * (cm(0, 1) + std::conj(c(1, 0)));
        Mat2 v;
        v << d, w, std::conj(wm), -d;
        Mat2 vm;
        vm << -std::conj(d), wm, std::conj(w), std::conj(d);
        r.set(m, v);
        r.set(-m, vm);
    }
    return r;
}

double su11_defect(const MatrixSeries& F) {
    double worst = 0.0;
    for (const auto& [m, c] : F.coeffs()) {
        Mat2 cm = F.at(-m);
        worst = std::max(worst, std::abs(c(0, 0) + c(1, 1)));
        worst = std::max(worst, std::abs(c(0, 0) + std::conj(cm(0, 0))));
        worst = std::max(worst, std::abs(c(1, 0) - std::conj(cm(0, 1))));
    }
    return worst;
}

} // namespace qpsl
