#pragma once

#include "qpsl/lattice.hpp"

#include <Eigen/Core>

#include <complex>
#include <map>
#include <vector>

namespace qpsl {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using RMat2 = Eigen::Matrix2d;

enum class ValueKind { Scalar, Matrix, SU11, SL2R };

// Finite Fourier series on 𝕋^d (modes e^{i⟨n,θ⟩}) or, when period-doubled,
// on 2𝕋^d: a stored key m then stands for the half-integer frequency m/2,
// i.e. the mode e^{i⟨m,θ⟩/2}. Degrees and norms always use the actual
// frequency, so |m/2| for doubled series.
template <class T>
class Series {
public:
    using Map = std::map<IVec, T>;

    Series() = default;
    Series(std::size_t dim, bool doubled, ValueKind kind) : dim_(dim), doubled_(doubled), kind_(kind) {}

    std::size_t dim() const { return dim_; }
    bool doubled() const { return doubled_; }
    int period() const { return doubled_ ? 2 : 1; }
    ValueKind kind() const { return kind_; }
    void set_kind(ValueKind k) { kind_ = k; }

    const Map& coeffs() const { return coeffs_; }
    Map& coeffs() { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    std::size_t size() const { return coeffs_.size(); }

    // Coefficient at key m (zero when absent).
    T at(const IVec& m) const;
    T mean() const { return at(zero_vec(dim_)); }
    void add(const IVec& m, const T& v);
    void set(const IVec& m, const T& v) { coeffs_[m] = v; }

    // Degree in actual frequency units: max |m|/period.
    double degree() const;
    double freq_norm(const IVec& key) const { return static_cast<double>(sup_norm(key)) / period(); }

    // Same function viewed on 2𝕋^d (keys doubled). Identity when already doubled.
    Series promoted() const;
    // Drops coefficients with ‖c‖ ≤ tol; returns the dropped mass.
    double prune(double tol);

private:
    std::size_t dim_ = 1;
    bool doubled_ = false;
    ValueKind kind_ = ValueKind::Scalar;
    Map coeffs_;
};

using ScalarSeries = Series<cplx>;
using MatrixSeries = Series<Mat2>;

double value_norm(const cplx& v);
double value_norm(const Mat2& v);  // operator 2-norm

template <class T> T zero_value();
template <class T> T identity_value();

// Σ F̂(m) e^{i⟨m,θ⟩/period}
template <class T> T eval(const Series<T>& F, const std::vector<double>& theta);

// 𝒯_K keeps |n| ≤ K, ℛ_K keeps |n| > K (actual frequency sup-norm).
template <class T> Series<T> truncate(const Series<T>& F, double K);
template <class T> Series<T> project_tail(const Series<T>& F, double K);

enum class OverflowPolicy { DropWithAccounting, Error };

struct ProductOptions {
    double max_degree = 1e300;
    OverflowPolicy policy = OverflowPolicy::DropWithAccounting;
};

// Convolution product; coefficients beyond max_degree are dropped (mass
// accumulated into *dropped) or rejected with DegreeOverflow.
template <class T>
Series<T> multiply(const Series<T>& F, const Series<T>& G, const ProductOptions& opt = {},
                   double* dropped = nullptr);

template <class T> Series<T> operator+(const Series<T>& F, const Series<T>& G);
template <class T> Series<T> operator-(const Series<T>& F, const Series<T>& G);
template <class T> Series<T> scale(const Series<T>& F, cplx s);

// θ ↦ F(θ + ω) realised as F̂(m) ↦ F̂(m) e^{i⟨m,ω⟩/period}.
template <class T> Series<T> shift(const Series<T>& F, const std::vector<double>& omega);

// Σ ‖F̂(n)‖ e^{|n|h}: the majorant used for every analytic-strip threshold.
template <class T> double analytic_norm(const Series<T>& F, double h);
// Σ ‖F̂(n)‖ (1+|n|)^k: upper bound for the C^k norm.
template <class T> double ck_norm_estimate(const Series<T>& F, double k);

// Sup-norm of ‖F̂(n)‖ over |n| ≥ K (0 when empty).
template <class T> double sup_coeff_beyond(const Series<T>& F, double K);

// Matrix-series helpers.
MatrixSeries constant_series(std::size_t dim, const Mat2& A, bool doubled = false);
ScalarSeries entry(const MatrixSeries& F, int i, int j);
MatrixSeries from_entries(const ScalarSeries& f11, const ScalarSeries& f12,
                          const ScalarSeries& f21, const ScalarSeries& f22);
// Left/right multiplication by constant matrices.
MatrixSeries left_mul(const Mat2& A, const MatrixSeries& F);
MatrixSeries right_mul(const MatrixSeries& F, const Mat2& A);
MatrixSeries conjugate_const(const Mat2& P, const MatrixSeries& F);  // P F P^{-1}

// Projection onto the su(1,1) pattern [[iu, w],[w̄, −iu]] (u real): removes
// numerical drift after grid round trips.
MatrixSeries symmetrize_su11(const MatrixSeries& F);
// Largest coefficient deviation from the su(1,1) structure.
double su11_defect(const MatrixSeries& F);
// Projection onto real-valued functions: F̂(−n) = conj F̂(n).
template <class T> Series<T> symmetrize_real(const Series<T>& F);

} // namespace qpsl
