#pragma once

#include "qpsl/fourier.hpp"

#include <cstddef>
#include <vector>

namespace qpsl {

// Uniform tensor grid on 𝕋^d (or 2𝕋^d when doubled) with n points per axis,
// used to evaluate nonlinear pointwise operations (products, exp, log) on
// series and to project back to coefficients via FFT.
class SpectralGrid {
public:
    SpectralGrid(std::size_t dim, std::size_t n_per_axis, bool doubled);

    std::size_t dim() const { return dim_; }
    std::size_t n() const { return n_; }
    bool doubled() const { return doubled_; }
    std::size_t size() const { return total_; }
    std::vector<double> point(std::size_t idx) const;

    std::vector<cplx> values(const ScalarSeries& F) const;
    std::vector<Mat2> values(const MatrixSeries& F) const;

    // Coefficients with |n| ≤ max_degree and ‖c‖ > drop_tol are kept; the
    // rest (including the Nyquist planes) is added to *dropped.
    ScalarSeries coefficients(const std::vector<cplx>& v, double max_degree, double drop_tol,
                              double* dropped = nullptr) const;
    MatrixSeries coefficients(const std::vector<Mat2>& v, double max_degree, double drop_tol,
                              double* dropped = nullptr, ValueKind kind = ValueKind::Matrix) const;

    // Smallest power-of-two grid resolving keys up to |m| ≤ max_key with the
    // given oversampling factor.
    static std::size_t size_for(double max_key, double oversample = 2.0, std::size_t min_n = 16);

private:
    void transform(std::vector<cplx>& data, bool forward) const;
    std::size_t index_of(const IVec& key) const;  // throws DegreeOverflow if not resolvable

    std::size_t dim_;
    std::size_t n_;
    bool doubled_;
    std::size_t total_;
};

} // namespace qpsl
