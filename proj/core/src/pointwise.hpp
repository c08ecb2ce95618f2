#pragma once

// Pointwise matrix operations on grid samples (internal helpers).

#include "qpsl/errors.hpp"
#include "qpsl/sl2.hpp"
#include "qpsl/spectral_grid.hpp"

#include <string>
#include <vector>

namespace qpsl::detail {

inline std::vector<Mat2> exp_values(const std::vector<Mat2>& X, double sign = 1.0) {
    std::vector<Mat2> r(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) r[i] = exp_traceless(sign * X[i]);
    return r;
}

// Principal logarithm at every sample; outside the injectivity radius the
// step is rejected.
inline std::vector<Mat2> log_values(const std::vector<Mat2>& G, const char* where) {
    std::vector<Mat2> r(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) {
        bool ok = true;
        r[i] = log_sl2(G[i], &ok);
        if (!ok) fail(ErrorKind::NonConvergence, std::string(where) + ": logarithm outside its injectivity radius");
    }
    return r;
}

// Adjugate of a matrix series (the inverse for unit determinant).
inline MatrixSeries adjugate(const MatrixSeries& F) {
    MatrixSeries r(F.dim(), F.doubled(), F.kind());
    for (const auto& [m, c] : F.coeffs()) {
        Mat2 a;
        a << c(1, 1), -c(0, 1), -c(1, 0), c(0, 0);
        r.set(m, a);
    }
    return r;
}

inline Mat2 adjugate(const Mat2& c) {
    Mat2 a;
    a << c(1, 1), -c(0, 1), -c(1, 0), c(0, 0);
    return a;
}

// Grid size resolving a series of the given frequency degree.
inline SpectralGrid grid_for(std::size_t dim, double max_degree, bool doubled, double oversample) {
    const double max_key = max_degree * (doubled ? 2.0 : 1.0);
    return SpectralGrid(dim, SpectralGrid::size_for(max_key, oversample), doubled);
}

// Deterministic probe points for identity checks (off the FFT grid).
inline std::vector<std::vector<double>> probe_points(std::size_t dim, std::size_t count, bool doubled) {
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    const double L = 2.0 * M_PI * (doubled ? 2.0 : 1.0);
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t i = 0; i < dim; ++i) {
            double u = (static_cast<double>(k) + 0.5) / static_cast<double>(count) +
                       0.6180339887498949 * static_cast<double>(i * (k + 1));
            pts[k][i] = L * (u - std::floor(u));
        }
    return pts;
}

} // namespace qpsl::detail
