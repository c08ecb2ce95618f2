#include "qpsl/spectral_grid.hpp"

#include "qpsl/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace qpsl {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

SpectralGrid::SpectralGrid(std::size_t dim, std::size_t n_per_axis, bool doubled)
    : dim_(dim), n_(n_per_axis), doubled_(doubled), total_(1) {
    if (dim_ < 1 || n_ < 2) fail(ErrorKind::InvalidArgument, "SpectralGrid: bad shape");
    for (std::size_t i = 0; i < dim_; ++i) total_ *= n_;
}

std::size_t SpectralGrid::size_for(double max_key, double oversample, std::size_t min_n) {
    double need = 2.0 * max_key * oversample + 1.0;
    std::size_t n = min_n;
    while (static_cast<double>(n) < need) n *= 2;
    return n;
}

std::vector<double> SpectralGrid::point(std::size_t idx) const {
    std::vector<double> th(dim_);
    const double L = 2.0 * M_PI * (doubled_ ? 2.0 : 1.0);
    for (std::size_t i = dim_; i-- > 0;) {
        th[i] = L * static_cast<double>(idx % n_) / static_cast<double>(n_);
        idx /= n_;
    }
    return th;
}

std::size_t SpectralGrid::index_of(const IVec& key) const {
    const std::int64_t half = static_cast<std::int64_t>(n_ / 2);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
        std::int64_t m = key[i];
        if (m >= half || m <= -half)
            fail(ErrorKind::DegreeOverflow, "grid of " + std::to_string(n_) + " points cannot resolve key " + to_string(key));
        std::int64_t w = m < 0 ? m + static_cast<std::int64_t>(n_) : m;
        idx = idx * n_ + static_cast<std::size_t>(w);
    }
    return idx;
}

void SpectralGrid::transform(std::vector<cplx>& data, bool forward) const {
    std::vector<int> dims(dim_, static_cast<int>(n_));
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(dim_), dims.data(), ptr, ptr,
                             forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

std::vector<cplx> SpectralGrid::values(const ScalarSeries& F) const {
    if (F.dim() != dim_) fail(ErrorKind::DomainMismatch, "grid/series dimension mismatch");
    ScalarSeries G = (doubled_ && !F.doubled()) ? F.promoted() : F;
    if (G.doubled() != doubled_) fail(ErrorKind::DomainMismatch, "doubled series on a simple grid");
    std::vector<cplx> data(total_, cplx(0.0, 0.0));
    for (const auto& [m, c] : G.coeffs()) data[index_of(m)] += c;
    transform(data, false);
    return data;
}

std::vector<Mat2> SpectralGrid::values(const MatrixSeries& F) const {
    std::vector<Mat2> out(total_, Mat2::Zero());
    for (int e = 0; e < 4; ++e) {
        auto v = values(entry(F, e / 2, e % 2));
        for (std::size_t i = 0; i < total_; ++i) out[i](e / 2, e % 2) = v[i];
    }
    return out;
}

ScalarSeries SpectralGrid::coefficients(const std::vector<cplx>& v, double max_degree, double drop_tol,
                                        double* dropped) const {
    if (v.size() != total_) fail(ErrorKind::DomainMismatch, "grid value count mismatch");
    std::vector<cplx> data = v;
    transform(data, true);
    const double inv = 1.0 / static_cast<double>(total_);
    ScalarSeries r(dim_, doubled_, ValueKind::Scalar);
    const std::int64_t half = static_cast<std::int64_t>(n_ / 2);
    const double p = doubled_ ? 2.0 : 1.0;
    double lost = 0.0;
    IVec key(dim_);
    for (std::size_t idx = 0; idx < total_; ++idx) {
        std::size_t rem = idx;
        bool nyquist = false;
        for (std::size_t i = dim_; i-- > 0;) {
            std::int64_t w = static_cast<std::int64_t>(rem % n_);
            rem /= n_;
            if (w == half) nyquist = true;
            key[i] = w > half ? w - static_cast<std::int64_t>(n_) : w;
        }
        cplx c = data[idx] * inv;
        double a = std::abs(c);
        if (nyquist || static_cast<double>(sup_norm(key)) / p > max_degree || a <= drop_tol) {
            lost += a;
            continue;
        }
        r.set(key, c);
    }
    if (dropped) *dropped += lost;
    return r;
}

MatrixSeries SpectralGrid::coefficients(const std::vector<Mat2>& v, double max_degree, double drop_tol,
                                        double* dropped, ValueKind kind) const {
    MatrixSeries r(dim_, doubled_, kind);
    std::vector<cplx> part(total_);
    for (int e = 0; e < 4; ++e) {
        for (std::size_t i = 0; i < total_; ++i) part[i] = v[i](e / 2, e % 2);
        ScalarSeries s = coefficients(part, max_degree, drop_tol, dropped);
        for (const auto& [m, c] : s.coeffs()) {
            Mat2 z = Mat2::Zero();
            z(e / 2, e % 2) = c;
            r.add(m, z);
        }
    }
    return r;
}

} // namespace qpsl
