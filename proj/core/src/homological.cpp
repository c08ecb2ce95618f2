#include "qpsl/homological.hpp"

#include "qpsl/diophantine.hpp"
#include "qpsl/errors.hpp"
#include "qpsl/sl2.hpp"
#include "pointwise.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpsl {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Component component_of(int i, int j) {
    if (i == j) return Component::Diagonal;
    return i == 0 ? Component::Upper : Component::Lower;
}

bool is_diagonal(const Mat2& A) {
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    return std::abs(A(0, 1)) <= 1e-14 * scale && std::abs(A(1, 0)) <= 1e-14 * scale;
}

using lcplx = std::complex<long double>;

// e^{i⟨key,ω⟩/period}, with ⟨key,α⟩/period reduced mod 1 in long double so
// that large keys keep the phase accurate.
lcplx phase_of_l(const IVec& key, bool doubled, const std::vector<double>& alpha) {
    long double x = 0.0L;
    for (std::size_t i = 0; i < key.size(); ++i)
        x += static_cast<long double>(key[i]) * static_cast<long double>(alpha[i]);
    if (doubled) x /= 2.0L;
    x -= std::floor(x);
    const long double ph = 2.0L * 3.141592653589793238462643383279502884L * x;
    return {std::cos(ph), std::sin(ph)};
}

cplx phase_of(const IVec& key, bool doubled, const std::vector<double>& alpha) {
    const lcplx e = phase_of_l(key, doubled, alpha);
    return {static_cast<double>(e.real()), static_cast<double>(e.imag())};
}

// 4×4 matrix of Y ↦ e^{iφ} A^{-1} Y A − Y acting on column-major vec(Y).
Eigen::Matrix4cd kronecker_operator(const Mat2& A, cplx e) {
    const Mat2 Ainv = detail::adjugate(A) / A.determinant();
    Eigen::Matrix4cd K;
    for (int c1 = 0; c1 < 2; ++c1)
        for (int r1 = 0; r1 < 2; ++r1)
            for (int c2 = 0; c2 < 2; ++c2)
                for (int r2 = 0; r2 < 2; ++r2)
                    K(r1 + 2 * c1, r2 + 2 * c2) = e * A(c2, c1) * Ainv(r1, r2);
    return K - Eigen::Matrix4cd::Identity();
}

} // namespace

ResonanceResult classify_resonance(double rho, const std::vector<double>& alpha, double N, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) fail(ErrorKind::InvalidArgument, "threshold must lie in (0,1)");
    ResonanceResult r;
    r.rho = rho;
    const auto K = static_cast<std::int64_t>(std::floor(N));
    double best = std::numeric_limits<double>::infinity();
    for_each_in_box(alpha.size(), K, [&](const IVec& n) {
        if (sup_norm(n) == 0) return;
        double dist = dist_to_integers(2.0 * rho - dot(n, alpha));
        if (dist < threshold) ++r.count_below;
        if (dist < best) {
            best = dist;
            r.closest = n;
        }
    });
    r.distance = std::isfinite(best) ? best : 1.0;
    r.resonant = best < threshold;
    if (r.resonant) r.site = r.closest;
    r.unique = r.count_below <= 1;
    return r;
}

ResonanceResult classify_resonance(const Mat2& A, const std::vector<double>& alpha, double N, double threshold) {
    double rho;
    if (std::abs(A(0, 0).real()) < 1.0)
        rho = su11_rotation(A);
    else
        rho = A(0, 0).real() > 0 ? 0.0 : 0.5;
    return classify_resonance(rho, alpha, N, threshold);
}

std::pair<MatrixSeries, MatrixSeries> split_modes(const MatrixSeries& F, const ModeMask& mask) {
    MatrixSeries sel(F.dim(), F.doubled(), F.kind()), rest(F.dim(), F.doubled(), F.kind());
    for (const auto& [m, c] : F.coeffs()) {
        Mat2 a = Mat2::Zero(), b = Mat2::Zero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) (mask(m, component_of(i, j)) ? a : b)(i, j) = c(i, j);
        if (a.cwiseAbs().maxCoeff() > 0) sel.set(m, a);
        if (b.cwiseAbs().maxCoeff() > 0) rest.set(m, b);
    }
    return {sel, rest};
}

double homological_divisor(const Mat2& A, const IVec& key, bool doubled, const std::vector<double>& alpha) {
    const cplx e = phase_of(key, doubled, alpha);
    if (is_diagonal(A)) {
        const cplx l = A(0, 0), li = A(1, 1);
        double d = std::abs(e - 1.0);
        d = std::min(d, std::abs(e * li / l - 1.0));
        d = std::min(d, std::abs(e * l / li - 1.0));
        return d;
    }
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(kronecker_operator(A, e));
    return svd.singularValues()(3);
}

MatrixSeries solve_homological(const Mat2& A, const MatrixSeries& F, const std::vector<double>& alpha,
                               double floor) {
    if (F.dim() != alpha.size()) fail(ErrorKind::DomainMismatch, "solve_homological: dimension mismatch");
    MatrixSeries Y(F.dim(), F.doubled(), F.kind());
    const bool diag = is_diagonal(A);
    const cplx l = A(0, 0), li = A(1, 1);
    for (const auto& [m, c] : F.coeffs()) {
        const cplx e = phase_of(m, F.doubled(), alpha);
        if (diag) {
            // (A^{-1}YA)_{11} = Y11, _{12} = Y12 li/l, _{21} = Y21 l/li.
            Mat2 y = Mat2::Zero();
            // Divisors in long double: they are differences of unit-modulus
            // numbers and cancel for near-resonant modes.
            const lcplx el = phase_of_l(m, F.doubled(), alpha);
            const lcplx ll(l), lli(li);
            const lcplx div[2][2] = {{el - 1.0L, el * lli / ll - 1.0L}, {el * ll / lli - 1.0L, el - 1.0L}};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    if (c(i, j) == cplx(0.0, 0.0)) continue;
                    if (std::abs(div[i][j]) < floor)
                        fail(ErrorKind::SmallDivisor, "mode " + to_string(m) + " divisor " +
                                                          std::to_string(static_cast<double>(std::abs(div[i][j]))));
                    y(i, j) = cplx(-lcplx(c(i, j)) / div[i][j]);
                }
            Y.set(m, y);
        } else {
            const Eigen::Matrix4cd K = kronecker_operator(A, e);
            Eigen::JacobiSVD<Eigen::Matrix4cd> svd(K);
            const double smin = svd.singularValues()(3);
            if (smin < floor)
                fail(ErrorKind::SmallDivisor, "mode " + to_string(m) + " divisor " + std::to_string(smin));
            Eigen::Vector4cd rhs;
            rhs << -c(0, 0), -c(1, 0), -c(0, 1), -c(1, 1);
            // Solve in extended precision: near-resonant modes lose
            // log10(1/smin) digits to the cancellation against the identity.
            using LMat4 = Eigen::Matrix<lcplx, 4, 4>;
            using LMat2 = Eigen::Matrix<lcplx, 2, 2>;
            const LMat2 Al = A.cast<lcplx>();
            LMat2 Ail;
            const lcplx det = Al(0, 0) * Al(1, 1) - Al(0, 1) * Al(1, 0);
            Ail << Al(1, 1) / det, -Al(0, 1) / det, -Al(1, 0) / det, Al(0, 0) / det;
            const lcplx el = phase_of_l(m, F.doubled(), alpha);
            LMat4 Kl;
            for (int c1 = 0; c1 < 2; ++c1)
                for (int r1 = 0; r1 < 2; ++r1)
                    for (int c2 = 0; c2 < 2; ++c2)
                        for (int r2 = 0; r2 < 2; ++r2)
                            Kl(r1 + 2 * c1, r2 + 2 * c2) = el * Al(c2, c1) * Ail(r1, r2);
            Kl -= LMat4::Identity();
            const Eigen::Matrix<lcplx, 4, 1> v = Kl.fullPivLu().solve(rhs.cast<lcplx>());
            Mat2 y;
            y << cplx(v(0)), cplx(v(2)), cplx(v(1)), cplx(v(3));
            Y.set(m, y);
        }
    }
    return Y;
}

ModeMask nonresonant_mask(double window, bool doubled) {
    const double p = doubled ? 2.0 : 1.0;
    return [window, p](const IVec& key, Component) {
        const double f = static_cast<double>(sup_norm(key)) / p;
        return f > 0.0 && f <= window;
    };
}

NewtonResult remove_nonresonant(const Mat2& A, const MatrixSeries& F, const std::vector<double>& alpha,
                                const ModeMask& mask, const NewtonOptions& opt) {
    if (F.dim() != alpha.size()) fail(ErrorKind::DomainMismatch, "remove_nonresonant: dimension mismatch");
    const bool doubled = F.doubled();
    const auto grid = detail::grid_for(F.dim(), opt.max_degree, doubled, opt.oversample);
    const std::vector<double> omega = [&] {
        std::vector<double> w(alpha.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = kTwoPi * alpha[i];
        return w;
    }();
    const Mat2 Ainv = detail::adjugate(A) / A.determinant();

    NewtonResult res;
    MatrixSeries Fp = truncate(F, opt.max_degree);
    std::vector<Mat2> Bvals(grid.size(), Mat2::Identity());
    for (int p = 0;; ++p) {
        auto [nre, re] = split_modes(Fp, mask);
        const double norm = analytic_norm(nre, 0.0);
        res.nre_norms.push_back(norm);
        if (norm <= opt.tol) break;
        if (p > 0 && norm >= res.nre_norms[static_cast<std::size_t>(p - 1)]) {
            // Stagnation at the round-off floor counts as convergence.
            if (norm <= 1e-12 * std::max(1.0, res.nre_norms.front())) break;
            fail(ErrorKind::NewtonDiverged, "removable part did not decrease at sweep " + std::to_string(p) +
                                                " (" + std::to_string(norm) + ")");
        }
        if (p >= opt.max_iter) fail(ErrorKind::NewtonDiverged, "iteration cap reached");
        // Linearising around A e^{F̂(0)} instead of A keeps the contraction
        // quadratic when the mean of F is comparable to its oscillating part.
        // When mean entries are themselves to be removed the zero mode of the
        // operator for a non-diagonal constant is singular, so A is kept.
        const Mat2 mean = Fp.mean();
        const bool removes_mean = nre.coeffs().count(zero_vec(F.dim())) > 0;
        const Mat2 At = !removes_mean && mean.cwiseAbs().maxCoeff() > 0.0 ? Mat2(A * exp_traceless(mean)) : A;
        MatrixSeries Y = solve_homological(At, nre, alpha, opt.floor);
        auto eYs = detail::exp_values(grid.values(shift(Y, omega)));
        auto eY = detail::exp_values(grid.values(Y));
        auto emY = detail::exp_values(grid.values(Y), -1.0);
        auto eF = detail::exp_values(grid.values(Fp));
        std::vector<Mat2> G(grid.size());
        for (std::size_t i = 0; i < G.size(); ++i) {
            G[i] = Ainv * eYs[i] * A * eF[i] * emY[i];
            Bvals[i] = eY[i] * Bvals[i];
        }
        Fp = symmetrize_su11(grid.coefficients(detail::log_values(G, "remove_nonresonant"), opt.max_degree, 0.0,
                                               &res.dropped, ValueKind::SU11));
        res.iterations = p + 1;
    }
    res.F_star = Fp;
    res.B = grid.coefficients(Bvals, opt.max_degree, 0.0, &res.dropped, ValueKind::SU11);
    res.Y = symmetrize_su11(
        grid.coefficients(detail::log_values(Bvals, "remove_nonresonant"), opt.max_degree, 0.0, nullptr, ValueKind::SU11));
    res.y_norm = analytic_norm(res.Y, 0.0);

    // Conjugation identity on probe points off the FFT grid.
    const MatrixSeries Bs = shift(res.B, omega);
    const MatrixSeries Binv = detail::adjugate(res.B);
    for (const auto& th : detail::probe_points(F.dim(), opt.check_points, doubled)) {
        Mat2 lhs = eval(Bs, th) * A * exp_traceless(eval(F, th)) * eval(Binv, th);
        Mat2 rhs = A * exp_traceless(eval(res.F_star, th));
        res.residual = std::max(res.residual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return res;
}

} // namespace qpsl
