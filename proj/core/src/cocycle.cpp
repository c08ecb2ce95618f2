#include "qpsl/cocycle.hpp"

#include "qpsl/errors.hpp"
#include "qpsl/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpsl {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::vector<double> sample_phase(std::size_t d, int s, int samples, bool doubled) {
    std::vector<double> th(d);
    const double L = kTwoPi * (doubled ? 2.0 : 1.0);
    for (std::size_t i = 0; i < d; ++i) {
        double u = (static_cast<double>(s) + 0.5) / samples + 0.3819660112501051 * static_cast<double>(i);
        th[i] = L * (u - std::floor(u));
    }
    return th;
}

void advance(std::vector<double>& th, const std::vector<double>& omega, double period) {
    for (std::size_t i = 0; i < th.size(); ++i) {
        th[i] += omega[i];
        if (th[i] >= period) th[i] -= period;
    }
}

// Polar angle of A = R_ψ S with S symmetric positive definite.
inline double polar_angle(const RMat2& A) { return std::atan2(A(1, 0) - A(0, 1), A(0, 0) + A(1, 1)); }

// Neumaier-compensated running sum.
struct Accumulator {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace

std::vector<double> QpCocycle::omega() const {
    std::vector<double> w(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) w[i] = kTwoPi * alpha[i];
    return w;
}

RMat2 QpCocycle::operator()(const std::vector<double>& theta) const {
    if (constant) return *constant;
    if (potential) return schrodinger_matrix(energy, (*potential)(theta));
    return map(theta);
}

RMat2 schrodinger_matrix(double E, double V) {
    RMat2 A;
    A << E - V, -1.0, 1.0, 0.0;
    return A;
}

QpCocycle constant_cocycle(const std::vector<double>& alpha, const RMat2& A) {
    QpCocycle c;
    c.alpha = alpha;
    c.constant = A;
    c.map = [A](const std::vector<double>&) { return A; };
    return c;
}

QpCocycle schrodinger_cocycle(const Potential& V, const std::vector<double>& alpha, double E) {
    if (V.dim != alpha.size()) fail(ErrorKind::DomainMismatch, "potential and frequency dimensions differ");
    QpCocycle c;
    c.alpha = alpha;
    c.energy = E;
    if (V.labels.empty()) {
        c.constant = schrodinger_matrix(E, 0.0);
    }
    c.potential = std::make_shared<const Potential>(V);
    auto pot = c.potential;
    c.map = [pot, E](const std::vector<double>& th) { return schrodinger_matrix(E, (*pot)(th)); };
    return c;
}

QpCocycle series_cocycle(const MatrixSeries& A, const std::vector<double>& alpha) {
    if (A.dim() != alpha.size()) fail(ErrorKind::DomainMismatch, "series and frequency dimensions differ");
    QpCocycle c;
    c.alpha = alpha;
    c.doubled = A.doubled();
    auto S = std::make_shared<MatrixSeries>(A);
    c.map = [S](const std::vector<double>& th) { return RMat2(eval(*S, th).real()); };
    if (A.size() == 1 && A.coeffs().begin()->first == zero_vec(A.dim()))
        c.constant = RMat2(A.coeffs().begin()->second.real());
    return c;
}

RMat2 transfer_product(const QpCocycle& c, const std::vector<double>& theta, long long n) {
    const auto w = c.omega();
    RMat2 P = RMat2::Identity();
    std::vector<double> th = theta;
    if (n >= 0) {
        for (long long k = 0; k < n; ++k) {
            P = c(th) * P;
            for (std::size_t i = 0; i < th.size(); ++i) th[i] += w[i];
        }
        return P;
    }
    // S_{−n}(θ) = S_n(θ − nα)^{-1}
    for (std::size_t i = 0; i < th.size(); ++i) th[i] += static_cast<double>(n) * w[i];
    for (long long k = 0; k < -n; ++k) {
        P = c(th) * P;
        for (std::size_t i = 0; i < th.size(); ++i) th[i] += w[i];
    }
    return P.inverse();
}

RotationResult rotation_number(const QpCocycle& c, const RotationOptions& opt) {
    if (opt.iters < 1 || opt.phase_samples < 1) fail(ErrorKind::InvalidArgument, "rotation_number: bad options");
    const auto w = c.omega();
    const double period = kTwoPi * (c.doubled ? 2.0 : 1.0);
    const std::size_t d = c.dim();

    // Branch centre for the polar angle: circular mean over a short orbit.
    double centre = 0.0;
    if (!c.is_schrodinger()) {
        double sx = 0.0, sy = 0.0;
        auto th = sample_phase(d, 0, 1, c.doubled);
        for (int k = 0; k < 256; ++k) {
            double psi = polar_angle(c(th));
            sx += std::cos(psi);
            sy += std::sin(psi);
            advance(th, w, period);
        }
        centre = std::atan2(sy, sx);
    }

    std::vector<double> means(static_cast<std::size_t>(opt.phase_samples));
    parallel_for(means.size(), [&](std::size_t s) {
        auto th = sample_phase(d, static_cast<int>(s), opt.phase_samples, c.doubled);
        double vx = 1.0, vy = 0.0;
        Accumulator acc;
        for (long long k = 0; k < opt.iters; ++k) {
            RMat2 A;
            double psi;
            if (c.is_schrodinger()) {
                const double diag = c.energy - (*c.potential)(th);
                A << diag, -1.0, 1.0, 0.0;
                psi = std::atan2(2.0, diag);
            } else {
                A = c(th);
                psi = centre + std::remainder(polar_angle(A) - centre, kTwoPi);
            }
            const double wx = A(0, 0) * vx + A(0, 1) * vy;
            const double wy = A(1, 0) * vx + A(1, 1) * vy;
            const double raw = std::atan2(vx * wy - vy * wx, vx * wx + vy * wy);
            acc.add(psi + std::remainder(raw - psi, kTwoPi));
            const double nrm = std::hypot(wx, wy);
            vx = wx / nrm;
            vy = wy / nrm;
            advance(th, w, period);
        }
        means[s] = acc.value() / (kTwoPi * static_cast<double>(opt.iters));
    });
    RotationResult r;
    r.iterations = opt.iters;
    r.samples = opt.phase_samples;
    double lo = means[0], hi = means[0], sum = 0.0;
    for (double m : means) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        sum += m;
    }
    r.rho_lift = sum / static_cast<double>(means.size());
    r.dispersion = hi - lo;
    r.rho = r.rho_lift - std::floor(r.rho_lift);
    if (r.rho >= 1.0) r.rho = 0.0;
    if (r.dispersion > opt.max_dispersion)
        fail(ErrorKind::NonConvergence, "rotation number dispersion " + std::to_string(r.dispersion));
    return r;
}

double lyapunov_exponent(const QpCocycle& c, long long iters, int phase_samples) {
    const auto w = c.omega();
    const double period = kTwoPi * (c.doubled ? 2.0 : 1.0);
    std::vector<double> vals(static_cast<std::size_t>(phase_samples));
    parallel_for(vals.size(), [&](std::size_t s) {
        auto th = sample_phase(c.dim(), static_cast<int>(s), phase_samples, c.doubled);
        // Generic start vector so constant cocycles do not sit on an eigenline.
        double vx = 0.8191520442889918, vy = 0.5735764363510461;
        Accumulator acc;
        for (long long k = 0; k < iters; ++k) {
            RMat2 A = c(th);
            double wx = A(0, 0) * vx + A(0, 1) * vy;
            double wy = A(1, 0) * vx + A(1, 1) * vy;
            double nrm = std::hypot(wx, wy);
            acc.add(std::log(nrm));
            vx = wx / nrm;
            vy = wy / nrm;
            advance(th, w, period);
        }
        vals[s] = acc.value() / static_cast<double>(iters);
    });
    double sum = 0.0;
    for (double v : vals) sum += v;
    return sum / static_cast<double>(vals.size());
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Hyperbolic: return "hyperbolic";
    case Verdict::NotHyperbolic: return "not";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Normalised transfer product over n steps: returns direction data and log‖S_n‖.
struct Block {
    RMat2 P;          // S_n / e^{log_scale}
    double log_scale;
    double log_norm() const { return log_scale + std::log(value_norm(Mat2(P.cast<cplx>()))); }
};

Block run_block(const QpCocycle& c, std::vector<double>& th, long long n, const std::vector<double>& w,
                double period) {
    Block b{RMat2::Identity(), 0.0};
    for (long long k = 0; k < n; ++k) {
        b.P = c(th) * b.P;
        advance(th, w, period);
        if ((k & 15) == 15) {
            double s = b.P.cwiseAbs().maxCoeff();
            b.P /= s;
            b.log_scale += std::log(s);
        }
    }
    return b;
}

Eigen::Vector2d top_left_singular(const RMat2& P) {
    Eigen::JacobiSVD<RMat2> svd(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU().col(0);
}

Eigen::Vector2d bottom_right_singular(const RMat2& P) {
    Eigen::JacobiSVD<RMat2> svd(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixV().col(1);
}

double line_angle(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
    return std::acos(std::min(1.0, c));
}

} // namespace

UhResult uh_test(const QpCocycle& c, long long horizon, std::size_t grid) {
    UhResult r;
    r.horizon = horizon;
    if (c.constant) {
        const double tr = std::abs(c.constant->trace());
        r.margin = tr - 2.0;
        r.verdict = r.margin > 0 ? Verdict::Hyperbolic : Verdict::NotHyperbolic;
        r.transversality = 0.0;
        return r;
    }
    if (horizon < 1 || grid < 1) fail(ErrorKind::InvalidArgument, "uh_test: horizon and grid must be positive");
    const auto w = c.omega();
    const double period = kTwoPi * (c.doubled ? 2.0 : 1.0);
    const std::size_t d = c.dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= grid;
    std::vector<double> growth(total), growth2(total), past(total), angle(total);
    parallel_for(total, [&](std::size_t g) {
        std::vector<double> th(d);
        std::size_t rem = g;
        for (std::size_t i = d; i-- > 0;) {
            th[i] = period * static_cast<double>(rem % grid) / static_cast<double>(grid);
            rem /= grid;
        }
        std::vector<double> start = th;
        for (std::size_t i = 0; i < d; ++i) {
            start[i] = std::fmod(th[i] - static_cast<double>(horizon) * w[i], period);
            if (start[i] < 0) start[i] += period;
        }
        Block b1 = run_block(c, start, horizon, w, period);  // S_H(θ − Hα), ends at θ
        Block b2 = run_block(c, start, horizon, w, period);  // S_H(θ)
        Block b3 = run_block(c, start, horizon, w, period);  // S_H(θ + Hα)
        RMat2 P23 = b3.P * b2.P;
        double log23 = b3.log_scale + b2.log_scale + std::log(value_norm(Mat2(P23.cast<cplx>())));
        past[g] = b1.log_norm();
        growth[g] = b2.log_norm();
        growth2[g] = log23;
        angle[g] = line_angle(top_left_singular(b1.P), bottom_right_singular(b2.P));
    });
    const double min_past = *std::min_element(past.begin(), past.end());
    const double min_g = *std::min_element(growth.begin(), growth.end());
    double min_extra = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < total; ++g) min_extra = std::min(min_extra, growth2[g] - growth[g]);
    r.transversality = *std::min_element(angle.begin(), angle.end());
    r.margin = min_g / static_cast<double>(horizon);
    const bool grows = min_past >= 8.0 && min_g >= 8.0 && min_extra >= 0.5 * min_g;
    r.verdict = (grows && r.transversality >= 1e-6) ? Verdict::Hyperbolic : Verdict::Inconclusive;
    return r;
}

QpCocycle conjugate(const QpCocycle& c, const MatrixSeries& Z, std::size_t probe_grid) {
    if (Z.dim() != c.dim()) fail(ErrorKind::DomainMismatch, "conjugator dimension differs from cocycle");
    auto Zp = std::make_shared<MatrixSeries>(Z);
    auto Zs = std::make_shared<MatrixSeries>(shift(Z, c.omega()));
    const double period = kTwoPi * ((Z.doubled() || c.doubled) ? 2.0 : 1.0);
    // Invertibility on a probe grid.
    for (std::size_t g = 0; g < probe_grid; ++g) {
        std::vector<double> th(c.dim(), period * static_cast<double>(g) / static_cast<double>(probe_grid));
        double det = std::abs(eval(*Zp, th).determinant());
        if (!(det > 1e-12)) fail(ErrorKind::SingularConjugator, "conjugator not invertible on the probe grid");
    }
    QpCocycle out;
    out.alpha = c.alpha;
    out.doubled = Z.doubled() || c.doubled;
    auto base = std::make_shared<QpCocycle>(c);
    out.map = [base, Zp, Zs](const std::vector<double>& th) {
        RMat2 z = eval(*Zp, th).real();
        RMat2 zs = eval(*Zs, th).real();
        return RMat2(zs.inverse() * (*base)(th) * z);
    };
    return out;
}

double conjugation_residual(const QpCocycle& c, const MatrixSeries& Z,
                            const std::function<RMat2(const std::vector<double>&)>& target,
                            std::size_t grid_per_axis) {
    MatrixSeries Zs = shift(Z, c.omega());
    const double period = kTwoPi * (Z.doubled() ? 2.0 : 1.0);
    const std::size_t d = c.dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= grid_per_axis;
    std::vector<double> worst(total, 0.0);
    parallel_for(total, [&](std::size_t g) {
        std::vector<double> th(d);
        std::size_t rem = g;
        for (std::size_t i = d; i-- > 0;) {
            th[i] = period * static_cast<double>(rem % grid_per_axis) / static_cast<double>(grid_per_axis);
            rem /= grid_per_axis;
        }
        RMat2 z = eval(Z, th).real();
        RMat2 zs = eval(Zs, th).real();
        RMat2 lhs = zs.inverse() * c(th) * z;
        worst[g] = (lhs - target(th)).cwiseAbs().maxCoeff();
    });
    return *std::max_element(worst.begin(), worst.end());
}

} // namespace qpsl
