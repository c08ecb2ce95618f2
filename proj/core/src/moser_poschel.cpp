#include "qpsl/moser_poschel.hpp"

#include "qpsl/errors.hpp"
#include "qpsl/spectrum.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpsl {

namespace {

// [F G] = Σ_m F̂(m) Ĝ(−m).
double average_product(const ScalarSeries& F, const ScalarSeries& G) {
    cplx s(0.0, 0.0);
    for (const auto& [m, c] : F.coeffs()) s += c * G.at(-m);
    return s.real();
}

ScalarSeries product(const ScalarSeries& F, const ScalarSeries& G) { return multiply(F, G); }

bool is_constant(const MatrixSeries& B) {
    for (const auto& [m, c] : B.coeffs())
        if (sup_norm(m) != 0 && value_norm(c) > 0.0) return false;
    return true;
}

} // namespace

EdgeData make_edge_data(const MatrixSeries& B, double zeta, int sign, double k0, double tau, double k_hat) {
    EdgeData e;
    e.B = B;
    e.zeta = zeta;
    e.sign = sign;
    const ScalarSeries b11 = entry(B, 0, 0), b12 = entry(B, 0, 1);
    e.A11 = average_product(b11, b11);
    e.A12 = average_product(b11, b12);
    e.A22 = average_product(b12, b12);
    e.k0 = k0;
    const double d = static_cast<double>(B.dim());
    e.k_hat = k_hat >= 0 ? k_hat : k0 - std::ceil(3.0 * tau) - d - 1.0;
    const double q = k0 - e.k_hat - 3.0 * tau - d + 1.0;
    e.D_tau = q > 1.0 ? 8.0 * std::pow(2.0 * M_PI, -q) * boost::math::zeta(q)
                      : std::numeric_limits<double>::infinity();
    e.B_norm_k0 = ck_norm_estimate(B, k0);
    return e;
}

MatrixSeries perturbation_matrix(const MatrixSeries& B, double zeta) {
    const ScalarSeries b11 = entry(B, 0, 0), b12 = entry(B, 0, 1);
    const ScalarSeries s11 = product(b11, b11), s12 = product(b11, b12), s22 = product(b12, b12);
    MatrixSeries P = from_entries(s12 - scale(s11, zeta), s22 - scale(s12, zeta), scale(s11, -1.0), scale(s12, -1.0));
    P.set_kind(ValueKind::Matrix);
    return P;
}

RMat2 averaged_matrix(const EdgeData& e) {
    RMat2 c;
    c << e.A12 - 0.5 * e.zeta * e.A11, -e.zeta * e.A12 + e.A22, -e.A11, -e.A12 + 0.5 * e.zeta * e.A11;
    return c;
}

double discriminant(const EdgeData& e, double delta) {
    return -delta * e.A11 * e.zeta + delta * delta * e.gram_det();
}

PolyBoundsReport poly_bounds_check(const EdgeData& e, double kappa) {
    if (!(kappa > 0.0 && kappa < 0.25)) fail(ErrorKind::InvalidArgument, "kappa must lie in (0, 1/4)");
    PolyBoundsReport r;
    r.kappa = kappa;
    r.B_norm = e.B_norm_k0;
    const double z = std::abs(e.zeta);
    r.precondition = z > 0.0 && r.B_norm * std::pow(z, kappa / 2.0) <= 0.25;
    if (!r.precondition) r.notes.push_back("precondition ‖B‖ζ^{κ/2} ≤ 1/4 not met");
    r.det = e.gram_det();
    r.degenerate = r.det == 0.0;
    r.ratio_bound = 0.5 * std::pow(z, -kappa);
    r.det_bound = 8.0 * std::pow(z, 2.0 * kappa);
    r.a11_bound = std::pow(2.0 * r.B_norm, -2.0);
    r.a11_ok = e.A11 >= r.a11_bound;
    if (r.degenerate) {
        r.notes.push_back("degenerate averages: A11·A22 − A12² = 0");
        r.ratio = std::numeric_limits<double>::infinity();
    } else {
        r.ratio = e.A11 / r.det;
        r.ratio_ok = r.ratio > 0.0 && r.ratio <= r.ratio_bound;
    }
    r.det_ok = r.det >= r.det_bound;
    return r;
}

std::pair<double, double> bracket_scales(double zeta) {
    const double z = std::abs(zeta);
    return {std::pow(z, 1.1), std::pow(z, 0.9)};
}

ProbeResult probe_gap_edge(const EdgeData& e, const Potential& V, const std::vector<double>& alpha, double E_edge,
                           double rho_locked, double delta, const ProbeOptions& opt) {
    if (!(delta >= 0.0)) fail(ErrorKind::InvalidArgument, "probe delta must be nonnegative");
    ProbeResult r;
    r.delta = delta;
    // S_{E−σ} is conjugated to sign·(C − σP); σ = sgn(ζ)δ points into the gap.
    const double dir = e.zeta >= 0 ? 1.0 : -1.0;
    const double sigma = dir * delta;
    r.d_delta = discriminant(e, sigma);
    r.energy = E_edge - sigma;
    const MatrixSeries P = perturbation_matrix(e.B, e.zeta);
    RMat2 C;
    C << 1.0, e.zeta, 0.0, 1.0;

    if (is_constant(e.B)) {
        const RMat2 K = C - sigma * RMat2(P.mean().real());
        const UhResult u = uh_test(constant_cocycle(alpha, K), 1, 1);
        r.verdict = u.verdict;
        r.margin = u.margin;
        return r;
    }

    const QpCocycle S = schrodinger_cocycle(V, alpha, r.energy);
    const double s = static_cast<double>(e.sign);
    r.residual = conjugation_residual(
        S, e.B, [&](const std::vector<double>& th) { return RMat2(s * (C - sigma * RMat2(eval(P, th).real()))); },
        opt.residual_grid);

    const double rho = schrodinger_rho(V, alpha, r.energy, opt.rotation_iters, opt.rotation_samples);
    r.rotation_shift = rho - rho_locked;
    const double tol = opt.rotation_tol > 0 ? opt.rotation_tol : 8.0 / static_cast<double>(opt.rotation_iters);
    if (std::abs(r.rotation_shift) > tol) {
        r.verdict = Verdict::NotHyperbolic;
        return r;
    }
    r.lyapunov = lyapunov_exponent(S, opt.rotation_iters, opt.rotation_samples);
    const double want = r.lyapunov > 0 ? 12.0 / r.lyapunov : static_cast<double>(opt.max_horizon);
    r.horizon = static_cast<long long>(std::min(static_cast<double>(opt.max_horizon), std::ceil(want)));
    const UhResult u = uh_test(S, r.horizon, opt.uh_grid);
    r.verdict = u.verdict;
    r.margin = u.margin;
    return r;
}

BracketResult bracket_gap(const EdgeData& e, const Potential& V, const std::vector<double>& alpha, double E_edge,
                          double rho_locked, const ProbeOptions& opt) {
    BracketResult b;
    if (e.zeta == 0.0) fail(ErrorKind::InvalidArgument, "bracket_gap requires ζ ≠ 0");
    std::tie(b.lower, b.upper) = bracket_scales(e.zeta);
    b.degenerate = !(std::abs(e.zeta) < 1.0);
    b.lower_probe = probe_gap_edge(e, V, alpha, E_edge, rho_locked, b.lower, opt);
    b.upper_probe = probe_gap_edge(e, V, alpha, E_edge, rho_locked, b.upper, opt);
    b.consistent = !b.degenerate && b.lower_probe.verdict == Verdict::Hyperbolic &&
                   b.upper_probe.verdict == Verdict::NotHyperbolic;
    return b;
}

} // namespace qpsl
