#include "qpsl/diophantine.hpp"
#include "qpsl/errors.hpp"
#include "qpsl/kam.hpp"
#include "qpsl/sl2.hpp"
#include "pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpsl {

namespace {

struct KamRun {
    KamState state;
    std::vector<StepReport> steps;
};

KamRun run_kam(const Potential& V, const std::vector<double>& alpha, double E, const ReducibilityParams& p) {
    KamRun run;
    run.state = initial_state(V, alpha, E, !p.kam.schedule.has_value(), p.kam.max_degree);
    for (int j = 0; j < p.max_steps; ++j) {
        if (run.state.pending.empty() && analytic_norm(run.state.f, 0.0) <= p.kam.stop_tol) return run;
        auto [next, rep] = kam_step(run.state, p.kam);
        run.state = std::move(next);
        run.steps.push_back(std::move(rep));
    }
    if (run.state.pending.empty() && analytic_norm(run.state.f, 0.0) <= p.kam.stop_tol) return run;
    fail(ErrorKind::NonConvergence, "KAM iteration did not converge within " + std::to_string(p.max_steps) +
                                        " steps (|f| = " + std::to_string(analytic_norm(run.state.f, 0.0)) + ")");
}

// |b|² − (Im a)² = (Re a)² − 1 computed without cancellation: > 0 hyperbolic, < 0 elliptic.
double parabolic_defect(const Mat2& A) {
    return std::norm(A(0, 1)) - A(0, 0).imag() * A(0, 0).imag();
}

} // namespace

ReducibilityResult run_reducibility(const Potential& V, const std::vector<double>& alpha, double E,
                                    const std::optional<IVec>& label, const ReducibilityParams& params) {
    params.kam.validate();
    if (V.dim != alpha.size()) fail(ErrorKind::DomainMismatch, "potential/frequency dimension mismatch");
    const std::size_t d = alpha.size();
    ReducibilityResult out;
    out.energy_initial = E;

    // Lock check: 2ρ(E) ≡ ⟨n,α⟩ (mod 1).
    {
        RotationOptions ro;
        ro.iters = params.lock_iters;
        ro.phase_samples = 2;
        const double rho = rotation_number(schrodinger_cocycle(V, alpha, E), ro).rho;
        double best = std::numeric_limits<double>::infinity();
        IVec best_n;
        auto consider = [&](const IVec& n) {
            double dist = dist_to_integers(2.0 * rho - dot(n, alpha));
            if (dist < best) {
                best = dist;
                best_n = n;
            }
        };
        if (label) {
            if (label->size() != d) fail(ErrorKind::DomainMismatch, "label dimension mismatch");
            consider(*label);
            consider(-*label);
        } else {
            for_each_in_box(d, static_cast<std::int64_t>(std::floor(params.kam.window(0))), consider);
        }
        out.lock_label = best_n;
        out.lock_distance = best;
        if (!(best <= params.lock_tol))
            fail(ErrorKind::TargetNotLocked, "2ρ(E) is " + std::to_string(best) + " away from the locked value");
    }

    // KAM run with secant refinement of E onto the parabolic point of A_∞.
    KamRun run = run_kam(V, alpha, E, params);
    double g = parabolic_defect(run.state.A);
    if (params.refine_energy && std::abs(g) > params.parabolic_tol) {
        double E0 = E, g0 = g;
        double E1 = E + 1e-9 * std::max(1.0, std::abs(E));
        KamRun r1 = run_kam(V, alpha, E1, params);
        double g1 = parabolic_defect(r1.state.A);
        for (int it = 0; it < params.refine_max; ++it) {
            ++out.refinements;
            if (std::abs(g1) <= params.parabolic_tol || g1 == g0) break;
            const double E2 = E1 - g1 * (E1 - E0) / (g1 - g0);
            if (!std::isfinite(E2) || std::abs(E2 - E) > 1e-2)
                fail(ErrorKind::NonConvergence, "edge refinement left the neighbourhood of the initial energy");
            if (std::abs(E2 - E1) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(E1))) {
                E0 = E1;
                g0 = g1;
                E1 = E2;
                r1 = run_kam(V, alpha, E1, params);
                g1 = parabolic_defect(r1.state.A);
                break;
            }
            E0 = E1;
            g0 = g1;
            E1 = E2;
            r1 = run_kam(V, alpha, E1, params);
            g1 = parabolic_defect(r1.state.A);
        }
        if (std::abs(g1) < std::abs(g)) {
            run = std::move(r1);
            g = g1;
            E = E1;
        }
    }
    out.energy = E;
    out.parabolic_defect = g;
    out.A_final = run.state.A;
    out.final_f_norm = analytic_norm(run.state.f, 0.0);
    out.steps = run.steps;
    out.dropped = run.state.dropped;

    // Parabolic normal form of ±A_∞.
    out.sign = run.state.A(0, 0).real() < 0 ? -1 : 1;
    const Mat2 As = static_cast<double>(out.sign) * run.state.A;
    const ParabolicForm pf = parabolic_normalize(As, params.parabolic_normalize_tol);
    out.zeta = pf.zeta;
    out.phi = pf.phi;

    // B = M^{-1} (B^∞)^{-1} M R_φ maps the SU(1,1) conjugation back to SL(2,ℝ).
    const Mat2 R = rotation(pf.phi).cast<cplx>();
    MatrixSeries Bc = left_mul(M_inverse(), right_mul(detail::adjugate(run.state.B), M_matrix() * R));
    Bc.set_kind(ValueKind::SL2R);
    out.B = symmetrize_real(Bc);

    // Conjugation residual against sign·[[1,ζ],[0,1]], including any failure of B to be real.
    RMat2 target;
    target << 1.0, out.zeta, 0.0, 1.0;
    target *= static_cast<double>(out.sign);
    const QpCocycle S = schrodinger_cocycle(V, alpha, E);
    out.conj_residual = conjugation_residual(S, out.B, [target](const std::vector<double>&) { return target; },
                                             params.residual_grid);
    double imag_defect = 0.0;
    for (const auto& th : detail::probe_points(d, 64, true))
        imag_defect = std::max(imag_defect, eval(Bc, th).imag().cwiseAbs().maxCoeff());
    out.conj_residual = std::max(out.conj_residual, imag_defect);

    // Estimates of the theorem: n^{−(k+5τ)} ≤ |ζ| ≤ n^{−(k−62τ)}, ‖B‖_{k0} ≤ n^{k0+36τ}.
    const double k = V.k_exponent, tau = params.kam.tau;
    out.k0 = params.k0 >= 0 ? params.k0 : std::max(0.0, std::floor(k - 90.0 * tau));
    out.B_norm_k0 = ck_norm_estimate(out.B, out.k0);
    const IVec& nJ = label ? *label : out.lock_label;
    const double n = static_cast<double>(sup_norm(nJ));
    out.window.label_norm = n;
    if (n >= 1.0) {
        out.window.lower = std::pow(n, -(k + 5.0 * tau));
        out.window.upper = std::pow(n, -(k - 62.0 * tau));
        out.window.holds = std::abs(out.zeta) >= out.window.lower && std::abs(out.zeta) <= out.window.upper;
        out.B_norm_bound = std::pow(n, out.k0 + 36.0 * tau);
    }
    return out;
}

} // namespace qpsl
