#include "qpsl/kam.hpp"

#include "qpsl/errors.hpp"
#include "qpsl/sl2.hpp"
#include "pointwise.hpp"

#include <algorithm>
#include <cmath>

namespace qpsl {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::vector<double> omega_of(const std::vector<double>& alpha) {
    std::vector<double> w(alpha.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = kTwoPi * alpha[i];
    return w;
}

// M W̃ M^{-1} with W̃ = [[0,0],[1,0]]: the su(1,1) direction of the potential.
Mat2 potential_direction() {
    Mat2 W = Mat2::Zero();
    W(1, 0) = 1.0;
    return M_matrix() * W * M_inverse();
}

MatrixSeries term_series(std::size_t d, const IVec& label, double coeff) {
    MatrixSeries F(d, false, ValueKind::SU11);
    const Mat2 W = potential_direction();
    if (sup_norm(label) == 0) {
        F.add(label, coeff * W);
    } else {
        F.add(label, 0.5 * coeff * W);
        F.add(-label, 0.5 * coeff * W);
    }
    return F;
}

MatrixSeries align(const MatrixSeries& F, bool doubled) {
    return (doubled && !F.doubled()) ? F.promoted() : F;
}

// Rotation of ±A with the PSL sign removed (turns, signed).
double psl_rotation(const Mat2& A) {
    const Mat2 S = A(0, 0).real() < 0 ? Mat2(-A) : A;
    if (std::abs(S(0, 0).real()) >= 1.0) return 0.0;
    return su11_rotation(S);
}

double rotation_or_zero(const Mat2& A) {
    if (std::abs(A(0, 0).real()) >= 1.0) return A(0, 0).real() > 0 ? 0.0 : 0.5;
    return su11_rotation(A);
}

} // namespace

void KamParams::validate() const {
    if (!(newton_tol > 0 && conj_residual_tol > 0 && stop_tol > 0 && divisor_floor > 0))
        fail(ErrorKind::InvalidArgument, "KAM tolerances must be positive");
    if (!(gamma > 0 && tau > 0)) fail(ErrorKind::InvalidArgument, "gamma and tau must be positive");
    if (!(max_degree >= 1)) fail(ErrorKind::InvalidArgument, "max_degree must be at least 1");
    if (!schedule && !(resonance_window > 0 && resonance_threshold > 0 && resonance_threshold < 1))
        fail(ErrorKind::InvalidArgument, "resonance window/threshold required without a schedule");
}

double KamParams::window(int j) const {
    if (resonance_window > 0 || !schedule) return resonance_window;
    return 2.0 * schedule->level(static_cast<std::size_t>(j + 1));
}

double KamParams::removal(int j) const {
    const double r = removal_window > 0 ? removal_window : max_degree;
    return std::max(r, std::min(window(j), max_degree));
}

double KamParams::threshold(int j) const {
    if (resonance_threshold > 0 || !schedule) return resonance_threshold;
    return std::exp(-4.0 * tau * schedule->log_level(static_cast<std::size_t>(j)));
}

double KamParams::strip(int j) const {
    if (!schedule) return strip_width;
    const double L = schedule->log_level(static_cast<std::size_t>(j));
    return 10.0 * tau * L * std::exp(-L);
}

const char* to_string(StepCase c) {
    switch (c) {
    case StepCase::Identity: return "identity";
    case StepCase::NonResonant: return "NR";
    case StepCase::Resonant: return "RS";
    }
    return "identity";
}

Diagnostics compute_diagnostics(const MatrixSeries& W, const IVec& n_tilde, double h) {
    Diagnostics D;
    ScalarSeries u = scale(entry(W, 0, 0), cplx(0.0, -1.0));
    ScalarSeries w = entry(W, 0, 1);
    D.xi = std::abs(w.mean());
    D.big_m = analytic_norm(w, h) + analytic_norm(u, h);
    const double floor_n = n_tilde.empty() ? 0.0 : static_cast<double>(sup_norm(n_tilde));
    auto consider = [&](const IVec& m) {
        if (W.freq_norm(m) < floor_n) return;
        D.small_m = std::max(D.small_m, 0.5 * (std::abs(w.at(m)) + std::abs(u.at(m))));
    };
    for (const auto& [m, c] : W.coeffs()) consider(m);
    return D;
}

KamState make_state(const Mat2& A, const MatrixSeries& f, const std::vector<double>& alpha) {
    if (f.dim() != alpha.size()) fail(ErrorKind::DomainMismatch, "perturbation/frequency dimension mismatch");
    KamState s;
    s.A = A;
    s.f = f;
    s.alpha = alpha;
    s.B = constant_series(f.dim(), Mat2::Identity(), f.doubled());
    s.n_tilde = zero_vec(f.dim());
    s.sigma = value_norm(A);
    return s;
}

KamState initial_state(const Potential& V, const std::vector<double>& alpha, double E, bool inject_all,
                       double max_degree) {
    if (V.dim != alpha.size()) fail(ErrorKind::DomainMismatch, "potential/frequency dimension mismatch");
    RMat2 S0;
    S0 << E, -1.0, 1.0, 0.0;
    MatrixSeries f(V.dim, false, ValueKind::SU11);
    std::vector<PendingTerm> pending;
    for (std::size_t i = 0; i < V.labels.size(); ++i) {
        if (inject_all) {
            if (static_cast<double>(sup_norm(V.labels[i])) > max_degree)
                fail(ErrorKind::DegreeOverflow, "label " + to_string(V.labels[i]) + " exceeds max_degree");
            f = f + term_series(V.dim, V.labels[i], V.coeffs[i]);
        } else {
            pending.push_back({V.labels[i], V.coeffs[i]});
        }
    }
    KamState s = make_state(to_su11(S0), f, alpha);
    s.pending = pending;
    return s;
}

std::pair<KamState, StepReport> kam_step(const KamState& state, const KamParams& params) {
    params.validate();
    const std::size_t d = state.alpha.size();
    const int j = state.step;
    const double N = params.window(j);
    const double thr = params.threshold(j);
    const double h = params.strip(j);
    const double Nr = params.removal(j);
    const auto omega = omega_of(state.alpha);

    KamState next = state;
    next.step = j + 1;
    StepReport rep;
    rep.step = j;
    rep.rho_before = rotation_or_zero(state.A);

    // Inject pending potential terms whose label entered the window:
    // A_j e^{f_j} B e^{F_l} B^{-1} = A_j e^{f_j} e^{Ad_B F_l}.
    MatrixSeries F = state.f;
    {
        std::vector<PendingTerm> keep;
        MatrixSeries add(d, false, ValueKind::SU11);
        for (const auto& t : state.pending) {
            if (static_cast<double>(sup_norm(t.label)) <= N)
                add = add + term_series(d, t.label, t.coeff);
            else
                keep.push_back(t);
        }
        next.pending = keep;
        if (!add.empty()) {
            const bool dbl = F.doubled() || state.B.doubled();
            const auto grid = detail::grid_for(d, params.max_degree, dbl, params.oversample);
            auto Bv = grid.values(align(state.B, dbl));
            auto Fl = grid.values(align(add, dbl));
            auto eF = detail::exp_values(grid.values(align(F, dbl)));
            std::vector<Mat2> G(grid.size());
            for (std::size_t i = 0; i < G.size(); ++i)
                G[i] = eF[i] * exp_traceless(Bv[i] * Fl[i] * detail::adjugate(Bv[i]));
            F = symmetrize_su11(grid.coefficients(detail::log_values(G, "kam_step injection"), params.max_degree, 0.0,
                                                  &rep.dropped, ValueKind::SU11));
            rep.notes.push_back("injected " + std::to_string(state.pending.size() - keep.size()) + " potential term(s)");
        }
    }
    rep.norm_before = analytic_norm(F, h);

    if (F.empty() || analytic_norm(F, 0.0) == 0.0) {
        rep.kind = StepCase::Identity;
        rep.rho_after = psl_rotation(state.A);
        rep.b_next = state.A(0, 1);
        next.f = F;
        return {next, rep};
    }

    NewtonOptions nopt;
    nopt.max_degree = params.max_degree;
    nopt.tol = params.newton_tol;
    nopt.max_iter = params.newton_max_iter;
    nopt.floor = params.divisor_floor;
    nopt.oversample = params.oversample;
    nopt.check_points = params.check_points;

    const ResonanceResult res = classify_resonance(state.A, state.alpha, N, thr);
    rep.resonance_distance = res.distance;
    rep.resonance_unique = res.unique;
    if (!res.unique) rep.notes.push_back("resonant site not unique: " + std::to_string(res.count_below) + " sites");

    MatrixSeries Bj;       // step conjugation
    Mat2 A_next;
    MatrixSeries f_next;
    bool dbl = F.doubled();

    if (!res.resonant) {
        rep.kind = StepCase::NonResonant;
        rep.diag = compute_diagnostics(F, state.n_tilde, h);
        NewtonResult nr = remove_nonresonant(state.A, F, state.alpha, nonresonant_mask(Nr, dbl), nopt);
        rep.newton_iterations = nr.iterations;
        rep.dropped += nr.dropped;
        const Mat2 mean = nr.F_star.mean();
        A_next = state.A * exp_traceless(mean);
        const auto grid = detail::grid_for(d, params.max_degree, dbl, params.oversample);
        auto eF = detail::exp_values(grid.values(nr.F_star));
        const Mat2 em = exp_traceless(-mean);
        for (auto& v : eF) v = em * v;
        f_next = symmetrize_su11(grid.coefficients(detail::log_values(eF, "kam_step split"), params.max_degree, 0.0,
                                                   &rep.dropped, ValueKind::SU11));
        Bj = nr.B;
    } else {
        rep.kind = StepCase::Resonant;
        rep.site = res.site;
        const double rho = su11_rotation(state.A);
        const Diagonalization D = diagonalize_su11(state.A, rho);
        const Mat2 Pinv = detail::adjugate(D.P);
        Mat2 Dm = D.P * state.A * Pinv;
        Dm(0, 1) = Dm(1, 0) = 0.0;
        const MatrixSeries G = conjugate_const(D.P, F);
        rep.diag = compute_diagnostics(G, state.n_tilde, h);
        // Resonant residual: diagonal mean, upper entry at n*, lower entry at −n*.
        const double p = dbl ? 2.0 : 1.0;
        const IVec kstar = scaled(res.site, dbl ? 2 : 1);
        ModeMask mask = [Nr, p, kstar](const IVec& key, Component c) {
            const double f = static_cast<double>(sup_norm(key)) / p;
            if (f > Nr) return false;
            switch (c) {
            case Component::Diagonal: return f > 0.0;
            case Component::Upper: return key != kstar;
            case Component::Lower: return key != -kstar;
            }
            return false;
        };
        NewtonResult nr = remove_nonresonant(Dm, G, state.alpha, mask, nopt);
        rep.newton_iterations = nr.iterations;
        rep.dropped += nr.dropped;

        // Rotation Q(θ) = diag(e^{−i⟨n*,θ⟩/2}, e^{i⟨n*,θ⟩/2}) on 2𝕋^d.
        dbl = true;
        const IVec& ns = res.site;
        MatrixSeries Gd = align(nr.F_star, true);
        MatrixSeries Gr(d, true, ValueKind::SU11);
        for (const auto& [m, c] : Gd.coeffs()) {
            Mat2 dg = Mat2::Zero();
            dg(0, 0) = c(0, 0);
            dg(1, 1) = c(1, 1);
            Gr.add(m, dg);
            Mat2 up = Mat2::Zero(), lo = Mat2::Zero();
            up(0, 1) = c(0, 1);
            lo(1, 0) = c(1, 0);
            Gr.add(m - scaled(ns, 2), up);
            Gr.add(m + scaled(ns, 2), lo);
        }
        Gr = truncate(Gr, params.max_degree);
        const double half = 0.5 * dot(ns, omega);
        Mat2 At = Mat2::Zero();
        At(0, 0) = Dm(0, 0) * cplx(std::cos(half), -std::sin(half));
        At(1, 1) = Dm(1, 1) * cplx(std::cos(half), std::sin(half));
        const Mat2 Ct = Gr.mean();
        A_next = At * exp_traceless(Ct);
        const auto grid = detail::grid_for(d, params.max_degree, true, params.oversample);
        auto eG = detail::exp_values(grid.values(Gr));
        const Mat2 em = exp_traceless(-Ct);
        for (auto& v : eG) v = em * v;
        f_next = symmetrize_su11(grid.coefficients(detail::log_values(eG, "kam_step rotation"), params.max_degree, 0.0,
                                                   &rep.dropped, ValueKind::SU11));
        MatrixSeries Q(d, true, ValueKind::SU11);
        Mat2 q1 = Mat2::Zero(), q2 = Mat2::Zero();
        q1(0, 0) = 1.0;
        q2(1, 1) = 1.0;
        Q.add(-ns, q1);
        Q.add(ns, q2);
        auto Qv = grid.values(Q);
        auto B1 = grid.values(align(nr.B, true));
        for (std::size_t i = 0; i < B1.size(); ++i) B1[i] = Qv[i] * B1[i] * D.P;
        Bj = grid.coefficients(B1, params.max_degree, 0.0, &rep.dropped, ValueKind::SU11);
        next.n_tilde = state.n_tilde + ns;
        if (!D.bound_holds) rep.notes.push_back("diagonalizer norm above 2(1+2/|2πρ|)");
    }

    // Verified step identity B_j(θ+ω) A_j e^{F̃(θ)} B_j(θ)^{-1} = A_{j+1} e^{f_{j+1}(θ)}.
    {
        const MatrixSeries Bs = shift(Bj, omega);
        const MatrixSeries Bi = detail::adjugate(Bj);
        const MatrixSeries Fa = align(F, Bj.doubled());
        for (const auto& th : detail::probe_points(d, params.check_points, Bj.doubled())) {
            Mat2 lhs = eval(Bs, th) * state.A * exp_traceless(eval(Fa, th)) * eval(Bi, th);
            Mat2 rhs = A_next * exp_traceless(eval(align(f_next, Bj.doubled()), th));
            rep.conj_residual = std::max(rep.conj_residual, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    if (!(rep.conj_residual <= params.conj_residual_tol))
        fail(ErrorKind::StateInvalid, "step " + std::to_string(j) + " conjugacy residual " +
                                          std::to_string(rep.conj_residual) + " above tolerance");

    // Accumulate B^{(j+1)} = B_j B^{(j)}.
    {
        const bool acc_dbl = dbl || state.B.doubled() || Bj.doubled();
        const auto grid = detail::grid_for(d, params.max_degree, acc_dbl, params.oversample);
        auto a = grid.values(align(Bj, acc_dbl));
        auto b = grid.values(align(state.B, acc_dbl));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] * b[i];
        next.B = grid.coefficients(a, params.max_degree, 0.0, &rep.dropped, ValueKind::SU11);
    }
    next.A = A_next;
    next.f = f_next;
    next.dropped = state.dropped + rep.dropped;
    rep.norm_after = analytic_norm(f_next, h);
    rep.rho_after = psl_rotation(A_next);
    rep.b_next = A_next(0, 1);
    return {next, rep};
}

} // namespace qpsl
