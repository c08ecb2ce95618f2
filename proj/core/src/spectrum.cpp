#include "qpsl/spectrum.hpp"

#include "qpsl/errors.hpp"
#include "qpsl/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace qpsl {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

double finite_ids(const Potential& V, const std::vector<double>& alpha, const std::vector<double>& theta, int N,
                  double E) {
    if (N < 1) fail(ErrorKind::InvalidArgument, "finite_ids: N must be positive");
    if (theta.size() != alpha.size() || V.dim != alpha.size())
        fail(ErrorKind::DomainMismatch, "finite_ids: dimension mismatch");
    const std::size_t d = alpha.size();
    std::vector<double> th(d);
    // Sturm sequence of T − E: the number of negative pivots equals #{eigenvalues < E}.
    long long below = 0;
    double q = 1.0;
    for (int n = -N; n <= N; ++n) {
        for (std::size_t i = 0; i < d; ++i) th[i] = theta[i] + kTwoPi * static_cast<double>(n) * alpha[i];
        const double diag = V(th) - E;
        q = (n == -N) ? diag : diag - 1.0 / q;
        if (q == 0.0) q = -1e-300;  // E exactly an eigenvalue: count it as ≤ E
        if (q < 0.0) ++below;
    }
    return static_cast<double>(below) / static_cast<double>(2 * N + 1);
}

double finite_ids_averaged(const Potential& V, const std::vector<double>& alpha, int N, int phases, double E) {
    if (phases < 1) fail(ErrorKind::InvalidArgument, "phases must be positive");
    double sum = 0.0;
    for (int p = 0; p < phases; ++p) {
        std::vector<double> th(alpha.size(), kTwoPi * static_cast<double>(p) / static_cast<double>(phases));
        sum += finite_ids(V, alpha, th, N, E);
    }
    return sum / static_cast<double>(phases);
}

IdsCurve ids_curve(const Potential& V, const std::vector<double>& alpha, const std::vector<double>& grid, int N,
                   int phases) {
    IdsCurve c;
    c.energies = grid;
    c.N = N;
    c.phases = phases;
    c.values.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { c.values[i] = finite_ids_averaged(V, alpha, N, phases, grid[i]); });
    return c;
}

double schrodinger_rho(const Potential& V, const std::vector<double>& alpha, double E, long long iters, int samples) {
    RotationOptions ro;
    ro.iters = iters;
    ro.phase_samples = samples;
    const double r = rotation_number(schrodinger_cocycle(V, alpha, E), ro).rho_lift;
    return std::clamp(r, 0.0, 0.5);
}

RotationCurve rotation_curve(const Potential& V, const std::vector<double>& alpha, const std::vector<double>& grid,
                             long long iters, int samples) {
    if (!std::is_sorted(grid.begin(), grid.end())) fail(ErrorKind::InvalidArgument, "energy grid must be sorted");
    RotationCurve c;
    c.energies = grid;
    c.iters = iters;
    c.samples = samples;
    c.rho.resize(grid.size());
    // Parallelism lives inside rotation_number (over phase samples).
    for (std::size_t i = 0; i < grid.size(); ++i) c.rho[i] = schrodinger_rho(V, alpha, grid[i], iters, samples);
    for (std::size_t i = 1; i < grid.size(); ++i) c.max_increase = std::max(c.max_increase, c.rho[i] - c.rho[i - 1]);
    c.monotone = c.max_increase <= 1e-4;
    return c;
}

double locked_rho(const IVec& n, const std::vector<double>& alpha) {
    const double x = dot(n, alpha);
    const double f = x - std::floor(x);
    return 0.5 * f;
}

namespace {

// Boundary between {pred true} at a and {pred false} at b.
template <class Pred>
double bisect(double a, double b, double tol, Pred pred) {
    for (int it = 0; it < 200 && std::abs(b - a) > tol; ++it) {
        const double m = 0.5 * (a + b);
        (pred(m) ? a : b) = m;
    }
    return 0.5 * (a + b);
}

GapRecord make_record(const IVec& label, double rho_n, double lo, double hi) {
    GapRecord g;
    g.label = label;
    g.rho_locked = rho_n;
    g.e_minus = lo;
    g.e_plus = hi;
    g.length = hi - lo;
    return g;
}

} // namespace

std::vector<GapRecord> detect_gaps(const RotationCurve& curve, const Potential& V, const std::vector<double>& alpha,
                                   const std::vector<IVec>& labels, const GapScanOptions& opt) {
    std::vector<GapRecord> out;
    const std::size_t n = curve.energies.size();
    auto locked = [&](double E, double rho_n) {
        return std::abs(schrodinger_rho(V, alpha, E, opt.iters, opt.samples) - rho_n) < opt.tol;
    };
    for (const auto& label : labels) {
        if (sup_norm(label) == 0) continue;
        const double rho_n = locked_rho(label, alpha);
        std::size_t i = 0;
        while (i < n) {
            if (std::abs(curve.rho[i] - rho_n) >= opt.tol) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < n && std::abs(curve.rho[j + 1] - rho_n) < opt.tol) ++j;
            const bool interior = i > 0 && j + 1 < n;
            if (interior && static_cast<int>(j - i + 1) >= opt.min_plateau) {
                const double lo = bisect(curve.energies[i], curve.energies[i - 1], opt.edge_tol,
                                         [&](double E) { return locked(E, rho_n); });
                const double hi = bisect(curve.energies[j], curve.energies[j + 1], opt.edge_tol,
                                         [&](double E) { return locked(E, rho_n); });
                out.push_back(make_record(label, rho_n, lo, hi));
            }
            i = j + 1;
        }
    }
    std::sort(out.begin(), out.end(), [](const GapRecord& a, const GapRecord& b) { return a.e_minus < b.e_minus; });
    return out;
}

std::optional<GapRecord> locate_gap(const Potential& V, const std::vector<double>& alpha, const IVec& label,
                                    double lo, double hi, const GapScanOptions& opt) {
    if (sup_norm(label) == 0) return std::nullopt;
    const double rho_n = locked_rho(label, alpha);
    auto diff = [&](double E) { return schrodinger_rho(V, alpha, E, opt.iters, opt.samples) - rho_n; };
    // ρ is nonincreasing in E: diff > tol means E lies below the gap.
    double a = lo, b = hi, inside = 0.0;
    bool found = false;
    for (int it = 0; it < 200 && b - a > opt.edge_tol; ++it) {
        const double m = 0.5 * (a + b);
        const double f = diff(m);
        if (std::abs(f) < opt.tol) {
            inside = m;
            found = true;
            break;
        }
        (f > 0 ? a : b) = m;
    }
    if (!found) return std::nullopt;
    auto locked = [&](double E) { return std::abs(diff(E)) < opt.tol; };
    const double e_lo = bisect(inside, a, opt.edge_tol, locked);
    const double e_hi = bisect(inside, b, opt.edge_tol, locked);
    return make_record(label, rho_n, e_lo, e_hi);
}

IdsEdges ids_gap_edges(const Potential& V, const std::vector<double>& alpha, const IVec& label, int N, int phases,
                       double lo, double hi, double edge_tol) {
    IdsEdges r;
    r.level = 1.0 - 2.0 * locked_rho(label, alpha);
    // Boundary eigenvalues of the truncation may sit inside the gap; each
    // shifts the averaged count by at most 1/(2N+1).
    const double tol = 2.5 / static_cast<double>(2 * N + 1);
    auto ids = [&](double E) { return finite_ids_averaged(V, alpha, N, phases, E); };
    double a = lo, b = hi, inside = 0.0;
    bool found = false;
    for (int it = 0; it < 200 && b - a > edge_tol; ++it) {
        const double m = 0.5 * (a + b);
        const double v = ids(m) - r.level;
        if (std::abs(v) <= tol) {
            inside = m;
            found = true;
            break;
        }
        (v < 0 ? a : b) = m;
    }
    if (!found) return r;
    auto on_plateau = [&](double E) { return std::abs(ids(E) - r.level) <= tol; };
    r.e_minus = bisect(inside, a, edge_tol, on_plateau);
    r.e_plus = bisect(inside, b, edge_tol, on_plateau);
    r.found = r.e_plus > r.e_minus;
    return r;
}

GapBoundsReport gap_bounds_check(const GapRecord& g, double k, double tau, bool strict) {
    GapBoundsReport r;
    r.label_norm = static_cast<double>(sup_norm(g.label));
    r.lower = -11.0 * k / 10.0 - 6.0 * tau;
    r.upper = -9.0 * k / 10.0 + 56.0 * tau;
    r.window_nonempty = r.lower <= r.upper;
    if (r.label_norm > 1.0 && g.length > 0.0) {
        r.ratio = std::log(g.length) / std::log(r.label_norm);
        r.inside = r.ratio >= r.lower && r.ratio <= r.upper;
    }
    r.strict_asserted = strict;
    return r;
}

} // namespace qpsl
