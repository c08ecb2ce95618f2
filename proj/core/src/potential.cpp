#include "qpsl/potential.hpp"

#include "qpsl/errors.hpp"

#include <cmath>

namespace qpsl {

double Potential::operator()(const std::vector<double>& theta) const {
    double v = 0.0;
    for (std::size_t j = 0; j < labels.size(); ++j) v += coeffs[j] * std::cos(dot(labels[j], theta));
    return v;
}

double Potential::sup_bound() const {
    double s = 0.0;
    for (double c : coeffs) s += std::abs(c);
    return s;
}

bool Potential::coefficient_bound_holds() const {
    for (std::size_t j = 0; j < labels.size(); ++j) {
        double n = static_cast<double>(sup_norm(labels[j]));
        if (std::abs(coeffs[j]) > c_bound * std::pow(n, -k_exponent) * (1.0 + 1e-12)) return false;
    }
    return true;
}

Potential build_potential(const LabelSet& labels, double k, const std::function<double(const IVec&)>& rule,
                          double c_bound) {
    if (labels.entries.empty()) fail(ErrorKind::InvalidArgument, "build_potential: empty label set");
    if (!(k > 0)) fail(ErrorKind::InvalidArgument, "build_potential: k must be positive");
    Potential P;
    P.dim = labels.d;
    P.k_exponent = k;
    P.c_bound = c_bound;
    for (const auto& e : labels.entries) {
        double n = static_cast<double>(sup_norm(e.label));
        double c = rule ? rule(e.label) : std::pow(n, -k);
        P.labels.push_back(e.label);
        P.coeffs.push_back(c);
    }
    if (!P.coefficient_bound_holds())
        fail(ErrorKind::InvalidArgument, "coefficient rule violates |c_n| <= c|n|^{-k}");
    return P;
}

Potential single_label_potential(const IVec& label, double coeff, double k) {
    Potential P;
    P.dim = label.size();
    P.labels = {label};
    P.coeffs = {coeff};
    P.k_exponent = k;
    P.c_bound = std::abs(coeff) * std::pow(static_cast<double>(sup_norm(label)), k);
    return P;
}

Potential amo_potential(double lambda) { return single_label_potential(IVec{1}, 2.0 * lambda, 0.0); }

ScalarSeries potential_series(const Potential& P, double truncation) {
    ScalarSeries V(P.dim, false, ValueKind::Scalar);
    for (std::size_t j = 0; j < P.labels.size(); ++j) {
        if (static_cast<double>(sup_norm(P.labels[j])) > truncation) continue;
        V.add(P.labels[j], cplx(P.coeffs[j] / 2.0, 0.0));
        V.add(-P.labels[j], cplx(P.coeffs[j] / 2.0, 0.0));
    }
    return V;
}

} // namespace qpsl
