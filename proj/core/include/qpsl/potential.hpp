#pragma once

#include "qpsl/fourier.hpp"
#include "qpsl/label_set.hpp"

#include <functional>
#include <vector>

namespace qpsl {

// V(θ) = Σ_j c_j cos⟨n_j, θ⟩.
struct Potential {
    std::size_t dim = 1;
    std::vector<IVec> labels;
    std::vector<double> coeffs;
    double k_exponent = 0.0;
    double c_bound = 1.0;  // declared c in |c_n| ≤ c|n|^{−k}

    double operator()(const std::vector<double>& theta) const;
    double sup_bound() const;  // Σ|c_j|
    bool coefficient_bound_holds() const;
};

// Default rule c_n = |n|^{−k}; an optional rule must respect |c_n| ≤ c|n|^{−k}.
Potential build_potential(const LabelSet& labels, double k,
                          const std::function<double(const IVec&)>& rule = {}, double c_bound = 1.0);
Potential single_label_potential(const IVec& label, double coeff, double k = 0.0);
// Almost Mathieu: V = 2λ cos θ on 𝕋^1.
Potential amo_potential(double lambda);

// V̂(±n_j) = c_j/2, truncated at |n| ≤ truncation.
ScalarSeries potential_series(const Potential& P, double truncation = 1e300);

} // namespace qpsl
