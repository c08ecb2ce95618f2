#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpsl {

// Integer lattice vector n ∈ ℤ^d. |n| always means the sup-norm.
using IVec = std::vector<std::int64_t>;

std::int64_t sup_norm(const IVec& n);
IVec zero_vec(std::size_t d);
IVec unit_vec(std::size_t d, std::size_t i, std::int64_t sign = 1);
IVec operator+(const IVec& a, const IVec& b);
IVec operator-(const IVec& a, const IVec& b);
IVec operator-(const IVec& a);
IVec scaled(const IVec& a, std::int64_t s);

// ⟨n, x⟩ for a real vector x of the same dimension.
double dot(const IVec& n, const std::vector<double>& x);

std::string to_string(const IVec& n);

// Visit every n with |n| ≤ K (sup-norm), in row-major order starting at (−K,…,−K).
template <class F>
void for_each_in_box(std::size_t d, std::int64_t K, F&& f) {
    IVec n(d, -K);
    if (d == 0) {
        f(n);
        return;
    }
    while (true) {
        f(n);
        std::size_t i = d;
        while (i > 0) {
            --i;
            if (n[i] < K) {
                ++n[i];
                break;
            }
            n[i] = -K;
            if (i == 0) return;
        }
    }
}

} // namespace qpsl
