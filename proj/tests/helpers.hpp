#pragma once

#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "simtebd/linalg.hpp"

namespace simtebd::testing {

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cd(g(rng), g(rng));
    return m;
}

inline CVector random_state(Eigen::Index dim, unsigned seed) {
    CVector v = random_matrix(dim, 1, seed).col(0);
    return v / v.norm();
}

inline CMatrix random_hermitian(Eigen::Index n, unsigned seed) {
    CMatrix m = random_matrix(n, n, seed);
    return 0.5 * (m + m.adjoint());
}

/// |<a|b>| / (|a| |b|)
inline double fidelity(const CVector& a, const CVector& b) {
    return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

inline long dims_product(const std::vector<int>& dims, std::size_t first, std::size_t last) {
    long p = 1;
    for (std::size_t i = first; i < last; ++i) p *= dims[i];
    return p;
}

/// Brute-force application of a two-site map on sites (site, site + 1) of a
/// dense vector. out_dims are the physical dims of the two sites afterwards.
inline CVector dense_apply_two_site(const CVector& psi, const std::vector<int>& dims, int site,
                                    const CMatrix& map, int out_left, int out_right) {
    const long left = dims_product(dims, 0, site);
    const long right = dims_product(dims, site + 2, dims.size());
    const int p = dims[site];
    const int q = dims[site + 1];
    CVector out = CVector::Zero(left * out_left * out_right * right);
    for (long l = 0; l < left; ++l)
        for (long r = 0; r < right; ++r)
            for (int so = 0; so < out_left; ++so)
                for (int to = 0; to < out_right; ++to) {
                    cd acc = 0.0;
                    for (int s = 0; s < p; ++s)
                        for (int t = 0; t < q; ++t)
                            acc += map(so * out_right + to, s * q + t) *
                                   psi(((l * p + s) * q + t) * right + r);
                    out(((l * out_left + so) * out_right + to) * right + r) = acc;
                }
    return out;
}

inline CVector dense_apply_one_site(const CVector& psi, const std::vector<int>& dims, int site,
                                    const CMatrix& gate) {
    const long left = dims_product(dims, 0, site);
    const long right = dims_product(dims, site + 1, dims.size());
    const int p = dims[site];
    CVector out = CVector::Zero(psi.size());
    for (long l = 0; l < left; ++l)
        for (long r = 0; r < right; ++r)
            for (int so = 0; so < p; ++so)
                for (int s = 0; s < p; ++s)
                    out((l * p + so) * right + r) += gate(so, s) * psi((l * p + s) * right + r);
    return out;
}

}  // namespace simtebd::testing
