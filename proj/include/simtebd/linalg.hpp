#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace simtebd {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Singular-value cutoff. `threshold` is relative to the largest singular
/// value; values exactly at threshold * s_max are kept.
struct TruncationPolicy {
    double threshold{1e-5};
    std::optional<int> max_bond{};

    void validate() const;
};

struct SvdResult {
    CMatrix U;   // m x k, orthonormal columns
    RVector s;   // k, nonincreasing, strictly positive
    CMatrix V;   // n x k, orthonormal columns; M ~ U diag(s) V^dagger
    double discarded_weight{0.0};
};

SvdResult truncated_svd(const CMatrix& M, const TruncationPolicy& policy);

/// exp(M) by scaling and squaring with a Pade approximant.
CMatrix matrix_exponential(const CMatrix& M);

CMatrix kron(const CMatrix& A, const CMatrix& B);

struct HermitianEigen {
    RVector values;   // ascending
    CMatrix vectors;  // columns are eigenvectors
};

HermitianEigen eigendecompose_hermitian(const CMatrix& M, double tolerance = 1e-12);

// Helpers shared across modules.
bool all_finite(const CMatrix& M);
double hermiticity_residual(const CMatrix& M);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
CMatrix plus();   // sigma_+ = |up><down|
CMatrix minus();  // sigma_- = |down><up|
}  // namespace pauli

}  // namespace simtebd
