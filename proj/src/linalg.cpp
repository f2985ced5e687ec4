#include "simtebd/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "simtebd/errors.hpp"

namespace simtebd {

void TruncationPolicy::validate() const {
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
        throw Error(ErrorKind::Config, "truncation threshold must be finite and >= 0");
    }
    if (max_bond && *max_bond < 1) {
        throw Error(ErrorKind::Config, "max_bond must be >= 1");
    }
}

bool all_finite(const CMatrix& M) {
    return M.allFinite();
}

double hermiticity_residual(const CMatrix& M) {
    if (M.rows() != M.cols()) return std::numeric_limits<double>::infinity();
    if (M.size() == 0) return 0.0;
    return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

SvdResult truncated_svd(const CMatrix& M, const TruncationPolicy& policy) {
    policy.validate();
    if (M.rows() == 0 || M.cols() == 0) {
        throw Error(ErrorKind::Dimension, "truncated_svd on empty matrix");
    }
    if (!all_finite(M)) {
        throw Error(ErrorKind::NumericInput, "truncated_svd input has non-finite entries");
    }

    Eigen::BDCSVD<CMatrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) {
        throw Error(ErrorKind::NumericInput, "truncated_svd input is the zero matrix");
    }

    const double cutoff = policy.threshold * sv(0);
    Eigen::Index keep = 0;
    while (keep < sv.size() && sv(keep) > 0.0 && sv(keep) >= cutoff) ++keep;
    if (policy.max_bond) keep = std::min<Eigen::Index>(keep, *policy.max_bond);

    const double total = sv.squaredNorm();
    const double dropped = sv.tail(sv.size() - keep).squaredNorm();

    SvdResult out;
    out.U = svd.matrixU().leftCols(keep);
    out.s = sv.head(keep);
    out.V = svd.matrixV().leftCols(keep);
    out.discarded_weight = dropped / total;
    return out;
}

CMatrix matrix_exponential(const CMatrix& M) {
    if (M.rows() != M.cols()) {
        throw Error(ErrorKind::Dimension, "matrix_exponential needs a square matrix");
    }
    if (!all_finite(M)) {
        throw Error(ErrorKind::NumericInput, "matrix_exponential input has non-finite entries");
    }
    if (M.isZero(0.0)) return CMatrix::Identity(M.rows(), M.cols());
    return M.exp();
}

CMatrix kron(const CMatrix& A, const CMatrix& B) {
    if (!all_finite(A) || !all_finite(B)) {
        throw Error(ErrorKind::NumericInput, "kron input has non-finite entries");
    }
    return Eigen::kroneckerProduct(A, B).eval();
}

HermitianEigen eigendecompose_hermitian(const CMatrix& M, double tolerance) {
    if (M.rows() != M.cols()) {
        throw Error(ErrorKind::Dimension, "eigendecompose_hermitian needs a square matrix");
    }
    if (!all_finite(M)) {
        throw Error(ErrorKind::NumericInput, "eigendecompose_hermitian input has non-finite entries");
    }
    if (hermiticity_residual(M) > tolerance) {
        throw Error(ErrorKind::Symmetry, "matrix is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(M);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace pauli {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

CMatrix y() {
    CMatrix m(2, 2);
    m << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0;
    return m;
}

CMatrix z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

CMatrix plus() {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

CMatrix minus() {
    CMatrix m = CMatrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

}  // namespace pauli

}  // namespace simtebd
