#include "eigenfit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>

namespace eigenfit {

void check_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidSpecError(std::string(what) + " contains a non-finite entry");
    }
}

double default_rank_tol(Eigen::Index rows, Eigen::Index cols, double s1) {
    const double eps = std::numeric_limits<double>::epsilon();
    return static_cast<double>(std::max(rows, cols)) * eps * s1;
}

SvdResult svd(const ComplexMatrix& m) {
    check_finite(m, "svd input");
    Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success) {
        throw DecompositionError("SVD did not converge");
    }
    SvdResult r;
    r.left_vectors = dec.matrixU();
    r.singular_values = dec.singularValues();
    r.right_vectors = dec.matrixV();
    return r;
}

double spectral_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    SvdResult r = svd(m);
    return r.singular_values.size() > 0 ? r.singular_values(0) : 0.0;
}

ComplexMatrix pinv(const ComplexMatrix& m, double rank_tol) {
    SvdResult r = svd(m);
    const Eigen::Index p = r.singular_values.size();
    const double s1 = p > 0 ? r.singular_values(0) : 0.0;
    if (rank_tol < 0.0) rank_tol = default_rank_tol(m.rows(), m.cols(), s1);
    RealVector inv = RealVector::Zero(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        if (r.singular_values(i) > rank_tol) inv(i) = 1.0 / r.singular_values(i);
    }
    return r.right_vectors.leftCols(p) * inv.asDiagonal() *
           r.left_vectors.leftCols(p).adjoint();
}

int numerical_rank(const ComplexMatrix& m, double rank_tol) {
    SvdResult r = svd(m);
    const Eigen::Index p = r.singular_values.size();
    const double s1 = p > 0 ? r.singular_values(0) : 0.0;
    if (rank_tol < 0.0) rank_tol = default_rank_tol(m.rows(), m.cols(), s1);
    int rank = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
        if (r.singular_values(i) > rank_tol) ++rank;
    }
    return rank;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidSpecError("eigenvalues: matrix is not square");
    }
    check_finite(m, "eigenvalues input");
    if (m.rows() == 0) return {};
    Eigen::ComplexEigenSolver<ComplexMatrix> dec(m, /*computeEigenvectors=*/false);
    if (dec.info() != Eigen::Success) {
        throw DecompositionError("eigenvalue iteration did not converge");
    }
    const ComplexVector& ev = dec.eigenvalues();
    return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

}  // namespace eigenfit
