#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "eigenfit/errors.hpp"

namespace eigenfit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Throws InvalidSpecError if any entry of m is NaN or Inf.
void check_finite(const ComplexMatrix& m, const char* what);

struct SvdResult {
    ComplexMatrix left_vectors;   // columns u_1..u_p, orthonormal
    RealVector singular_values;   // s_1 >= ... >= s_p >= 0
    ComplexMatrix right_vectors;  // columns v_1..v_p, orthonormal
};

// Full SVD of a dense complex matrix. Singular values are nonincreasing;
// left/right vectors orthonormal; reconstruction holds to 1e-10 * max(1, s1).
SvdResult svd(const ComplexMatrix& m);

// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

// Moore-Penrose pseudoinverse via SVD truncation: singular values at or
// below rank_tol are treated as zero. rank_tol < 0 selects the default
// max(rows, cols) * eps * s_1.
ComplexMatrix pinv(const ComplexMatrix& m, double rank_tol = -1.0);

// Number of singular values above rank_tol (same default as pinv).
int numerical_rank(const ComplexMatrix& m, double rank_tol = -1.0);

// All n eigenvalues of a square matrix, unordered.
std::vector<Complex> eigenvalues(const ComplexMatrix& m);

// Default pseudoinverse truncation threshold for a given shape and norm.
double default_rank_tol(Eigen::Index rows, Eigen::Index cols, double s1);

}  // namespace eigenfit
