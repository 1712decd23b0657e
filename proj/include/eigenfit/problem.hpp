#pragma once

#include <vector>

#include "eigenfit/linalg.hpp"

namespace eigenfit {

// Input to the solver: a square matrix and the list of target eigenvalues.
struct ProblemSpec {
    ComplexMatrix a;               // n x n
    std::vector<Complex> lambdas;  // k targets, repeats permitted, 1 <= k <= n

    int n() const { return static_cast<int>(a.rows()); }
    int k() const { return static_cast<int>(lambdas.size()); }

    // Throws InvalidSpecError on non-square a, empty or oversized lambdas,
    // or non-finite entries.
    void validate() const;
};

// The parameter vector gamma of the block matrix Q. Entry (i, j) scales the
// identity block at block position (i, i+j): j = 1 entries are real (one per
// i = 1..k-1), j >= 2 entries are complex. Sign convention for first_diag is
// by optimizer projection; negative values are accepted here and give the
// same objective.
struct GammaVector {
    int k = 1;
    std::vector<double> first_diag;  // gamma_{i,1}, i = 1..k-1
    std::vector<Complex> upper;      // gamma_{i,j}, j = 2..k-1, i = 1..k-j,
                                     // ordered j-major then i

    static GammaVector zero(int k);

    // Total entry count k(k-1)/2 over first_diag + upper.
    int entry_count() const;
    // Real coordinate count (k-1)^2.
    int dof() const;

    // gamma_{i,j} with 1-based i and superdiagonal offset j >= 1.
    Complex at(int i, int j) const;
    // Storage index into upper for j >= 2.
    int upper_index(int i, int j) const;

    // Throws InvalidSpecError if the sizes are inconsistent with k.
    void validate() const;
};

// Flat real coordinates of GammaVector, ordered first_diag then Re/Im pairs
// of upper in its j-major order. Round-trips losslessly.
RealVector flatten(const GammaVector& g);
GammaVector unflatten(int k, const RealVector& values);

// Number of flat coordinates for a given k: (k-1)^2.
int flat_dof(int k);

// The singular value index nk - (k-1); s_kappa(Q) is the objective.
int kappa(int n, int k);

// The nk x nk block upper triangular matrix with diagonal blocks
// A - lambda_j I and identity blocks scaled by gamma.
ComplexMatrix build_q(const ProblemSpec& spec, const GammaVector& gamma);

// Same construction restricted to the targets at the given distinct
// positions (0-based into spec.lambdas), with a gamma of matching order.
ComplexMatrix build_sub_q(const ProblemSpec& spec,
                          const std::vector<int>& indices,
                          const GammaVector& gamma_prefix);

// The leading-order restriction of gamma to a sub-problem of order m:
// keeps gamma_{i,j} for i + j <= m.
GammaVector gamma_prefix(const GammaVector& g, int m);

}  // namespace eigenfit
