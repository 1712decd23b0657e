#pragma once

#include <cstdint>
#include <vector>

#include "eigenfit/perturbation.hpp"

namespace eigenfit {

// Which eigenvalues a repair keeps and what the rest become.
struct RepairPlan {
    std::vector<Complex> keep;
    std::vector<Complex> replace_with;
    double epsilon = 0.0;  // threshold / replacement value used
};

struct PosdefResult {
    RepairPlan plan;
    SolveResult result;
    double min_real_eig_after = 0.0;  // min Re over eig(A + Delta)
};

// Replaces every eigenvalue with real part below epsilon by epsilon, keeps
// the others, and solves for the smallest-norm placement the method finds.
PosdefResult posdef_repair(const ComplexMatrix& a, double epsilon,
                           const OptimizerOptions& opts);

struct IepResult {
    ComplexMatrix a;       // the seeded random starting matrix
    SolveResult result;
    ComplexMatrix matrix;  // A + Delta, carrying the targets
};

// Builds a matrix of the requested size containing the targets among its
// eigenvalues, starting from a seeded random non-normal matrix. Draws whose
// optimum fails the placement qualifications are redrawn (the start is
// arbitrary); after 16 attempts the last result is returned as is.
IepResult inverse_eigenvalue(int n, const std::vector<Complex>& targets,
                             std::uint64_t seed, const OptimizerOptions& opts);

struct LowRankResult {
    SolveResult result;
    int tau = 0;         // numerical rank of the chain-vector stack
    int rank_after = 0;  // numerical rank of A + Delta
};

// Prescribes m zero eigenvalues. rank(A + Delta) drops to n - tau, where
// tau counts the independent eigenvectors actually obtained for zero.
LowRankResult low_rank(const ComplexMatrix& a, int m, const OptimizerOptions& opts);

struct RegularizeResult {
    RepairPlan plan;
    SolveResult result;
    ComplexVector x;        // solution of (A + Delta) x = b
    double residual = 0.0;  // |(A + Delta) x - b|
    double cond_before = 0.0;
    double cond_after = 0.0;
};

// Replaces every eigenvalue with modulus below floor_value by floor_value,
// keeps the others, then solves the repaired system.
RegularizeResult regularize(const ComplexMatrix& a, const ComplexVector& b,
                            double floor_value, const OptimizerOptions& opts);

}  // namespace eigenfit
