#pragma once

#include <utility>
#include <vector>

#include "eigenfit/optimizer.hpp"
#include "eigenfit/problem.hpp"

namespace eigenfit {

enum class OptimalityStatus {
    OptimalCertifiedByChecks,  // all qualifications and residual checks hold
    UpperBoundOnly,            // Delta places the targets but its norm is
                               // only an upper bound on the distance
};

struct VerificationReport {
    double gram_residual = 0.0;   // Frobenius norm of U*U - V*V
    int vmat_rank = 0;
    std::vector<double> eig_residuals;      // |(A+D)psi - lambda psi| / |psi|
    std::vector<double> eig_residuals_rel;  // the same over |A+D|_2
    double commute_residual = 0.0;  // max pairwise commutator norm of the
                                    // shifted perturbed blocks
    double norm_match = 0.0;        // | |D|_2 - alpha | / alpha
    bool alpha_simple = false;
    bool interior_gamma = false;
    bool attained = false;
    OptimalityStatus optimality_status = OptimalityStatus::UpperBoundOnly;

    double delta_norm = 0.0;
    double q_norm = 0.0;             // |Q(gamma_star)|_2
    double mapping_residual = 0.0;   // |D V + alpha U|_2
    double shifted_residual = 0.0;   // max_i |(B_i+D)v_i + sum_p gamma_{i,p} v_{i+p}|
    double uv_inner_max = 0.0;       // max |u_i^* v_{i+j}|, the stationarity
                                     // inner products
    std::vector<double> lambda_match_dists;    // greedy matched distances of
                                               // each target to eig(A+D)
    std::vector<double> lambda_cluster_dists;  // per target: distance of the
                                               // mean of its multiplicity-many
                                               // nearest eigenvalues
    std::vector<int> degenerate_psis;  // 1-based indices whose chain vector
                                       // vanished; eigensolver fallback used
    bool normal_input = false;         // A is normal to tolerance (the method
                                       // targets non-normal matrices)
};

struct SolveResult {
    ProblemSpec spec;
    StationaryPoint point;
    ComplexMatrix u_mat;  // n x k, columns are the blocks of the left vector
    ComplexMatrix v_mat;  // n x k, blocks of the right vector
    ComplexMatrix delta;  // n x n perturbation
    std::vector<ComplexVector> psis;  // eigenvector chain, one per target
    VerificationReport report;
};

// Slices the stationary point's singular vectors into n x k block-column
// matrices U and V.
std::pair<ComplexMatrix, ComplexMatrix> assemble_uv(const StationaryPoint& point,
                                                    int n, int k);

// The perturbation -alpha U pinv(V). Throws QualificationError when V is
// rank deficient; returns zero when the targets are already attained.
ComplexMatrix build_delta(const StationaryPoint& point, const ProblemSpec& spec);

// Eigenvector chain: psi_k = v_k, psi_i = prod_{p>i} (B_p + Delta) v_i.
// Throws DegenerateChainError when a chain vector is numerically zero.
std::vector<ComplexVector> build_psis(const ProblemSpec& spec,
                                      const ComplexMatrix& delta,
                                      const ComplexMatrix& v_mat);

// Computes every residual and qualification field. Never throws on bad
// numbers; the report carries them.
VerificationReport verify(const ProblemSpec& spec, const StationaryPoint& point,
                          const ComplexMatrix& u_mat, const ComplexMatrix& v_mat,
                          const ComplexMatrix& delta,
                          const std::vector<ComplexVector>& psis,
                          const std::vector<int>& degenerate_psis = {},
                          double simplicity_gap_tol = 1e-6);

// Full pipeline: maximize, assemble, build Delta and the chain, verify.
// Qualification failures do not throw here; they downgrade the status and
// fall back to pseudoinverse / eigensolver constructions.
SolveResult solve(const ProblemSpec& spec, const OptimizerOptions& opts);

// For targets that are already eigenvalues of A: k independent null vectors
// of Q(gamma), built row by row from eigenvectors and shifted solves.
// Throws OracleUnavailableError when the construction cannot be validated.
std::vector<ComplexVector> null_vectors_oracle(const ProblemSpec& spec,
                                               const GammaVector& gamma);

// Greedy matching of each target (in order) to a distinct eigenvalue,
// returning the distances.
std::vector<double> matched_distances(const std::vector<Complex>& eigs,
                                      const std::vector<Complex>& targets);

// Multiplicity-aware distances: targets are grouped by equal value; each
// group of size m is scored by |mean of its m nearest eigenvalues - target|.
// A repeated target that splits symmetrically under rounding still scores
// well here, unlike the greedy per-copy distances.
std::vector<double> cluster_distances(const std::vector<Complex>& eigs,
                                      const std::vector<Complex>& targets);

}  // namespace eigenfit
