#pragma once

#include <cstdint>
#include <vector>

#include "eigenfit/problem.hpp"

namespace eigenfit {

struct OptimizerOptions {
    int restarts = 20;
    int max_iters = 500;
    double grad_tol = 1e-8;          // infinity norm of the projected gradient
    double step_init = 1.0;
    std::uint64_t seed = 20260823;
    double init_scale = -1.0;        // < 0 selects spectral_norm(a)
    double simplicity_gap_tol = 1e-6;  // relative singular value gap
    int threads = 0;                 // restart parallelism; <= 0 selects hardware

    void validate() const;
};

// A candidate maximizer of the objective s_kappa(Q(gamma)).
struct StationaryPoint {
    GammaVector gamma_star;
    double alpha_star = 0.0;
    ComplexVector left;    // unit left singular vector of Q at gamma_star, length nk
    ComplexVector right;   // unit right singular vector, length nk
    double gap = 0.0;      // relative distance of alpha_star to the nearest
                           // other singular value of Q
    bool interior = false; // all first-diagonal entries strictly positive
    double grad_norm = 0.0;  // projected gradient infinity norm at gamma_star
    bool attained = false;   // alpha_star is zero to tolerance: targets are
                             // already eigenvalues and Delta = 0 is exact

    int iterations = 0;      // accepted steps of the winning restart
    int restart_index = 0;
    std::vector<double> per_restart_best;  // best objective of each restart
    std::vector<double> accepted_values;   // objective after each accepted
                                           // ascent step of the winning restart
};

struct ObjectiveEval {
    double value = 0.0;
    ComplexVector u;
    ComplexVector v;
    double gap = 0.0;
};

// s_kappa(Q(gamma)) with its unit singular pair. The pair's common phase is
// fixed so the largest-magnitude entry of v is real positive.
ObjectiveEval objective(const ProblemSpec& spec, const GammaVector& gamma);

// Analytic derivative of the objective in flat coordinates, evaluated from
// the singular pair returned by objective at the same gamma. Valid as a
// gradient where the singular value is simple; otherwise a descent-direction
// candidate.
RealVector gradient(const ProblemSpec& spec, const GammaVector& gamma,
                    const ComplexVector& u, const ComplexVector& v);

// Multistart projected gradient ascent over gamma with the first-diagonal
// entries kept nonnegative. Returns the best stationary point found.
StationaryPoint maximize(const ProblemSpec& spec, const OptimizerOptions& opts);

}  // namespace eigenfit
