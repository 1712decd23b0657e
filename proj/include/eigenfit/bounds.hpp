#pragma once

#include <string>
#include <vector>

#include "eigenfit/optimizer.hpp"
#include "eigenfit/problem.hpp"

namespace eigenfit {

// Lower bounds alpha_1..alpha_k on the distance from A to the set of
// matrices carrying the targets. Level m is a maximum of
// s_{mn-(m-1)} over sub-problems built from m distinct target positions;
// level k uses the full Q in the given order.
struct BoundReport {
    std::vector<double> alphas;       // one per level, all >= 0
    double max_alpha = 0.0;           // max of alphas
    GammaVector gamma_used;           // gamma evaluated at (level k view)
    bool maximized = false;
    std::vector<std::string> level_status;  // "ok" or a failure note per level
};

// Bounds evaluated at a fixed gamma. Sub-problems of order m use the
// leading entries of gamma. When a level has more than tuple_cap ordered
// tuples, the tuples with the largest gamma = 0 scores are kept.
BoundReport bounds_at(const ProblemSpec& spec, const GammaVector& gamma,
                      int tuple_cap = 200);

// Bounds with each level maximized over its own gamma via the optimizer;
// level 1 needs no optimization. A level whose optimization fails is
// reported with its gamma = 0 value and a failure note.
BoundReport maximized_bounds(const ProblemSpec& spec,
                             const OptimizerOptions& opts,
                             int tuple_cap = 200);

}  // namespace eigenfit
