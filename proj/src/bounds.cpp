#include "eigenfit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigenfit/errors.hpp"

namespace eigenfit {

namespace {

// Ascending singular values of A - lambda_i I for every target position.
std::vector<std::vector<double>> per_position_singvals(const ProblemSpec& spec) {
    std::vector<std::vector<double>> out;
    out.reserve(spec.k());
    for (const Complex& lambda : spec.lambdas) {
        ComplexMatrix b = spec.a;
        b.diagonal().array() -= lambda;
        RealVector s = svd(b).singular_values;
        std::vector<double> asc(s.data(), s.data() + s.size());
        std::sort(asc.begin(), asc.end());
        out.push_back(std::move(asc));
    }
    return out;
}

// s_{mn-(m-1)} of the gamma = 0 sub-matrix for a position tuple: the m-th
// smallest value of the merged per-position singular value lists. Identical
// for every ordering of the same position set.
double zero_gamma_score(const std::vector<std::vector<double>>& singvals,
                        const std::vector<int>& tuple) {
    const int m = static_cast<int>(tuple.size());
    std::vector<double> pool;
    pool.reserve(static_cast<std::size_t>(m) * m);
    for (int idx : tuple) {
        const auto& asc = singvals[idx];
        const int take = std::min<int>(m, static_cast<int>(asc.size()));
        pool.insert(pool.end(), asc.begin(), asc.begin() + take);
    }
    std::nth_element(pool.begin(), pool.begin() + (m - 1), pool.end());
    return pool[m - 1];
}

void enumerate_tuples(int k, int m, std::vector<int>& prefix,
                      std::vector<bool>& used,
                      std::vector<std::vector<int>>& out) {
    if (static_cast<int>(prefix.size()) == m) {
        out.push_back(prefix);
        return;
    }
    for (int idx = 0; idx < k; ++idx) {
        if (used[idx]) continue;
        used[idx] = true;
        prefix.push_back(idx);
        enumerate_tuples(k, m, prefix, used, out);
        prefix.pop_back();
        used[idx] = false;
    }
}

// All ordered m-tuples of distinct positions in lexicographic order,
// truncated to the cap by largest gamma = 0 score.
std::vector<std::vector<int>> level_tuples(
    const ProblemSpec& spec, int m, int tuple_cap,
    const std::vector<std::vector<double>>& singvals) {
    const int k = spec.k();
    if (m == k) {
        std::vector<int> identity(k);
        std::iota(identity.begin(), identity.end(), 0);
        return {identity};
    }
    std::vector<std::vector<int>> tuples;
    std::vector<int> prefix;
    std::vector<bool> used(k, false);
    enumerate_tuples(k, m, prefix, used, tuples);
    if (tuple_cap > 0 && static_cast<int>(tuples.size()) > tuple_cap) {
        std::vector<int> order(tuples.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> score(tuples.size());
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            score[t] = zero_gamma_score(singvals, tuples[t]);
        }
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (score[a] != score[b]) return score[a] > score[b];
            return a < b;
        });
        std::vector<std::vector<int>> kept;
        kept.reserve(tuple_cap);
        for (int t = 0; t < tuple_cap; ++t) kept.push_back(tuples[order[t]]);
        tuples = std::move(kept);
    }
    return tuples;
}

double eval_sub(const ProblemSpec& spec, const std::vector<int>& tuple,
                const GammaVector& sub_gamma) {
    const int m = static_cast<int>(tuple.size());
    ComplexMatrix q = build_sub_q(spec, tuple, sub_gamma);
    const int pos = spec.n() * m - m;  // 0-based position of s_{mn-(m-1)}
    return svd(q).singular_values(pos);
}

}  // namespace

BoundReport bounds_at(const ProblemSpec& spec, const GammaVector& gamma,
                      int tuple_cap) {
    spec.validate();
    gamma.validate();
    const int k = spec.k();
    if (gamma.k != k) {
        throw InvalidSpecError("bounds_at: gamma order does not match target count");
    }
    const auto singvals = per_position_singvals(spec);

    BoundReport report;
    report.alphas.assign(k, 0.0);
    report.gamma_used = gamma;
    report.maximized = false;
    report.level_status.assign(k, "ok");
    for (int m = 1; m <= k; ++m) {
        const GammaVector sub_gamma = gamma_prefix(gamma, m);
        double level = 0.0;
        for (const auto& tuple : level_tuples(spec, m, tuple_cap, singvals)) {
            level = std::max(level, eval_sub(spec, tuple, sub_gamma));
        }
        report.alphas[m - 1] = level;
    }
    report.max_alpha =
        *std::max_element(report.alphas.begin(), report.alphas.end());
    return report;
}

BoundReport maximized_bounds(const ProblemSpec& spec,
                             const OptimizerOptions& opts, int tuple_cap) {
    spec.validate();
    opts.validate();
    const int k = spec.k();
    const auto singvals = per_position_singvals(spec);

    BoundReport report;
    report.alphas.assign(k, 0.0);
    report.gamma_used = GammaVector::zero(k);
    report.maximized = true;
    report.level_status.assign(k, "ok");

    for (int m = 1; m <= k; ++m) {
        double level = 0.0;
        for (const auto& tuple : level_tuples(spec, m, tuple_cap, singvals)) {
            if (m == 1) {
                level = std::max(level, zero_gamma_score(singvals, tuple));
                continue;
            }
            ProblemSpec sub;
            sub.a = spec.a;
            for (int idx : tuple) sub.lambdas.push_back(spec.lambdas[idx]);
            try {
                StationaryPoint point = maximize(sub, opts);
                level = std::max(level, point.alpha_star);
                if (m == k) report.gamma_used = point.gamma_star;
            } catch (const Error& e) {
                level = std::max(level, zero_gamma_score(singvals, tuple));
                if (report.level_status[m - 1] == "ok") {
                    report.level_status[m - 1] =
                        std::string("optimizer failed, gamma = 0 value used: ") +
                        e.what();
                }
            }
        }
        report.alphas[m - 1] = level;
    }
    report.max_alpha =
        *std::max_element(report.alphas.begin(), report.alphas.end());
    return report;
}

}  // namespace eigenfit
