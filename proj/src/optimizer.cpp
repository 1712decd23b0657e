#include "eigenfit/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "eigenfit/errors.hpp"

namespace eigenfit {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr int kGapSearchWindow = 5;   // extra halvings spent looking for a
                                      // simple-singular-value candidate
constexpr int kPolishIters = 300;
constexpr double kPolishTol = 1e-12;
constexpr double kAttainedRelTol = 1e-8;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// 0-based position of s_kappa in the nonincreasing singular value list.
inline int sv_position(int n, int k) { return n * k - k; }

// Deterministic uniform draws independent of the standard library's
// distribution implementations.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
};

RealVector project(RealVector x, int k) {
    for (int c = 0; c < k - 1; ++c) x(c) = std::max(x(c), 0.0);
    return x;
}

// Gradient components blocked by the active nonnegativity constraints are
// zeroed; the rest pass through.
RealVector projected_gradient(const RealVector& x, const RealVector& g, int k) {
    RealVector pg = g;
    for (int c = 0; c < k - 1; ++c) {
        if (x(c) <= 0.0 && g(c) < 0.0) pg(c) = 0.0;
    }
    return pg;
}

double inf_norm(const RealVector& v) {
    return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

struct Iterate {
    RealVector x;
    ObjectiveEval ev;
    RealVector grad;
    RealVector pgrad;
};

Iterate evaluate(const ProblemSpec& spec, int k, const RealVector& x) {
    Iterate it;
    it.x = x;
    GammaVector g = unflatten(k, x);
    it.ev = objective(spec, g);
    it.grad = gradient(spec, g, it.ev.u, it.ev.v);
    it.pgrad = projected_gradient(it.x, it.grad, k);
    return it;
}

struct RestartOutcome {
    Iterate best;
    int iterations = 0;
    bool failed_immediately = false;
    std::vector<double> accepted_values;
};

double bb_step(const RealVector& s, const RealVector& y_descent, double fallback) {
    const double sy = s.dot(y_descent);
    if (!(sy > 1e-300)) return fallback;
    const double step = s.squaredNorm() / sy;
    return std::clamp(step, 1e-12, 1e12);
}

RestartOutcome run_restart(const ProblemSpec& spec, const OptimizerOptions& opts,
                           double init_scale, int restart_index) {
    const int k = spec.k();
    const int dof = flat_dof(k);
    Rng rng(opts.seed + static_cast<std::uint64_t>(restart_index));

    RealVector x0(dof);
    for (int c = 0; c < k - 1; ++c) x0(c) = init_scale * rng.uniform();
    for (int c = k - 1; c < dof; c += 2) {
        const double radius = init_scale * std::sqrt(rng.uniform());
        const double angle = kTwoPi * rng.uniform();
        x0(c) = radius * std::cos(angle);
        x0(c + 1) = radius * std::sin(angle);
    }

    RestartOutcome out;
    Iterate cur = evaluate(spec, k, project(std::move(x0), k));
    out.accepted_values.push_back(cur.ev.value);

    bool have_prev = false;
    RealVector prev_x, prev_g;
    double step = opts.step_init;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (inf_norm(cur.pgrad) <= opts.grad_tol) break;

        if (have_prev) {
            step = bb_step(cur.x - prev_x, prev_g - cur.grad, opts.step_init);
        }

        bool accepted = false;
        bool have_fallback = false;
        Iterate fallback;
        int fallback_h = 0;
        double t = step;
        for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
            RealVector xn = project(cur.x + t * cur.grad, k);
            RealVector d = xn - cur.x;
            const double dg = d.dot(cur.grad);
            if (!(dg > 0.0)) continue;
            Iterate trial = evaluate(spec, k, xn);
            if (trial.ev.value >= cur.ev.value + kArmijoC1 * dg) {
                if (trial.ev.gap >= opts.simplicity_gap_tol) {
                    prev_x = cur.x;
                    prev_g = cur.grad;
                    cur = std::move(trial);
                    accepted = true;
                    break;
                }
                if (!have_fallback) {
                    have_fallback = true;
                    fallback = std::move(trial);
                    fallback_h = h;
                } else if (h - fallback_h >= kGapSearchWindow) {
                    break;
                }
            }
        }
        if (!accepted && have_fallback) {
            prev_x = cur.x;
            prev_g = cur.grad;
            cur = std::move(fallback);
            accepted = true;
        }
        if (!accepted) {
            if (iter == 0) out.failed_immediately = true;
            break;
        }
        have_prev = true;
        ++out.iterations;
        out.accepted_values.push_back(cur.ev.value);
    }

    out.best = std::move(cur);
    return out;
}

// Drives the projected gradient infinity norm down without demanding
// objective increase; near the maximizer the objective is flat to rounding
// while the gradient still carries signal.
void polish(const ProblemSpec& spec, int k, Iterate& cur) {
    bool have_prev = false;
    RealVector prev_x, prev_g;
    double step = 1.0;
    for (int iter = 0; iter < kPolishIters; ++iter) {
        double pg_norm = inf_norm(cur.pgrad);
        if (pg_norm <= kPolishTol) break;
        if (have_prev) {
            step = bb_step(cur.x - prev_x, prev_g - cur.grad, 1.0);
        }
        bool accepted = false;
        double t = step;
        for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
            RealVector xn = project(cur.x + t * cur.grad, k);
            if ((xn - cur.x).isZero(0.0)) continue;
            Iterate trial = evaluate(spec, k, xn);
            if (inf_norm(trial.pgrad) < pg_norm) {
                prev_x = cur.x;
                prev_g = cur.grad;
                cur = std::move(trial);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        have_prev = true;
    }
}

}  // namespace

void OptimizerOptions::validate() const {
    if (restarts < 1) throw InvalidSpecError("OptimizerOptions: restarts must be >= 1");
    if (max_iters < 1) throw InvalidSpecError("OptimizerOptions: max_iters must be >= 1");
    if (!(grad_tol > 0.0)) throw InvalidSpecError("OptimizerOptions: grad_tol must be > 0");
    if (!(step_init > 0.0)) throw InvalidSpecError("OptimizerOptions: step_init must be > 0");
    if (!(simplicity_gap_tol > 0.0)) {
        throw InvalidSpecError("OptimizerOptions: simplicity_gap_tol must be > 0");
    }
}

ObjectiveEval objective(const ProblemSpec& spec, const GammaVector& gamma) {
    ComplexMatrix q = build_q(spec, gamma);
    SvdResult dec = svd(q);
    const int pos = sv_position(spec.n(), spec.k());
    ObjectiveEval ev;
    ev.value = dec.singular_values(pos);
    ev.u = dec.left_vectors.col(pos);
    ev.v = dec.right_vectors.col(pos);

    const Eigen::Index p = dec.singular_values.size();
    if (p <= 1) {
        ev.gap = std::numeric_limits<double>::infinity();
    } else {
        double nearest = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < p; ++j) {
            if (j == pos) continue;
            nearest = std::min(nearest, std::abs(dec.singular_values(j) - ev.value));
        }
        const double scale = std::max(dec.singular_values(0),
                                      std::numeric_limits<double>::min());
        ev.gap = nearest / scale;
    }

    Eigen::Index imax = 0;
    ev.v.cwiseAbs().maxCoeff(&imax);
    const Complex pivot = ev.v(imax);
    if (std::abs(pivot) > 0.0) {
        const Complex phase = pivot / std::abs(pivot);
        ev.u /= phase;
        ev.v /= phase;
    }
    return ev;
}

RealVector gradient(const ProblemSpec& spec, const GammaVector& gamma,
                    const ComplexVector& u, const ComplexVector& v) {
    spec.validate();
    gamma.validate();
    const int n = spec.n();
    const int k = spec.k();
    if (gamma.k != k) {
        throw InvalidSpecError("gradient: gamma order does not match target count");
    }
    if (u.size() != static_cast<Eigen::Index>(n) * k ||
        v.size() != static_cast<Eigen::Index>(n) * k) {
        throw InvalidSpecError("gradient: singular vector length mismatch");
    }
    RealVector out(flat_dof(k));
    int pos = 0;
    for (int i = 1; i <= k - 1; ++i) {
        const Complex c = u.segment((i - 1) * n, n).dot(v.segment(i * n, n));
        out(pos++) = c.real();
    }
    for (int j = 2; j <= k - 1; ++j) {
        for (int i = 1; i + j <= k; ++i) {
            const Complex c =
                u.segment((i - 1) * n, n).dot(v.segment((i + j - 1) * n, n));
            out(pos++) = c.real();
            out(pos++) = -c.imag();
        }
    }
    return out;
}

StationaryPoint maximize(const ProblemSpec& spec, const OptimizerOptions& opts) {
    spec.validate();
    opts.validate();
    const int n = spec.n();
    const int k = spec.k();
    const double a_norm = spectral_norm(spec.a);
    const double attained_tol = kAttainedRelTol * std::max(1.0, a_norm);

    StationaryPoint best;
    if (k == 1) {
        GammaVector g = GammaVector::zero(1);
        ObjectiveEval ev = objective(spec, g);
        best.gamma_star = g;
        best.alpha_star = ev.value;
        best.left = ev.u;
        best.right = ev.v;
        best.gap = ev.gap;
        best.interior = true;
        best.grad_norm = 0.0;
        best.attained = ev.value <= attained_tol;
        best.per_restart_best = {ev.value};
        best.accepted_values = {ev.value};
        return best;
    }

    double init_scale = opts.init_scale;
    if (init_scale < 0.0) init_scale = a_norm;
    if (init_scale == 0.0) init_scale = 1.0;

    std::vector<RestartOutcome> outcomes(opts.restarts);
    int nthreads = opts.threads > 0
                       ? opts.threads
                       : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min(nthreads, opts.restarts));
    if (nthreads == 1) {
        for (int r = 0; r < opts.restarts; ++r) {
            outcomes[r] = run_restart(spec, opts, init_scale, r);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < opts.restarts;
                     r = next.fetch_add(1)) {
                    outcomes[r] = run_restart(spec, opts, init_scale, r);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    int winner = -1;
    for (int r = 0; r < opts.restarts; ++r) {
        if (winner < 0) {
            winner = r;
            continue;
        }
        const Iterate& a = outcomes[r].best;
        const Iterate& b = outcomes[winner].best;
        if (a.ev.value > b.ev.value ||
            (a.ev.value == b.ev.value &&
             inf_norm(a.pgrad) < inf_norm(b.pgrad))) {
            winner = r;
        }
    }

    bool all_failed = true;
    for (const auto& o : outcomes) {
        if (!o.failed_immediately) {
            all_failed = false;
            break;
        }
    }
    const double best_alpha = outcomes[winner].best.ev.value;
    if (all_failed && best_alpha > attained_tol) {
        throw OptimizationError(
            "every restart failed its first line search; best objective " +
            std::to_string(best_alpha));
    }

    Iterate final = outcomes[winner].best;
    if (final.ev.value > attained_tol) {
        polish(spec, k, final);
    }

    best.gamma_star = unflatten(k, final.x);
    best.alpha_star = final.ev.value;
    best.left = final.ev.u;
    best.right = final.ev.v;
    best.gap = final.ev.gap;
    best.interior = true;
    for (double g : best.gamma_star.first_diag) {
        if (!(g > 0.0)) best.interior = false;
    }
    best.grad_norm = inf_norm(final.pgrad);
    best.attained = final.ev.value <= attained_tol;
    best.iterations = outcomes[winner].iterations;
    best.restart_index = winner;
    best.per_restart_best.reserve(opts.restarts);
    for (const auto& o : outcomes) best.per_restart_best.push_back(o.best.ev.value);
    best.accepted_values = outcomes[winner].accepted_values;
    return best;
}

}  // namespace eigenfit
