#include "eigenfit/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "eigenfit/errors.hpp"

namespace eigenfit {

namespace {

bool later_in_order(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

bool larger_modulus(const Complex& a, const Complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return later_in_order(a, b);
}

SolveResult run_solver(const ComplexMatrix& a, std::vector<Complex> lambdas,
                       const OptimizerOptions& opts) {
    ProblemSpec spec;
    spec.a = a;
    spec.lambdas = std::move(lambdas);
    return solve(spec, opts);
}

double condition_number(const ComplexMatrix& m) {
    RealVector s = svd(m).singular_values;
    const double smallest = s(s.size() - 1);
    if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smallest;
}

struct GaussianRng {
    std::mt19937_64 eng;
    explicit GaussianRng(std::uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double normal() {
        const double u1 = std::max(uniform(), 0x1.0p-53);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }
};

}  // namespace

PosdefResult posdef_repair(const ComplexMatrix& a, double epsilon,
                           const OptimizerOptions& opts) {
    if (a.rows() != a.cols()) {
        throw InvalidSpecError("posdef_repair: matrix is not square");
    }
    if (!(epsilon > 0.0)) {
        throw InvalidSpecError("posdef_repair: epsilon must be > 0");
    }
    PosdefResult out;
    out.plan.epsilon = epsilon;
    for (const Complex& ev : eigenvalues(a)) {
        if (ev.real() >= epsilon) {
            out.plan.keep.push_back(ev);
        } else {
            out.plan.replace_with.push_back(Complex(epsilon, 0.0));
        }
    }
    std::sort(out.plan.keep.begin(), out.plan.keep.end(), later_in_order);
    std::vector<Complex> lambdas = out.plan.keep;
    lambdas.insert(lambdas.end(), out.plan.replace_with.begin(),
                   out.plan.replace_with.end());
    out.result = run_solver(a, std::move(lambdas), opts);

    double min_re = std::numeric_limits<double>::infinity();
    for (const Complex& ev : eigenvalues(a + out.result.delta)) {
        min_re = std::min(min_re, ev.real());
    }
    out.min_real_eig_after = min_re;
    return out;
}

IepResult inverse_eigenvalue(int n, const std::vector<Complex>& targets,
                             std::uint64_t seed, const OptimizerOptions& opts) {
    if (n < 1) throw InvalidSpecError("inverse_eigenvalue: size must be >= 1");
    if (targets.empty() || static_cast<int>(targets.size()) > n) {
        throw InvalidSpecError(
            "inverse_eigenvalue: need between 1 and n targets");
    }
    GaussianRng rng(seed);
    IepResult out;
    // The starting matrix is free, so a draw whose optimum sits on the
    // gamma boundary (placement not guaranteed) is simply redrawn.
    for (int attempt = 0; attempt < 16; ++attempt) {
        ComplexMatrix a(n, n);
        for (int draw = 0; draw < 16; ++draw) {
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    a(r, c) = Complex(rng.normal(), rng.normal());
                }
            }
            if (n == 1) break;
            const double a_norm = spectral_norm(a);
            const double commutator =
                spectral_norm(a.adjoint() * a - a * a.adjoint());
            if (commutator > 1e-10 * a_norm * a_norm) break;
        }
        out.a = a;
        out.result = run_solver(a, targets, opts);
        out.matrix = a + out.result.delta;

        double worst_rel = 0.0;
        for (double r : out.result.report.eig_residuals_rel) {
            worst_rel = std::max(worst_rel, r);
        }
        const bool placed =
            out.result.report.vmat_rank == static_cast<int>(targets.size()) &&
            worst_rel <= 1e-8;
        if (out.result.report.attained || placed) break;
    }
    return out;
}

LowRankResult low_rank(const ComplexMatrix& a, int m,
                       const OptimizerOptions& opts) {
    if (a.rows() != a.cols()) {
        throw InvalidSpecError("low_rank: matrix is not square");
    }
    const int n = static_cast<int>(a.rows());
    if (m < 1 || m > n) {
        throw InvalidSpecError("low_rank: need 1 <= m <= n");
    }
    LowRankResult out;
    out.result = run_solver(a, std::vector<Complex>(m, Complex(0.0, 0.0)), opts);

    ComplexMatrix stack(n, m);
    for (int i = 0; i < m; ++i) {
        const ComplexVector& psi = out.result.psis[i];
        const double nrm = psi.norm();
        stack.col(i) = nrm > 0.0 ? (psi / nrm).eval() : psi;
    }
    out.tau = numerical_rank(stack);
    out.rank_after = numerical_rank(a + out.result.delta);
    return out;
}

RegularizeResult regularize(const ComplexMatrix& a, const ComplexVector& b,
                            double floor_value, const OptimizerOptions& opts) {
    if (a.rows() != a.cols()) {
        throw InvalidSpecError("regularize: matrix is not square");
    }
    if (b.size() != a.rows()) {
        throw InvalidSpecError("regularize: right-hand side length mismatch");
    }
    if (!(floor_value > 0.0)) {
        throw InvalidSpecError("regularize: floor must be > 0");
    }
    RegularizeResult out;
    out.plan.epsilon = floor_value;
    out.cond_before = condition_number(a);
    for (const Complex& ev : eigenvalues(a)) {
        if (std::abs(ev) >= floor_value) {
            out.plan.keep.push_back(ev);
        } else {
            out.plan.replace_with.push_back(Complex(floor_value, 0.0));
        }
    }
    std::sort(out.plan.keep.begin(), out.plan.keep.end(), larger_modulus);
    std::vector<Complex> lambdas = out.plan.keep;
    lambdas.insert(lambdas.end(), out.plan.replace_with.begin(),
                   out.plan.replace_with.end());
    out.result = run_solver(a, std::move(lambdas), opts);

    const ComplexMatrix repaired = a + out.result.delta;
    out.cond_after = condition_number(repaired);
    SvdResult dec = svd(repaired);
    const double smallest = dec.singular_values(dec.singular_values.size() - 1);
    const double tol = default_rank_tol(repaired.rows(), repaired.cols(),
                                        dec.singular_values(0));
    if (smallest <= tol) {
        throw SingularSystemError(
            "repaired system is still numerically singular (condition before " +
            std::to_string(out.cond_before) + ", after " +
            std::to_string(out.cond_after) + ")");
    }
    out.x = pinv(repaired) * b;
    out.residual = (repaired * out.x - b).norm();
    return out;
}

}  // namespace eigenfit
