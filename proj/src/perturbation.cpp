#include "eigenfit/perturbation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eigenfit/errors.hpp"

namespace eigenfit {

namespace {

constexpr double kNormMatchTol = 1e-8;
constexpr double kAttainedRelTol = 1e-8;
constexpr double kChainZeroTol = 1e-12;
constexpr double kOracleResidualTol = 1e-8;
constexpr double kEigenvalueBackwardTol = 1e-10;
constexpr double kNormalityTol = 1e-10;

ComplexMatrix shifted(const ComplexMatrix& a, const Complex& lambda) {
    ComplexMatrix b = a;
    b.diagonal().array() -= lambda;
    return b;
}

// Unit right singular vector of the smallest singular value.
ComplexVector smallest_right_singvec(const ComplexMatrix& m) {
    SvdResult dec = svd(m);
    return dec.right_vectors.col(dec.right_vectors.cols() - 1);
}

// Eigenvector of m whose eigenvalue is closest to lambda.
ComplexVector closest_eigenvector(const ComplexMatrix& m, const Complex& lambda) {
    Eigen::ComplexEigenSolver<ComplexMatrix> dec(m, /*computeEigenvectors=*/true);
    if (dec.info() != Eigen::Success) {
        throw DecompositionError("eigenvector iteration did not converge");
    }
    Eigen::Index best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dec.eigenvalues().size(); ++i) {
        const double d = std::abs(dec.eigenvalues()(i) - lambda);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return dec.eigenvectors().col(best);
}

}  // namespace

std::pair<ComplexMatrix, ComplexMatrix> assemble_uv(const StationaryPoint& point,
                                                    int n, int k) {
    const Eigen::Index expect = static_cast<Eigen::Index>(n) * k;
    if (n < 1 || k < 1 || point.left.size() != expect ||
        point.right.size() != expect) {
        throw InvalidSpecError("assemble_uv: singular vector length mismatch");
    }
    ComplexMatrix u(n, k), v(n, k);
    for (int i = 0; i < k; ++i) {
        u.col(i) = point.left.segment(static_cast<Eigen::Index>(i) * n, n);
        v.col(i) = point.right.segment(static_cast<Eigen::Index>(i) * n, n);
    }
    return {u, v};
}

ComplexMatrix build_delta(const StationaryPoint& point, const ProblemSpec& spec) {
    spec.validate();
    const int n = spec.n();
    const int k = spec.k();
    if (point.attained || point.alpha_star <= 0.0) {
        return ComplexMatrix::Zero(n, n);
    }
    auto [u_mat, v_mat] = assemble_uv(point, n, k);
    const int rank = numerical_rank(v_mat);
    if (rank < k) {
        throw QualificationError(
            "V(gamma*) is rank deficient (rank " + std::to_string(rank) +
            " of " + std::to_string(k) + "); the perturbation norm is only an "
            "upper bound");
    }
    return -point.alpha_star * u_mat * pinv(v_mat);
}

std::vector<ComplexVector> build_psis(const ProblemSpec& spec,
                                      const ComplexMatrix& delta,
                                      const ComplexMatrix& v_mat) {
    spec.validate();
    const int n = spec.n();
    const int k = spec.k();
    if (v_mat.rows() != n || v_mat.cols() != k || delta.rows() != n ||
        delta.cols() != n) {
        throw InvalidSpecError("build_psis: shape mismatch");
    }
    const double scale = spectral_norm(v_mat);
    std::vector<ComplexVector> psis(k);
    psis[k - 1] = v_mat.col(k - 1);
    for (int i = k - 1; i >= 1; --i) {
        ComplexVector w = v_mat.col(i - 1);
        for (int p = i + 1; p <= k; ++p) {
            w = (shifted(spec.a, spec.lambdas[p - 1]) + delta) * w;
        }
        psis[i - 1] = w;
    }
    for (int i = 1; i <= k; ++i) {
        if (psis[i - 1].norm() <= kChainZeroTol * scale) {
            throw DegenerateChainError(
                "chain vector " + std::to_string(i) + " is numerically zero", i);
        }
    }
    return psis;
}

std::vector<double> matched_distances(const std::vector<Complex>& eigs,
                                      const std::vector<Complex>& targets) {
    std::vector<bool> used(eigs.size(), false);
    std::vector<double> out;
    out.reserve(targets.size());
    for (const Complex& t : targets) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < eigs.size(); ++e) {
            if (used[e]) continue;
            const double d = std::abs(eigs[e] - t);
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(e);
            }
        }
        if (best >= 0) used[best] = true;
        out.push_back(best_dist);
    }
    return out;
}

std::vector<double> cluster_distances(const std::vector<Complex>& eigs,
                                      const std::vector<Complex>& targets) {
    std::vector<double> out(targets.size(), 0.0);
    std::vector<bool> target_done(targets.size(), false);
    std::vector<bool> eig_used(eigs.size(), false);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (target_done[t]) continue;
        std::vector<std::size_t> members{t};
        for (std::size_t s = t + 1; s < targets.size(); ++s) {
            if (!target_done[s] && targets[s] == targets[t]) members.push_back(s);
        }
        const std::size_t mult = members.size();
        std::vector<std::pair<double, std::size_t>> dists;
        for (std::size_t e = 0; e < eigs.size(); ++e) {
            if (eig_used[e]) continue;
            dists.emplace_back(std::abs(eigs[e] - targets[t]), e);
        }
        std::sort(dists.begin(), dists.end());
        Complex mean(0.0, 0.0);
        const std::size_t take = std::min(mult, dists.size());
        for (std::size_t j = 0; j < take; ++j) {
            mean += eigs[dists[j].second];
            eig_used[dists[j].second] = true;
        }
        const double d = take > 0
                             ? std::abs(mean / static_cast<double>(take) - targets[t])
                             : std::numeric_limits<double>::infinity();
        for (std::size_t m : members) {
            out[m] = d;
            target_done[m] = true;
        }
    }
    return out;
}

VerificationReport verify(const ProblemSpec& spec, const StationaryPoint& point,
                          const ComplexMatrix& u_mat, const ComplexMatrix& v_mat,
                          const ComplexMatrix& delta,
                          const std::vector<ComplexVector>& psis,
                          const std::vector<int>& degenerate_psis,
                          double simplicity_gap_tol) {
    spec.validate();
    const int n = spec.n();
    const int k = spec.k();
    const double a_norm = spectral_norm(spec.a);

    VerificationReport rep;
    rep.degenerate_psis = degenerate_psis;
    rep.gram_residual = (u_mat.adjoint() * u_mat - v_mat.adjoint() * v_mat).norm();
    rep.vmat_rank = numerical_rank(v_mat);
    rep.delta_norm = spectral_norm(delta);
    rep.attained = point.attained;
    rep.alpha_simple = point.gap >= simplicity_gap_tol;
    rep.interior_gamma = point.interior;
    rep.normal_input =
        spectral_norm(spec.a.adjoint() * spec.a - spec.a * spec.a.adjoint()) <=
        kNormalityTol * a_norm * a_norm;

    if (point.attained || point.alpha_star <= 0.0) {
        rep.norm_match = rep.delta_norm == 0.0 ? 0.0 : rep.delta_norm;
    } else {
        rep.norm_match = std::abs(rep.delta_norm - point.alpha_star) / point.alpha_star;
    }

    const ComplexMatrix a_pert = spec.a + delta;
    const double a_pert_norm = spectral_norm(a_pert);
    rep.eig_residuals.resize(k);
    rep.eig_residuals_rel.resize(k);
    for (int i = 0; i < k; ++i) {
        // A missing or zero chain vector reads as an infinite residual.
        const double psi_norm =
            i < static_cast<int>(psis.size()) ? psis[i].norm() : 0.0;
        const double res =
            psi_norm > 0.0
                ? (a_pert * psis[i] - spec.lambdas[i] * psis[i]).norm() / psi_norm
                : std::numeric_limits<double>::infinity();
        rep.eig_residuals[i] = res;
        rep.eig_residuals_rel[i] =
            res / std::max(a_pert_norm, std::numeric_limits<double>::min());
    }

    rep.commute_residual = 0.0;
    for (int i = 0; i < k; ++i) {
        const ComplexMatrix bi = shifted(spec.a, spec.lambdas[i]) + delta;
        for (int j = i + 1; j < k; ++j) {
            const ComplexMatrix bj = shifted(spec.a, spec.lambdas[j]) + delta;
            rep.commute_residual =
                std::max(rep.commute_residual, spectral_norm(bi * bj - bj * bi));
        }
    }

    rep.q_norm = spectral_norm(build_q(spec, point.gamma_star));
    rep.mapping_residual = spectral_norm(delta * v_mat + point.alpha_star * u_mat);

    rep.shifted_residual = 0.0;
    rep.uv_inner_max = 0.0;
    for (int i = 1; i <= k; ++i) {
        ComplexVector w =
            (shifted(spec.a, spec.lambdas[i - 1]) + delta) * v_mat.col(i - 1);
        for (int p = 1; i + p <= k; ++p) {
            w += point.gamma_star.at(i, p) * v_mat.col(i + p - 1);
        }
        rep.shifted_residual = std::max(rep.shifted_residual, w.norm());
        for (int j = 1; i + j <= k; ++j) {
            rep.uv_inner_max = std::max(
                rep.uv_inner_max,
                std::abs(u_mat.col(i - 1).dot(v_mat.col(i + j - 1))));
        }
    }

    const std::vector<Complex> eigs = eigenvalues(a_pert);
    rep.lambda_match_dists = matched_distances(eigs, spec.lambdas);
    rep.lambda_cluster_dists = cluster_distances(eigs, spec.lambdas);

    if (rep.attained) {
        rep.optimality_status = OptimalityStatus::OptimalCertifiedByChecks;
    } else {
        const bool certified = rep.alpha_simple && rep.interior_gamma &&
                               rep.vmat_rank == k &&
                               rep.norm_match <= kNormMatchTol &&
                               rep.degenerate_psis.empty();
        rep.optimality_status = certified
                                    ? OptimalityStatus::OptimalCertifiedByChecks
                                    : OptimalityStatus::UpperBoundOnly;
    }
    return rep;
}

SolveResult solve(const ProblemSpec& spec, const OptimizerOptions& opts) {
    spec.validate();
    opts.validate();
    const int n = spec.n();
    const int k = spec.k();

    SolveResult result;
    result.spec = spec;
    result.point = maximize(spec, opts);
    auto [u_mat, v_mat] = assemble_uv(result.point, n, k);
    result.u_mat = u_mat;
    result.v_mat = v_mat;

    if (result.point.attained || result.point.alpha_star <= 0.0) {
        result.delta = ComplexMatrix::Zero(n, n);
    } else {
        // Same formula as build_delta; a rank-deficient V is not fatal here,
        // it downgrades the optimality status in verify.
        result.delta = -result.point.alpha_star * u_mat * pinv(v_mat);
    }

    std::vector<int> degenerate;
    const double scale = spectral_norm(v_mat);
    std::vector<ComplexVector> psis(k);
    psis[k - 1] = v_mat.col(k - 1);
    for (int i = k - 1; i >= 1; --i) {
        ComplexVector w = v_mat.col(i - 1);
        for (int p = i + 1; p <= k; ++p) {
            w = (shifted(spec.a, spec.lambdas[p - 1]) + result.delta) * w;
        }
        psis[i - 1] = w;
    }
    const ComplexMatrix a_pert = spec.a + result.delta;
    for (int i = 1; i <= k; ++i) {
        if (psis[i - 1].norm() <= kChainZeroTol * scale) {
            degenerate.push_back(i);
            psis[i - 1] = closest_eigenvector(a_pert, spec.lambdas[i - 1]);
        }
    }
    result.psis = psis;
    result.report = verify(spec, result.point, u_mat, v_mat, result.delta, psis,
                           degenerate, opts.simplicity_gap_tol);
    return result;
}

std::vector<ComplexVector> null_vectors_oracle(const ProblemSpec& spec,
                                               const GammaVector& gamma) {
    spec.validate();
    gamma.validate();
    const int n = spec.n();
    const int k = spec.k();
    if (gamma.k != k) {
        throw InvalidSpecError(
            "null_vectors_oracle: gamma order does not match target count");
    }
    const double a_norm = spectral_norm(spec.a);
    const double eig_tol = kEigenvalueBackwardTol * std::max(1.0, a_norm);

    std::vector<ComplexMatrix> shifted_blocks(k);
    std::vector<ComplexMatrix> shifted_pinvs(k);
    for (int j = 0; j < k; ++j) {
        shifted_blocks[j] = shifted(spec.a, spec.lambdas[j]);
        SvdResult dec = svd(shifted_blocks[j]);
        const double smallest = dec.singular_values(dec.singular_values.size() - 1);
        if (smallest > eig_tol) {
            throw OracleUnavailableError(
                "target " + std::to_string(j + 1) +
                " is not an eigenvalue to tolerance (smallest singular value " +
                std::to_string(smallest) + ")");
        }
        shifted_pinvs[j] = pinv(shifted_blocks[j]);
    }

    const ComplexMatrix q = build_q(spec, gamma);
    const double q_norm = spectral_norm(q);

    std::vector<ComplexVector> out;
    out.reserve(k);
    for (int m = 1; m <= k; ++m) {
        std::vector<ComplexVector> blocks(k, ComplexVector::Zero(n));
        blocks[m - 1] = smallest_right_singvec(shifted_blocks[m - 1]);
        for (int j = m - 1; j >= 1; --j) {
            ComplexVector w = ComplexVector::Zero(n);
            for (int p = 1; j + p <= m; ++p) {
                w += gamma.at(j, p) * blocks[j + p - 1];
            }
            blocks[j - 1] = shifted_pinvs[j - 1] * (-w);
        }
        ComplexVector v(static_cast<Eigen::Index>(n) * k);
        for (int j = 0; j < k; ++j) {
            v.segment(static_cast<Eigen::Index>(j) * n, n) = blocks[j];
        }
        const double residual = (q * v).norm();
        if (residual > kOracleResidualTol * q_norm * v.norm()) {
            throw OracleUnavailableError(
                "null vector " + std::to_string(m) +
                " failed validation (residual " + std::to_string(residual) +
                "); a generalized eigenvector chain is likely missing");
        }
        out.push_back(v);
    }

    ComplexMatrix stack(static_cast<Eigen::Index>(n) * k, k);
    for (int m = 0; m < k; ++m) stack.col(m) = out[m];
    if (numerical_rank(stack) < k) {
        throw OracleUnavailableError("null vectors are not linearly independent");
    }
    return out;
}

}  // namespace eigenfit
