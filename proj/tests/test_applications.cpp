#include <doctest.h>

#include <algorithm>

#include "eigenfit/applications.hpp"
#include "test_helpers.hpp"

using namespace eigenfit;
using testhelp::Rng;

namespace {

OptimizerOptions small_opts() {
    OptimizerOptions opts;
    opts.restarts = 6;
    return opts;
}

double min_target_cluster(const ComplexMatrix& m,
                          const std::vector<Complex>& targets) {
    std::vector<double> d = cluster_distances(eigenvalues(m), targets);
    return *std::max_element(d.begin(), d.end());
}

}  // namespace

TEST_SUITE_BEGIN("applications");

TEST_CASE("posdef repair lifts negative real parts") {
    ComplexMatrix a(2, 2);
    a << Complex(-1), Complex(2), Complex(0.5), Complex(3);
    PosdefResult res = posdef_repair(a, 0.05, small_opts());
    REQUIRE(res.plan.keep.size() == 1);
    REQUIRE(res.plan.replace_with.size() == 1);
    CHECK(res.plan.keep[0].real() == doctest::Approx(3.2360679).epsilon(1e-6));
    CHECK(res.plan.replace_with[0] == Complex(0.05, 0.0));
    CHECK(res.plan.epsilon == 0.05);
    CHECK(res.min_real_eig_after >= 0.05 - 1e-6);
    CHECK(res.result.spec.lambdas.size() == 2);
}

TEST_CASE("posdef repair leaves a compliant matrix untouched") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = Complex(1);
    a(1, 1) = Complex(2);
    PosdefResult res = posdef_repair(a, 0.5, small_opts());
    CHECK(res.plan.replace_with.empty());
    CHECK(res.plan.keep.size() == 2);
    CHECK(res.result.report.attained);
    CHECK(res.result.delta.norm() == 0.0);
    CHECK(res.min_real_eig_after == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("inverse eigenvalue problems embed the targets") {
    std::vector<Complex> targets = {Complex(1, 1), Complex(-2)};
    IepResult res = inverse_eigenvalue(4, targets, 99, small_opts());
    REQUIRE(res.a.rows() == 4);
    CHECK(min_target_cluster(res.matrix, targets) <= 1e-6);
    // The starting matrix is non-normal by construction.
    const double a_norm = spectral_norm(res.a);
    CHECK(spectral_norm(res.a.adjoint() * res.a - res.a * res.a.adjoint()) >
          1e-10 * a_norm * a_norm);
    // Same seed, same construction; a different seed draws a new matrix.
    IepResult again = inverse_eigenvalue(4, targets, 99, small_opts());
    CHECK((res.a - again.a).norm() == 0.0);
    CHECK((res.matrix - again.matrix).norm() == 0.0);
    IepResult other = inverse_eigenvalue(4, targets, 100, small_opts());
    CHECK((res.a - other.a).norm() > 0.0);
}

TEST_CASE("low rank perturbations drop the rank by the chain count") {
    Rng rng(4141);
    ComplexMatrix a = testhelp::random_complex(4, 4, rng);
    a += 5.0 * ComplexMatrix::Identity(4, 4);  // keep zero away from the spectrum

    LowRankResult one = low_rank(a, 1, small_opts());
    CHECK(one.tau == 1);
    CHECK(one.rank_after == 3);
    std::vector<Complex> eigs = eigenvalues(a + one.result.delta);
    double smallest = 1e300;
    for (const Complex& ev : eigs) smallest = std::min(smallest, std::abs(ev));
    CHECK(smallest <= 1e-6);

    LowRankResult two = low_rank(a, 2, small_opts());
    CHECK(two.tau >= 1);
    CHECK(two.rank_after == 4 - two.tau);
}

TEST_CASE("regularize floors tiny eigenvalues and solves the system") {
    ComplexMatrix a(2, 2);
    a << Complex(1e-6), Complex(1), Complex(0), Complex(2);
    ComplexVector b(2);
    b << Complex(1), Complex(1);
    RegularizeResult res = regularize(a, b, 1e-3, small_opts());
    REQUIRE(res.plan.keep.size() == 1);
    REQUIRE(res.plan.replace_with.size() == 1);
    CHECK(std::abs(res.plan.keep[0] - Complex(2)) <= 1e-6);
    CHECK(res.plan.replace_with[0] == Complex(1e-3, 0.0));
    CHECK(res.cond_before > res.cond_after);
    CHECK(res.residual <= 1e-8 * b.norm());
    CHECK(res.x.allFinite());
    ComplexMatrix repaired = a + res.result.delta;
    CHECK((repaired * res.x - b).norm() <= 1e-8 * b.norm());
}

TEST_CASE("regularize keeps a well conditioned matrix as is") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = Complex(1);
    a(1, 1) = Complex(2);
    ComplexVector b(2);
    b << Complex(3), Complex(4);
    RegularizeResult res = regularize(a, b, 1e-4, small_opts());
    CHECK(res.plan.replace_with.empty());
    CHECK(res.result.report.attained);
    CHECK(std::abs(res.x(0) - Complex(3)) <= 1e-10);
    CHECK(std::abs(res.x(1) - Complex(2)) <= 1e-10);
    CHECK(res.cond_after == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("application input validation") {
    ComplexMatrix rect(2, 3);
    rect.setZero();
    ComplexMatrix sq = ComplexMatrix::Identity(2, 2);
    ComplexVector b(2);
    b.setZero();
    OptimizerOptions opts = small_opts();
    CHECK_THROWS_AS(posdef_repair(rect, 0.1, opts), InvalidSpecError);
    CHECK_THROWS_AS(posdef_repair(sq, 0.0, opts), InvalidSpecError);
    CHECK_THROWS_AS(inverse_eigenvalue(0, {Complex(1)}, 1, opts),
                    InvalidSpecError);
    CHECK_THROWS_AS(
        inverse_eigenvalue(1, {Complex(1), Complex(2)}, 1, opts),
        InvalidSpecError);
    CHECK_THROWS_AS(low_rank(rect, 1, opts), InvalidSpecError);
    CHECK_THROWS_AS(low_rank(sq, 3, opts), InvalidSpecError);
    CHECK_THROWS_AS(regularize(rect, b, 0.1, opts), InvalidSpecError);
    CHECK_THROWS_AS(regularize(sq, ComplexVector(3), 0.1, opts),
                    InvalidSpecError);
    CHECK_THROWS_AS(regularize(sq, b, -1.0, opts), InvalidSpecError);
}

TEST_SUITE_END();
