#include <doctest.h>

#include "eigenfit/bounds.hpp"
#include "eigenfit/perturbation.hpp"
#include "test_helpers.hpp"

using namespace eigenfit;
using testhelp::Rng;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("all levels vanish when the targets are already eigenvalues") {
    Rng rng(2121);
    ComplexMatrix a = testhelp::random_complex(4, 4, rng);
    std::vector<Complex> eigs = eigenvalues(a);
    ProblemSpec spec;
    spec.a = a;
    spec.lambdas = {eigs[0], eigs[1], eigs[3]};
    BoundReport rep = bounds_at(spec, GammaVector::zero(3));
    REQUIRE(rep.alphas.size() == 3);
    const double scale = spectral_norm(a);
    for (double alpha : rep.alphas) CHECK(alpha <= 1e-8 * scale);
    CHECK(rep.max_alpha <= 1e-8 * scale);
    CHECK_FALSE(rep.maximized);
}

TEST_CASE("single target bound is the smallest shifted singular value") {
    ProblemSpec spec;
    spec.a = ComplexMatrix(2, 2);
    spec.a << Complex(1), Complex(1), Complex(0), Complex(-1);
    spec.lambdas = {Complex(0)};
    BoundReport rep = bounds_at(spec, GammaVector::zero(1));
    REQUIRE(rep.alphas.size() == 1);
    CHECK(rep.alphas[0] == doctest::Approx(0.6180339887498948).epsilon(1e-12));
    CHECK(rep.max_alpha == rep.alphas[0]);
    CHECK(rep.level_status[0] == "ok");
}

TEST_CASE("reference gamma reproduces the level-four bound") {
    BoundReport rep =
        bounds_at(testhelp::reference_spec(), testhelp::reference_gamma());
    REQUIRE(rep.alphas.size() == 4);
    CHECK(rep.alphas[3] == doctest::Approx(5.1231337791532905).epsilon(1e-9));
    CHECK(rep.max_alpha >= rep.alphas[3] - 1e-12);
    for (const std::string& s : rep.level_status) CHECK(s == "ok");
}

TEST_CASE("levels are monotone under maximization on the reference instance") {
    OptimizerOptions opts;
    opts.restarts = 4;
    opts.max_iters = 300;
    BoundReport rep = maximized_bounds(testhelp::reference_spec(), opts);
    REQUIRE(rep.alphas.size() == 4);
    CHECK(rep.maximized);
    // Every level is a lower bound for the same distance, and the top level
    // dominates after maximization on this instance.
    for (double alpha : rep.alphas) CHECK(alpha <= rep.max_alpha + 1e-12);
    CHECK(rep.alphas[3] == doctest::Approx(5.1231).epsilon(0.01));
    CHECK(rep.gamma_used.k == 4);
    ObjectiveEval at_used =
        objective(testhelp::reference_spec(), rep.gamma_used);
    CHECK(at_used.value == doctest::Approx(rep.alphas[3]).epsilon(1e-12));
}

TEST_CASE("maximized level equals the direct optimizer value for one target") {
    ProblemSpec spec;
    spec.a = ComplexMatrix(2, 2);
    spec.a << Complex(1), Complex(1), Complex(0), Complex(-1);
    spec.lambdas = {Complex(0)};
    OptimizerOptions opts;
    BoundReport rep = maximized_bounds(spec, opts);
    StationaryPoint p = maximize(spec, opts);
    REQUIRE(rep.alphas.size() == 1);
    CHECK(rep.alphas[0] == p.alpha_star);
}

TEST_CASE("sub problems at gamma zero score by merged singular values") {
    // For m = 1 the bound over singles is the largest of the per-target
    // smallest singular values of A - lambda I.
    Rng rng(2222);
    ProblemSpec spec;
    spec.a = testhelp::random_complex(3, 3, rng);
    spec.lambdas = {Complex(0.3, 0.1), Complex(-2), Complex(1, 1)};
    BoundReport rep = bounds_at(spec, GammaVector::zero(3));
    double best_single = 0.0;
    for (const Complex& lambda : spec.lambdas) {
        ComplexMatrix shifted = spec.a;
        shifted.diagonal().array() -= lambda;
        SvdResult s = svd(shifted);
        best_single =
            std::max(best_single, s.singular_values(s.singular_values.size() - 1));
    }
    CHECK(rep.alphas[0] == doctest::Approx(best_single).epsilon(1e-12));
}

TEST_CASE("bound value is unchanged by the order of chosen positions") {
    Rng rng(2323);
    ProblemSpec spec;
    spec.a = testhelp::random_complex(3, 3, rng);
    spec.lambdas = {Complex(0.5), Complex(-1, 0.5), Complex(2)};
    std::vector<int> fwd = {0, 2};
    std::vector<int> rev = {2, 0};
    ProblemSpec sub_fwd;
    sub_fwd.a = spec.a;
    ProblemSpec sub_rev = sub_fwd;
    sub_fwd.lambdas = {spec.lambdas[0], spec.lambdas[2]};
    sub_rev.lambdas = {spec.lambdas[2], spec.lambdas[0]};
    const double v_fwd =
        objective(sub_fwd, GammaVector::zero(2)).value;
    const double v_rev =
        objective(sub_rev, GammaVector::zero(2)).value;
    CHECK(v_fwd == doctest::Approx(v_rev).epsilon(1e-10));
}

TEST_CASE("weyl stability of the bound under matrix perturbation") {
    Rng rng(2424);
    ProblemSpec spec;
    spec.a = testhelp::random_complex(4, 4, rng);
    spec.lambdas = {Complex(1), Complex(-1, 0.25)};
    GammaVector g = testhelp::random_gamma(2, 1.0, rng);
    ComplexMatrix e = 1e-3 * testhelp::random_complex(4, 4, rng);
    ProblemSpec bumped = spec;
    bumped.a = spec.a + e;
    const double before = objective(spec, g).value;
    const double after = objective(bumped, g).value;
    CHECK(std::abs(after - before) <= spectral_norm(e) + 1e-12);
}

TEST_CASE("tuple cap keeps results deterministic") {
    Rng rng(2525);
    ProblemSpec spec;
    spec.a = testhelp::random_complex(3, 3, rng);
    spec.lambdas = {Complex(0.2), Complex(-0.4, 0.3), Complex(1.1)};
    BoundReport a1 = bounds_at(spec, GammaVector::zero(3), 2);
    BoundReport a2 = bounds_at(spec, GammaVector::zero(3), 2);
    CHECK(a1.alphas == a2.alphas);
    // A larger cap can only improve the max over tuples.
    BoundReport full = bounds_at(spec, GammaVector::zero(3), 200);
    for (std::size_t i = 0; i < full.alphas.size(); ++i) {
        CHECK(full.alphas[i] >= a1.alphas[i] - 1e-12);
    }
}

TEST_CASE("bounds never exceed the norm of a verified placement") {
    OptimizerOptions opts;
    opts.restarts = 4;
    opts.max_iters = 300;
    SolveResult sol = solve(testhelp::reference_spec(), opts);
    BoundReport rep = maximized_bounds(testhelp::reference_spec(), opts);
    CHECK(rep.max_alpha <= sol.report.delta_norm + 1e-6);
}

TEST_CASE("bounds validate the problem spec") {
    ProblemSpec bad;
    bad.a = ComplexMatrix::Identity(2, 2);
    bad.lambdas = {Complex(0), Complex(1), Complex(2)};
    CHECK_THROWS_AS(bounds_at(bad, GammaVector::zero(3)), InvalidSpecError);
    ProblemSpec ok;
    ok.a = ComplexMatrix::Identity(2, 2);
    ok.lambdas = {Complex(0), Complex(2)};
    CHECK_THROWS_AS(bounds_at(ok, GammaVector::zero(3)), InvalidSpecError);
}

TEST_SUITE_END();
