#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "eigenfit/io.hpp"
#include "test_helpers.hpp"

using namespace eigenfit;
using testhelp::Rng;

namespace {

std::string temp_path(const std::string& tag) {
    return "eigenfit_io_test_" + tag + ".json";
}

struct FileGuard {
    std::string path;
    explicit FileGuard(std::string p) : path(std::move(p)) {}
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("complex literal parsing") {
    CHECK(parse_complex("3") == Complex(3, 0));
    CHECK(parse_complex("-2.5") == Complex(-2.5, 0));
    CHECK(parse_complex("2.5e-3") == Complex(2.5e-3, 0));
    CHECK(parse_complex("1.5i") == Complex(0, 1.5));
    CHECK(parse_complex("-1.5j") == Complex(0, -1.5));
    CHECK(parse_complex("i") == Complex(0, 1));
    CHECK(parse_complex("-i") == Complex(0, -1));
    CHECK(parse_complex("+i") == Complex(0, 1));
    CHECK(parse_complex("1+2i") == Complex(1, 2));
    CHECK(parse_complex("1-2i") == Complex(1, -2));
    CHECK(parse_complex("-1-2i") == Complex(-1, -2));
    CHECK(parse_complex("1e-4+2.5e-3i") == Complex(1e-4, 2.5e-3));
    CHECK(parse_complex("-3.25E+2-1E-1J") == Complex(-325, -0.1));
    CHECK(parse_complex(" 4 + 5i ") == Complex(4, 5));
    CHECK(parse_complex("2-i") == Complex(2, -1));
    CHECK_THROWS_AS(parse_complex(""), InvalidSpecError);
    CHECK_THROWS_AS(parse_complex("abc"), InvalidSpecError);
    CHECK_THROWS_AS(parse_complex("1+2"), InvalidSpecError);
    CHECK_THROWS_AS(parse_complex("1+2i+3"), InvalidSpecError);
}

TEST_CASE("complex formatting round trips") {
    const Complex samples[] = {
        Complex(0, 0),
        Complex(1.0 / 3.0, -2.0 / 7.0),
        Complex(5.1231337791532905, 0),
        Complex(0, -1e-300),
        Complex(-12345.678901234567, 9.999999999999999e22),
    };
    for (const Complex& z : samples) {
        CHECK(parse_complex(format_complex(z)) == z);
    }
    CHECK(format_complex(Complex(2, 0)) == "2");
    CHECK(format_complex(Complex(0, 1)) == "0+1i");
    CHECK(format_complex(Complex(1, -2)) == "1-2i");
}

TEST_CASE("complex list parsing") {
    std::vector<Complex> xs = parse_complex_list("1, 2+3i ,-4.5e-1");
    REQUIRE(xs.size() == 3);
    CHECK(xs[0] == Complex(1));
    CHECK(xs[1] == Complex(2, 3));
    CHECK(xs[2] == Complex(-0.45));
    CHECK_THROWS_AS(parse_complex_list("1,,2"), InvalidSpecError);
}

TEST_CASE("matrix json round trip") {
    Rng rng(5151);
    ComplexMatrix m = testhelp::random_complex(3, 2, rng);
    Json j = matrix_to_json(m);
    CHECK(j["rows"] == 3);
    CHECK(j["cols"] == 2);
    CHECK(j["data"].size() == 3);
    CHECK(j["data"][0][0].is_array());
    ComplexMatrix back = matrix_from_json(j);
    CHECK((back - m).norm() == 0.0);
}

TEST_CASE("matrix json accepts plain real entries") {
    Json j = Json::parse(R"({"rows":2,"cols":2,"data":[[1,2],[3,4.5]]})");
    ComplexMatrix m = matrix_from_json(j);
    CHECK(m(0, 1) == Complex(2));
    CHECK(m(1, 1) == Complex(4.5));
}

TEST_CASE("matrix json rejects malformed documents") {
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":2})")),
                    InvalidSpecError);
    CHECK_THROWS_AS(
        matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"data":[[1,2]]})")),
        InvalidSpecError);
    CHECK_THROWS_AS(
        matrix_from_json(
            Json::parse(R"({"rows":1,"cols":2,"data":[[1,[2,3,4]]]})")),
        InvalidSpecError);
    CHECK_THROWS_AS(
        matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"data":[["x"]]})")),
        InvalidSpecError);
}

TEST_CASE("csv matrix parsing") {
    std::istringstream in("1, 2+1i\n-3.5e-1, 4j\n");
    ComplexMatrix m = parse_matrix_csv(in);
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 2);
    CHECK(m(0, 0) == Complex(1));
    CHECK(m(0, 1) == Complex(2, 1));
    CHECK(m(1, 0) == Complex(-0.35));
    CHECK(m(1, 1) == Complex(0, 4));

    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(parse_matrix_csv(ragged), InvalidSpecError);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_matrix_csv(empty), InvalidSpecError);
}

TEST_CASE("matrix files round trip and sniff their format") {
    Rng rng(5252);
    ComplexMatrix m = testhelp::random_complex(2, 3, rng);
    FileGuard json_file(temp_path("json"));
    write_matrix_file(json_file.path, m);
    ComplexMatrix back = read_matrix_file(json_file.path);
    CHECK((back - m).norm() == 0.0);

    FileGuard csv_file(temp_path("csv"));
    {
        std::ofstream out(csv_file.path);
        out << "1,2\n3,4+2i\n";
    }
    ComplexMatrix c = read_matrix_file(csv_file.path);
    REQUIRE(c.rows() == 2);
    CHECK(c(1, 1) == Complex(4, 2));

    CHECK_THROWS_AS(read_matrix_file("definitely_missing_file_ef.json"),
                    InvalidSpecError);
}

TEST_CASE("input digest separates matrices") {
    Rng rng(5353);
    ComplexMatrix m = testhelp::random_complex(3, 3, rng);
    ComplexMatrix m2 = m;
    m2(1, 1) += Complex(1e-12, 0);
    CHECK(input_digest(m).size() == 16);
    CHECK(input_digest(m) == input_digest(m));
    CHECK(input_digest(m) != input_digest(m2));
}

TEST_CASE("json report serialization") {
    CHECK(finite_or_null(1.5) == Json(1.5));
    CHECK(finite_or_null(std::numeric_limits<double>::infinity()).is_null());
    CHECK(std::string(status_name(OptimalityStatus::OptimalCertifiedByChecks)) ==
          "optimal-certified-by-checks");
    CHECK(std::string(status_name(OptimalityStatus::UpperBoundOnly)) ==
          "upper-bound-only");

    VerificationReport rep;
    rep.vmat_rank = 3;
    Json vj = verification_to_json(rep);
    CHECK(vj["vmat_rank"] == 3);
    CHECK(vj["optimality_status"] == "upper-bound-only");
    CHECK(vj.contains("lambda_cluster_dists"));

    StationaryPoint p;
    p.gamma_star = GammaVector::zero(3);
    p.alpha_star = 2.5;
    p.gap = std::numeric_limits<double>::infinity();
    Json pj = point_to_json(p);
    CHECK(pj["k"] == 3);
    CHECK(pj["gamma_star"].size() == 4);
    CHECK(pj["alpha_star"] == 2.5);
    CHECK(pj["gap"].is_null());

    BoundReport br;
    br.alphas = {0.5, 1.5};
    br.max_alpha = 1.5;
    br.gamma_used = GammaVector::zero(2);
    br.level_status = {"ok", "ok"};
    Json bj = bound_report_to_json(br);
    CHECK(bj["alphas"].size() == 2);
    CHECK(bj["max_alpha"] == 1.5);
    CHECK(bj["gamma_used"]["k"] == 2);
}

TEST_SUITE_END();
