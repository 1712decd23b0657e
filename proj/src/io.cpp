#include "eigenfit/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "eigenfit/errors.hpp"

namespace eigenfit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw InvalidSpecError("empty number in complex literal");
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        throw InvalidSpecError("malformed number '" + t + "'");
    }
    return value;
}

// Index of the sign that separates real and imaginary parts, or npos.
// A sign at position 0 or directly after an exponent marker is part of a
// number, not a separator.
std::size_t split_position(const std::string& t) {
    for (std::size_t i = t.size(); i-- > 1;) {
        if (t[i] != '+' && t[i] != '-') continue;
        const char prev = t[i - 1];
        if (prev == 'e' || prev == 'E') continue;
        return i;
    }
    return std::string::npos;
}

double parse_imag_token(const std::string& token) {
    if (token.empty() || token == "+") return 1.0;
    if (token == "-") return -1.0;
    return parse_double(token);
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void split_csv_line(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

Complex parse_complex(const std::string& text) {
    // Whitespace has no meaning inside a literal ("4 + 5i" == "4+5i").
    std::string t;
    t.reserve(text.size());
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    }
    if (t.empty()) throw InvalidSpecError("empty complex literal");
    const char last = t.back();
    if (last != 'i' && last != 'j' && last != 'I' && last != 'J') {
        return Complex(parse_double(t), 0.0);
    }
    t.pop_back();
    const std::size_t pos = split_position(t);
    if (pos == std::string::npos) {
        return Complex(0.0, parse_imag_token(t));
    }
    return Complex(parse_double(t.substr(0, pos)),
                   parse_imag_token(t.substr(pos)));
}

std::string format_complex(const Complex& z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string out = format_double(z.real());
    const std::string im = format_double(z.imag());
    if (!im.empty() && im[0] == '-') {
        out += im;
    } else {
        out += "+" + im;
    }
    out += "i";
    return out;
}

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<std::string> cells;
    split_csv_line(text, cells);
    std::vector<Complex> out;
    out.reserve(cells.size());
    for (const std::string& cell : cells) out.push_back(parse_complex(cell));
    return out;
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        data.push_back(std::move(row));
    }
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::move(data);
    return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
        !j.contains("data")) {
        throw InvalidSpecError("matrix document needs rows, cols and data");
    }
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
        throw InvalidSpecError("matrix dimensions must be integers");
    }
    const Eigen::Index rows = j["rows"].get<Eigen::Index>();
    const Eigen::Index cols = j["cols"].get<Eigen::Index>();
    if (rows < 0 || cols < 0) {
        throw InvalidSpecError("matrix dimensions must be nonnegative");
    }
    const Json& data = j["data"];
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows) {
        throw InvalidSpecError("matrix data row count does not match rows");
    }
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = data[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw InvalidSpecError("matrix data column count does not match cols");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json& cell = row[static_cast<std::size_t>(c)];
            if (cell.is_number()) {
                m(r, c) = Complex(cell.get<double>(), 0.0);
            } else if (cell.is_array() && cell.size() == 2 &&
                       cell[0].is_number() && cell[1].is_number()) {
                m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
            } else {
                throw InvalidSpecError(
                    "matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    check_finite(m, "matrix file");
    return m;
}

ComplexMatrix parse_matrix_csv(std::istream& in) {
    std::vector<std::vector<Complex>> rows;
    std::string line;
    std::vector<std::string> cells;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        split_csv_line(line, cells);
        std::vector<Complex> row;
        row.reserve(cells.size());
        for (const std::string& cell : cells) row.push_back(parse_complex(cell));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InvalidSpecError("CSV rows have inconsistent lengths");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidSpecError("CSV matrix is empty");
    ComplexMatrix m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    check_finite(m, "CSV matrix");
    return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpecError("cannot open matrix file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();
    const std::string head = trim(content);
    if (!head.empty() && head[0] == '{') {
        Json j = Json::parse(content, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded()) {
            throw InvalidSpecError("matrix file '" + path + "' is not valid JSON");
        }
        return matrix_from_json(j);
    }
    std::istringstream csv(content);
    return parse_matrix_csv(csv);
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) throw InvalidSpecError("cannot open '" + path + "' for writing");
    out << matrix_to_json(m).dump(2) << "\n";
}

std::string input_digest(const ComplexMatrix& m) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* bytes, std::size_t count) {
        const auto* p = static_cast<const unsigned char*>(bytes);
        for (std::size_t i = 0; i < count; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    const std::int64_t rows = m.rows(), cols = m.cols();
    mix(&rows, sizeof(rows));
    mix(&cols, sizeof(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double re = m(r, c).real(), im = m(r, c).imag();
            mix(&re, sizeof(re));
            mix(&im, sizeof(im));
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

Json complex_to_json(const Complex& z) {
    return Json::array({z.real(), z.imag()});
}

Json complex_list_to_json(const std::vector<Complex>& zs) {
    Json out = Json::array();
    for (const Complex& z : zs) out.push_back(complex_to_json(z));
    return out;
}

Json finite_or_null(double value) {
    if (std::isfinite(value)) return value;
    return nullptr;
}

const char* status_name(OptimalityStatus status) {
    return status == OptimalityStatus::OptimalCertifiedByChecks
               ? "optimal-certified-by-checks"
               : "upper-bound-only";
}

Json verification_to_json(const VerificationReport& rep) {
    Json j;
    j["gram_residual"] = rep.gram_residual;
    j["vmat_rank"] = rep.vmat_rank;
    j["eig_residuals"] = rep.eig_residuals;
    j["eig_residuals_rel"] = rep.eig_residuals_rel;
    j["commute_residual"] = rep.commute_residual;
    j["norm_match"] = rep.norm_match;
    j["alpha_simple"] = rep.alpha_simple;
    j["interior_gamma"] = rep.interior_gamma;
    j["attained"] = rep.attained;
    j["optimality_status"] = status_name(rep.optimality_status);
    j["delta_norm"] = rep.delta_norm;
    j["q_norm"] = rep.q_norm;
    j["mapping_residual"] = rep.mapping_residual;
    j["shifted_residual"] = rep.shifted_residual;
    j["uv_inner_max"] = rep.uv_inner_max;
    j["lambda_match_dists"] = rep.lambda_match_dists;
    j["lambda_cluster_dists"] = rep.lambda_cluster_dists;
    j["degenerate_psis"] = rep.degenerate_psis;
    j["normal_input"] = rep.normal_input;
    return j;
}

Json bound_report_to_json(const BoundReport& rep) {
    Json j;
    j["alphas"] = rep.alphas;
    j["max_alpha"] = rep.max_alpha;
    Json gamma;
    gamma["k"] = rep.gamma_used.k;
    const RealVector flat = flatten(rep.gamma_used);
    gamma["flat"] = std::vector<double>(flat.data(), flat.data() + flat.size());
    j["gamma_used"] = std::move(gamma);
    j["maximized"] = rep.maximized;
    j["level_status"] = rep.level_status;
    return j;
}

Json point_to_json(const StationaryPoint& p) {
    Json j;
    j["k"] = p.gamma_star.k;
    const RealVector flat = flatten(p.gamma_star);
    j["gamma_star"] = std::vector<double>(flat.data(), flat.data() + flat.size());
    j["alpha_star"] = p.alpha_star;
    j["gap"] = finite_or_null(p.gap);
    j["interior"] = p.interior;
    j["grad_norm"] = p.grad_norm;
    j["attained"] = p.attained;
    j["iterations"] = p.iterations;
    j["restart_index"] = p.restart_index;
    j["per_restart_best"] = p.per_restart_best;
    return j;
}

}  // namespace eigenfit
