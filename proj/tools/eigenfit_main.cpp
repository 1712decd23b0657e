#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "eigenfit/applications.hpp"
#include "eigenfit/bounds.hpp"
#include "eigenfit/errors.hpp"
#include "eigenfit/io.hpp"
#include "eigenfit/perturbation.hpp"

namespace {

using eigenfit::Complex;
using eigenfit::ComplexMatrix;
using eigenfit::ComplexVector;
using eigenfit::Json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitUpperBoundOnly = 3;
constexpr int kExitSolverFailure = 4;

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

int thread_cap_from_env() {
    const char* env = std::getenv("EIGENFIT_THREADS");
    if (env == nullptr) return 0;
    const int value = std::atoi(env);
    return value > 0 ? value : 0;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string cell = text.substr(start, comma - start);
        char* end = nullptr;
        const double value = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') {
            throw eigenfit::InvalidSpecError("malformed number '" + cell + "'");
        }
        out.push_back(value);
        start = comma + 1;
    }
    return out;
}

void emit(const Json& report, const std::string& out_path) {
    const std::string text = report.dump(2);
    std::cout << text << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            throw eigenfit::InvalidSpecError("cannot open '" + out_path +
                                             "' for writing");
        }
        out << text << "\n";
    }
}

struct SolverFlags {
    std::string matrix_path;
    std::string lambda_text;
    std::string out_path;
    int restarts = 20;
    std::uint64_t seed = 20260823;
    double tol = 1e-8;

    void attach(CLI::App* cmd, bool with_matrix = true) {
        if (with_matrix) {
            cmd->add_option("--matrix", matrix_path, "matrix file (JSON or CSV)")
                ->required();
        }
        cmd->add_option("--restarts", restarts, "optimizer restarts");
        cmd->add_option("--seed", seed, "optimizer seed");
        cmd->add_option("--tol", tol, "projected gradient tolerance");
        cmd->add_option("--out", out_path, "also write the report to this file");
    }

    eigenfit::OptimizerOptions options() const {
        eigenfit::OptimizerOptions opts;
        opts.restarts = restarts;
        opts.seed = seed;
        opts.grad_tol = tol;
        opts.threads = thread_cap_from_env();
        return opts;
    }
};

Json base_report(const std::string& command, const ComplexMatrix& a,
                 const std::vector<Complex>& lambdas) {
    Json j;
    j["command"] = command;
    j["input_digest"] = eigenfit::input_digest(a);
    j["n"] = a.rows();
    j["lambdas"] = eigenfit::complex_list_to_json(lambdas);
    return j;
}

Json solve_sections(const eigenfit::SolveResult& result) {
    Json j;
    j["point"] = eigenfit::point_to_json(result.point);
    j["bounds"] = eigenfit::bound_report_to_json(
        eigenfit::bounds_at(result.spec, result.point.gamma_star));
    j["delta"] = eigenfit::matrix_to_json(result.delta);
    j["verification"] = eigenfit::verification_to_json(result.report);
    return j;
}

int status_exit_code(const eigenfit::SolveResult& result) {
    return result.report.optimality_status ==
                   eigenfit::OptimalityStatus::OptimalCertifiedByChecks
               ? kExitOk
               : kExitUpperBoundOnly;
}

void warn_if_normal(const eigenfit::SolveResult& result) {
    if (result.report.normal_input) {
        std::cerr << "warning: input matrix is normal to tolerance; the "
                     "method targets non-normal matrices and optimality "
                     "certification may fail\n";
    }
}

int run_bounds(const SolverFlags& flags, const std::string& gamma_text,
               bool maximize_flag) {
    Clock clock;
    eigenfit::ProblemSpec spec;
    spec.a = eigenfit::read_matrix_file(flags.matrix_path);
    spec.lambdas = eigenfit::parse_complex_list(flags.lambda_text);
    spec.validate();
    std::cerr << "bounds: n=" << spec.n() << " k=" << spec.k()
              << (maximize_flag ? " (maximized)" : "") << "\n";

    eigenfit::BoundReport report;
    if (maximize_flag) {
        report = eigenfit::maximized_bounds(spec, flags.options());
    } else {
        eigenfit::GammaVector gamma = eigenfit::GammaVector::zero(spec.k());
        if (!gamma_text.empty()) {
            const std::vector<double> values = parse_real_list(gamma_text);
            if (static_cast<int>(values.size()) != eigenfit::flat_dof(spec.k())) {
                throw eigenfit::InvalidSpecError(
                    "--gamma needs (k-1)^2 real values");
            }
            eigenfit::RealVector flat(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) flat(i) = values[i];
            gamma = eigenfit::unflatten(spec.k(), flat);
        }
        report = eigenfit::bounds_at(spec, gamma);
    }

    Json j = base_report("bounds", spec.a, spec.lambdas);
    j["seed"] = flags.seed;
    j["bounds"] = eigenfit::bound_report_to_json(report);
    j["wall_time_s"] = clock.seconds();
    emit(j, flags.out_path);
    return kExitOk;
}

int run_solve(const SolverFlags& flags, const std::string& delta_out) {
    Clock clock;
    eigenfit::ProblemSpec spec;
    spec.a = eigenfit::read_matrix_file(flags.matrix_path);
    spec.lambdas = eigenfit::parse_complex_list(flags.lambda_text);
    spec.validate();
    std::cerr << "solve: n=" << spec.n() << " k=" << spec.k() << " restarts="
              << flags.restarts << " seed=" << flags.seed << "\n";

    eigenfit::SolveResult result = eigenfit::solve(spec, flags.options());
    warn_if_normal(result);
    std::cerr << "solve: alpha_star=" << result.point.alpha_star << " status="
              << eigenfit::status_name(result.report.optimality_status) << "\n";

    Json j = base_report("solve", spec.a, spec.lambdas);
    j["seed"] = flags.seed;
    j["restarts"] = flags.restarts;
    j.update(solve_sections(result));
    j["wall_time_s"] = clock.seconds();
    emit(j, flags.out_path);
    if (!delta_out.empty()) eigenfit::write_matrix_file(delta_out, result.delta);
    return status_exit_code(result);
}

int run_verify(const std::string& matrix_path, const std::string& delta_path,
               const std::string& lambda_text, const std::string& out_path) {
    Clock clock;
    eigenfit::ProblemSpec spec;
    spec.a = eigenfit::read_matrix_file(matrix_path);
    spec.lambdas = eigenfit::parse_complex_list(lambda_text);
    spec.validate();
    const ComplexMatrix delta = eigenfit::read_matrix_file(delta_path);
    if (delta.rows() != spec.a.rows() || delta.cols() != spec.a.cols()) {
        throw eigenfit::InvalidSpecError(
            "perturbation shape does not match the matrix");
    }
    std::cerr << "verify: n=" << spec.n() << " k=" << spec.k() << "\n";

    const ComplexMatrix a_pert = spec.a + delta;
    const double delta_norm = eigenfit::spectral_norm(delta);
    const std::vector<Complex> eigs = eigenfit::eigenvalues(a_pert);
    const eigenfit::BoundReport zero_bounds =
        eigenfit::bounds_at(spec, eigenfit::GammaVector::zero(spec.k()));

    Json j = base_report("verify", spec.a, spec.lambdas);
    j["delta_norm"] = delta_norm;
    j["eig_a_plus_delta"] = eigenfit::complex_list_to_json(eigs);
    j["lambda_match_dists"] =
        eigenfit::matched_distances(eigs, spec.lambdas);
    j["lambda_cluster_dists"] =
        eigenfit::cluster_distances(eigs, spec.lambdas);
    j["bounds_at_zero"] = eigenfit::bound_report_to_json(zero_bounds);
    j["bound_consistent"] = delta_norm + 1e-8 >= zero_bounds.max_alpha;
    j["wall_time_s"] = clock.seconds();
    emit(j, out_path);
    return kExitOk;
}

int run_posdef(const SolverFlags& flags, double eps) {
    Clock clock;
    const ComplexMatrix a = eigenfit::read_matrix_file(flags.matrix_path);
    std::cerr << "app posdef: n=" << a.rows() << " eps=" << eps << "\n";
    eigenfit::PosdefResult app = eigenfit::posdef_repair(a, eps, flags.options());
    warn_if_normal(app.result);

    Json j = base_report("app posdef", a, app.result.spec.lambdas);
    j["seed"] = flags.seed;
    j["epsilon"] = eps;
    j["kept"] = eigenfit::complex_list_to_json(app.plan.keep);
    j["replaced_with"] = eigenfit::complex_list_to_json(app.plan.replace_with);
    j.update(solve_sections(app.result));
    j["min_real_eig_after"] = app.min_real_eig_after;
    j["wall_time_s"] = clock.seconds();
    emit(j, flags.out_path);
    return status_exit_code(app.result);
}

int run_lowrank(const SolverFlags& flags, int rank_targets) {
    Clock clock;
    const ComplexMatrix a = eigenfit::read_matrix_file(flags.matrix_path);
    std::cerr << "app lowrank: n=" << a.rows() << " m=" << rank_targets << "\n";
    eigenfit::LowRankResult app =
        eigenfit::low_rank(a, rank_targets, flags.options());
    warn_if_normal(app.result);

    Json j = base_report("app lowrank", a, app.result.spec.lambdas);
    j["seed"] = flags.seed;
    j["rank_targets"] = rank_targets;
    j.update(solve_sections(app.result));
    j["tau"] = app.tau;
    j["rank_after"] = app.rank_after;
    j["wall_time_s"] = clock.seconds();
    emit(j, flags.out_path);
    return status_exit_code(app.result);
}

int run_regularize(const SolverFlags& flags, const std::string& rhs_path,
                   double floor_value) {
    Clock clock;
    const ComplexMatrix a = eigenfit::read_matrix_file(flags.matrix_path);
    const ComplexMatrix rhs = eigenfit::read_matrix_file(rhs_path);
    if (rhs.cols() != 1) {
        throw eigenfit::InvalidSpecError(
            "right-hand side must be a single column");
    }
    std::cerr << "app regularize: n=" << a.rows() << " floor=" << floor_value
              << "\n";
    eigenfit::RegularizeResult app =
        eigenfit::regularize(a, rhs.col(0), floor_value, flags.options());
    warn_if_normal(app.result);

    Json j = base_report("app regularize", a, app.result.spec.lambdas);
    j["seed"] = flags.seed;
    j["floor"] = floor_value;
    j["kept"] = eigenfit::complex_list_to_json(app.plan.keep);
    j["replaced_with"] = eigenfit::complex_list_to_json(app.plan.replace_with);
    j.update(solve_sections(app.result));
    ComplexMatrix xmat(app.x.size(), 1);
    xmat.col(0) = app.x;
    j["solution"] = eigenfit::matrix_to_json(xmat);
    j["solve_residual"] = app.residual;
    j["cond_before"] = eigenfit::finite_or_null(app.cond_before);
    j["cond_after"] = eigenfit::finite_or_null(app.cond_after);
    j["wall_time_s"] = clock.seconds();
    emit(j, flags.out_path);
    return status_exit_code(app.result);
}

int run_iep(const SolverFlags& flags, int size, const std::string& targets_text) {
    Clock clock;
    const std::vector<Complex> targets =
        eigenfit::parse_complex_list(targets_text);
    std::cerr << "app iep: n=" << size << " targets=" << targets.size() << "\n";
    eigenfit::IepResult app =
        eigenfit::inverse_eigenvalue(size, targets, flags.seed, flags.options());

    Json j = base_report("app iep", app.a, app.result.spec.lambdas);
    j["seed"] = flags.seed;
    j["start_matrix"] = eigenfit::matrix_to_json(app.a);
    j.update(solve_sections(app.result));
    j["matrix"] = eigenfit::matrix_to_json(app.matrix);
    j["wall_time_s"] = clock.seconds();
    emit(j, flags.out_path);
    return status_exit_code(app.result);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "eigenfit: distance bounds and minimal-norm perturbations for "
        "eigenvalue placement"};
    app.require_subcommand(1);

    SolverFlags bounds_flags;
    std::string bounds_gamma;
    bool bounds_maximize = false;
    CLI::App* cmd_bounds =
        app.add_subcommand("bounds", "lower bounds on the placement distance");
    bounds_flags.attach(cmd_bounds);
    cmd_bounds->add_option("--lambda", bounds_flags.lambda_text,
                           "comma separated target eigenvalues (a+bi)")
        ->required();
    cmd_bounds->add_option("--gamma", bounds_gamma,
                           "flat gamma coordinates for the evaluation point");
    cmd_bounds->add_flag("--maximize", bounds_maximize,
                         "maximize each bound level over gamma");

    SolverFlags solve_flags;
    std::string solve_delta_out;
    CLI::App* cmd_solve =
        app.add_subcommand("solve", "construct the placement perturbation");
    solve_flags.attach(cmd_solve);
    cmd_solve->add_option("--lambda", solve_flags.lambda_text,
                          "comma separated target eigenvalues (a+bi)")
        ->required();
    cmd_solve->add_option("--delta-out", solve_delta_out,
                          "write the perturbation as a matrix file");

    std::string verify_matrix, verify_delta, verify_lambda, verify_out;
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "verify an externally supplied perturbation");
    cmd_verify->add_option("--matrix", verify_matrix, "matrix file")->required();
    cmd_verify->add_option("--delta", verify_delta, "perturbation file")
        ->required();
    cmd_verify->add_option("--lambda", verify_lambda, "target eigenvalues")
        ->required();
    cmd_verify->add_option("--out", verify_out, "also write the report here");

    CLI::App* cmd_app = app.add_subcommand("app", "application workflows");
    cmd_app->require_subcommand(1);

    SolverFlags posdef_flags;
    double posdef_eps = 1e-4;
    CLI::App* cmd_posdef =
        cmd_app->add_subcommand("posdef", "repair eigenvalues with small real part");
    posdef_flags.attach(cmd_posdef);
    cmd_posdef->add_option("--eps", posdef_eps, "replacement threshold");

    SolverFlags lowrank_flags;
    int lowrank_m = 1;
    CLI::App* cmd_lowrank =
        cmd_app->add_subcommand("lowrank", "push eigenvalues to zero to drop rank");
    lowrank_flags.attach(cmd_lowrank);
    cmd_lowrank->add_option("--rank-targets", lowrank_m,
                            "number of zero eigenvalues to prescribe");

    SolverFlags reg_flags;
    std::string reg_rhs;
    double reg_floor = 1e-4;
    CLI::App* cmd_reg =
        cmd_app->add_subcommand("regularize", "repair small eigenvalues, then solve");
    reg_flags.attach(cmd_reg);
    cmd_reg->add_option("--rhs", reg_rhs, "right-hand side file")->required();
    cmd_reg->add_option("--floor", reg_floor, "modulus floor for eigenvalues");

    SolverFlags iep_flags;
    int iep_size = 0;
    std::string iep_targets;
    CLI::App* cmd_iep =
        cmd_app->add_subcommand("iep", "build a matrix containing given eigenvalues");
    iep_flags.attach(cmd_iep, /*with_matrix=*/false);
    cmd_iep->add_option("--size", iep_size, "matrix dimension")->required();
    cmd_iep->add_option("--targets", iep_targets, "target eigenvalues")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (cmd_bounds->parsed()) {
            return run_bounds(bounds_flags, bounds_gamma, bounds_maximize);
        }
        if (cmd_solve->parsed()) return run_solve(solve_flags, solve_delta_out);
        if (cmd_verify->parsed()) {
            return run_verify(verify_matrix, verify_delta, verify_lambda,
                              verify_out);
        }
        if (cmd_posdef->parsed()) return run_posdef(posdef_flags, posdef_eps);
        if (cmd_lowrank->parsed()) return run_lowrank(lowrank_flags, lowrank_m);
        if (cmd_reg->parsed()) return run_regularize(reg_flags, reg_rhs, reg_floor);
        if (cmd_iep->parsed()) return run_iep(iep_flags, iep_size, iep_targets);
    } catch (const eigenfit::InvalidSpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const eigenfit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return kExitParse;
}
