// ksup: norm evaluation, prox evaluation, penalized fits, grid search, and
// the replicated synthetic experiment, with machine-readable outputs.
//
// Exit codes: 0 success, 2 usage/validation, 3 I/O, 4 numeric failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksup/data.hpp"
#include "ksup/errors.hpp"
#include "ksup/format.hpp"
#include "ksup/model_selection.hpp"
#include "ksup/norms.hpp"
#include "ksup/prox.hpp"
#include "ksup/solver.hpp"

namespace {

using ksup::format_double;
using ksup::IoError;
using ksup::NumericError;
using ksup::ValidationError;
using ksup::Vector;

Vector parse_vector(const std::string& text) {
    std::string payload = text;
    if (!text.empty() && text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) {
            throw IoError("cannot open vector file: " + text.substr(1));
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        payload = buf.str();
    }
    for (char& c : payload) {
        if (c == ',' || c == '\n' || c == '\t' || c == '\r') {
            c = ' ';
        }
    }
    std::istringstream tokens(payload);
    std::vector<double> values;
    std::string tok;
    while (tokens >> tok) {
        double v = 0.0;
        if (!ksup::parse_double(tok, v)) {
            throw ValidationError("bad vector entry: '" + tok + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw ValidationError("empty vector");
    }
    Vector w(static_cast<ksup::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        w[static_cast<ksup::Index>(i)] = values[i];
    }
    return w;
}

int require_integer_k(double k) {
    if (!(k >= 1.0) || k != std::floor(k)) {
        throw ValidationError("k must be a positive integer for this operation");
    }
    return static_cast<int>(k);
}

std::string join_vector(const Vector& v) {
    std::string out;
    for (ksup::Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_double(v[i]);
    }
    return out;
}

ksup::Dataset load_dataset(const std::string& path, const std::string& format,
                           bool no_header, const std::string& label_column) {
    if (format == "svmlight") {
        return ksup::load_svmlight(path);
    }
    return ksup::load_csv(path, !no_header, label_column);
}

struct FitFlags {
    std::string train;
    std::string val;
    std::string method;
    std::string format = "csv";
    std::string out;
    std::string label_column;
    bool no_header = false;
    bool standardize = false;
    double k = 0.0;
    double lambda = -1.0;
    double lambda1 = -1.0;
    double lambda2 = -1.0;
    int max_iters = 50000;
    double tol = 1e-8;
};

ksup::Penalty penalty_from_flags(const FitFlags& flags) {
    if (flags.method == "ksupport") {
        if (flags.k <= 0.0) {
            throw ValidationError("--k is required for ksupport");
        }
        if (flags.lambda < 0.0) {
            throw ValidationError("--lambda is required for ksupport");
        }
        if (flags.lambda1 >= 0.0 || flags.lambda2 >= 0.0) {
            throw ValidationError("--lambda1/--lambda2 do not apply to ksupport");
        }
        return ksup::Penalty::ksupport(require_integer_k(flags.k), flags.lambda);
    }
    if (flags.method == "lasso") {
        if (flags.lambda < 0.0) {
            throw ValidationError("--lambda is required for lasso");
        }
        if (flags.k > 0.0 || flags.lambda1 >= 0.0 || flags.lambda2 >= 0.0) {
            throw ValidationError("only --lambda applies to lasso");
        }
        return ksup::Penalty::lasso(flags.lambda);
    }
    if (flags.method == "elastic") {
        if (flags.lambda1 < 0.0 || flags.lambda2 < 0.0) {
            throw ValidationError("--lambda1 and --lambda2 are required for elastic");
        }
        if (flags.k > 0.0 || flags.lambda >= 0.0) {
            throw ValidationError("--k/--lambda do not apply to elastic");
        }
        return ksup::Penalty::elastic(flags.lambda1, flags.lambda2);
    }
    throw ValidationError("unknown method: " + flags.method);
}

void write_penalty(std::ostream& out, const ksup::Penalty& p) {
    out << "method: " << ksup::to_string(p.kind) << '\n';
    switch (p.kind) {
        case ksup::PenaltyKind::ksupport:
            out << "k: " << p.k << '\n';
            out << "lambda: " << format_double(p.lambda) << '\n';
            break;
        case ksup::PenaltyKind::lasso:
            out << "lambda: " << format_double(p.lambda) << '\n';
            break;
        case ksup::PenaltyKind::elastic:
            out << "lambda1: " << format_double(p.lambda1) << '\n';
            out << "lambda2: " << format_double(p.lambda2) << '\n';
            break;
    }
}

int cmd_norm(const std::string& vector_arg, double k, bool elastic) {
    const Vector w = parse_vector(vector_arg);
    if (elastic) {
        std::cout << format_double(ksup::elastic_norm(w, k)) << '\n';
    } else {
        const ksup::NormBreakdown nb =
            ksup::ksup_norm(w, require_integer_k(k));
        std::cout << format_double(nb.value) << " r=" << nb.r << '\n';
    }
    return 0;
}

int cmd_dualnorm(const std::string& vector_arg, double k, bool elastic,
                 double tol) {
    const Vector u = parse_vector(vector_arg);
    const double value = elastic
                             ? ksup::elastic_dual_norm(u, k, tol)
                             : ksup::ksup_dual_norm(u, require_integer_k(k));
    std::cout << format_double(value) << '\n';
    return 0;
}

int cmd_prox(const std::string& vector_arg, int k, double beta) {
    const Vector v = parse_vector(vector_arg);
    std::cout << join_vector(ksup::prox_ksup_sq(v, k, beta)) << '\n';
    return 0;
}

int cmd_fit(const FitFlags& flags) {
    const ksup::Penalty penalty = penalty_from_flags(flags);

    ksup::Dataset train =
        load_dataset(flags.train, flags.format, flags.no_header,
                     flags.label_column);
    bool have_val = !flags.val.empty();
    ksup::Dataset val;
    if (have_val) {
        val = load_dataset(flags.val, flags.format, flags.no_header,
                           flags.label_column);
    }
    if (flags.standardize) {
        std::vector<ksup::Dataset> others;
        if (have_val) {
            others.push_back(val);
        }
        ksup::Standardization st = ksup::standardize(train, others);
        train = std::move(st.datasets[0]);
        if (have_val) {
            val = std::move(st.datasets[1]);
        }
    }

    ksup::FitConfig cfg;
    cfg.penalty = penalty;
    cfg.max_iters = flags.max_iters;
    cfg.rel_tol = flags.tol;
    const ksup::FitResult res = ksup::fit(train, cfg);

    std::ofstream out(flags.out);
    if (!out) {
        throw IoError("cannot open file for writing: " + flags.out);
    }
    out << "# fit result\n";
    write_penalty(out, penalty);
    out << "train: " << flags.train << '\n';
    out << "n: " << train.n() << '\n';
    out << "d: " << train.d() << '\n';
    out << "standardized: " << (flags.standardize ? "true" : "false") << '\n';
    out << "max_iters: " << flags.max_iters << '\n';
    out << "rel_tol: " << format_double(flags.tol) << '\n';
    out << "L: " << format_double(res.L_used) << '\n';
    out << "iterations: " << res.iterations << '\n';
    out << "converged: " << (res.converged ? "true" : "false") << '\n';
    out << "objective_initial: " << format_double(res.initial_objective()) << '\n';
    out << "objective_best: " << format_double(res.best_objective()) << '\n';
    if (have_val) {
        out << "val_mse: " << format_double(ksup::prediction_mse(res.w, val))
            << '\n';
    }
    out << "coefficients: " << join_vector(res.w) << '\n';
    if (!out) {
        throw IoError("write failure on file: " + flags.out);
    }
    return 0;
}

struct GridFitFlags {
    FitFlags base;
    int k_min = 1;
    int k_max = 0; // 0 = d
    int lambda_exp_min = -15;
    int lambda_exp_max = 5;
};

int cmd_gridfit(const GridFitFlags& flags) {
    if (flags.base.method != "ksupport" && flags.base.method != "lasso" &&
        flags.base.method != "elastic") {
        throw ValidationError("unknown method: " + flags.base.method);
    }
    if (flags.base.val.empty()) {
        throw ValidationError("--val is required for gridfit");
    }
    if (flags.lambda_exp_min > flags.lambda_exp_max) {
        throw ValidationError("empty lambda exponent range");
    }

    ksup::Dataset train =
        load_dataset(flags.base.train, flags.base.format, flags.base.no_header,
                     flags.base.label_column);
    ksup::Dataset val =
        load_dataset(flags.base.val, flags.base.format, flags.base.no_header,
                     flags.base.label_column);
    if (flags.base.standardize) {
        ksup::Standardization st = ksup::standardize(train, {val});
        train = std::move(st.datasets[0]);
        val = std::move(st.datasets[1]);
    }

    ksup::GridSpec grid;
    grid.method = flags.base.method == "ksupport" ? ksup::PenaltyKind::ksupport
                  : flags.base.method == "lasso"  ? ksup::PenaltyKind::lasso
                                                  : ksup::PenaltyKind::elastic;
    for (int e = flags.lambda_exp_min; e <= flags.lambda_exp_max; ++e) {
        grid.lambda_exponents.push_back(e);
    }
    if (grid.method == ksup::PenaltyKind::ksupport) {
        const int k_hi = flags.k_max > 0 ? flags.k_max
                                         : static_cast<int>(train.d());
        if (flags.k_min < 1 || k_hi > train.d() || flags.k_min > k_hi) {
            throw ValidationError("invalid k range");
        }
        for (int k = flags.k_min; k <= k_hi; ++k) {
            grid.k_values.push_back(k);
        }
    }

    ksup::FitConfig cfg;
    cfg.max_iters = flags.base.max_iters;
    cfg.rel_tol = flags.base.tol;
    const ksup::GridSearchResult res = ksup::grid_search(train, val, grid, cfg);

    std::ofstream out(flags.base.out);
    if (!out) {
        throw IoError("cannot open file for writing: " + flags.base.out);
    }
    out << "# grid fit result\n";
    out << "method: " << flags.base.method << '\n';
    out << "train: " << flags.base.train << '\n';
    out << "val: " << flags.base.val << '\n';
    out << "n: " << train.n() << '\n';
    out << "d: " << train.d() << '\n';
    out << "standardized: " << (flags.base.standardize ? "true" : "false") << '\n';
    out << "cells: " << res.all.size() << '\n';
    {
        std::ostringstream best;
        write_penalty(best, res.best);
        std::string text = best.str();
        for (char& c : text) {
            if (c == '\n') {
                c = ' ';
            }
        }
        out << "best: " << text << '\n';
    }
    out << "best_val_mse: " << format_double(res.best_val_mse) << '\n';
    out << "coefficients: " << join_vector(res.best_fit.w) << '\n';
    for (std::size_t i = 0; i < res.all.size(); ++i) {
        const ksup::GridCellResult& cell = res.all[i];
        std::ostringstream params;
        write_penalty(params, cell.params);
        std::string text = params.str();
        for (char& c : text) {
            if (c == '\n') {
                c = ' ';
            }
        }
        out << "cell[" << i << "]: " << text;
        if (cell.ok) {
            out << "val_mse=" << format_double(cell.val_mse) << '\n';
        } else {
            out << "error=" << cell.error << '\n';
        }
    }
    if (!out) {
        throw IoError("write failure on file: " + flags.base.out);
    }
    return 0;
}

struct SyntheticFlags {
    int reps = 50;
    std::uint64_t seed = 1;
    double sigma = 0.01;
    std::string out_dir;
    int threads = 1;
    int max_iters = 50000;
    double tol = 1e-8;
};

int cmd_synthetic(const SyntheticFlags& flags) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(flags.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + flags.out_dir);
    }

    ksup::SyntheticSpec spec;
    spec.within_group_noise_sd = flags.sigma;

    std::vector<ksup::GridSpec> grids = {
        ksup::GridSpec::defaults(ksup::PenaltyKind::lasso, spec.d),
        ksup::GridSpec::defaults(ksup::PenaltyKind::elastic, spec.d),
        ksup::GridSpec::defaults(ksup::PenaltyKind::ksupport, spec.d),
    };

    ksup::FitConfig cfg;
    cfg.max_iters = flags.max_iters;
    cfg.rel_tol = flags.tol;

    const ksup::ExperimentReport report = ksup::run_synthetic_experiment(
        spec, grids, flags.reps, flags.seed, cfg, flags.threads);

    const fs::path dir(flags.out_dir);
    {
        std::ofstream out(dir / "report.txt");
        if (!out) {
            throw IoError("cannot open report file for writing");
        }
        ksup::write_report(report, out);
        if (!out) {
            throw IoError("write failure on report file");
        }
    }
    for (const ksup::MethodReport& m : report.methods) {
        const std::string name = "coeffs_" + ksup::to_string(m.method) + ".csv";
        ksup::write_coefficient_csv(m.coefficients, (dir / name).string());
    }

    std::cout << "report: " << (dir / "report.txt").string() << '\n';
    std::cout << "method  median_oracle_mse  se_median  sd  median_test_mse\n";
    for (const ksup::MethodReport& m : report.methods) {
        std::cout << ksup::to_string(m.method) << "  "
                  << format_double(m.median_oracle_mse) << "  "
                  << format_double(m.se_median_oracle_mse) << "  "
                  << format_double(m.sd_oracle_mse) << "  "
                  << format_double(m.median_test_mse) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-support norm toolkit"};
    app.require_subcommand(1);

    // norm
    std::string norm_vector;
    double norm_k = 0.0;
    bool norm_elastic = false;
    CLI::App* norm = app.add_subcommand("norm", "evaluate the k-support or elastic norm");
    norm->add_option("--vector", norm_vector, "comma list or @file")->required();
    norm->add_option("--k", norm_k, "sparsity parameter")->required();
    norm->add_flag("--elastic", norm_elastic, "evaluate the elastic-net norm");

    // dualnorm
    std::string dual_vector;
    double dual_k = 0.0;
    bool dual_elastic = false;
    double dual_tol = 1e-10;
    CLI::App* dualnorm =
        app.add_subcommand("dualnorm", "evaluate the dual norm");
    dualnorm->add_option("--vector", dual_vector, "comma list or @file")->required();
    dualnorm->add_option("--k", dual_k, "sparsity parameter")->required();
    dualnorm->add_flag("--elastic", dual_elastic, "evaluate the elastic-net dual");
    dualnorm->add_option("--tol", dual_tol, "accuracy of the elastic dual");

    // prox
    std::string prox_vector;
    int prox_k = 0;
    double prox_beta = 0.0;
    CLI::App* prox = app.add_subcommand(
        "prox", "prox of (beta/2)(||.||_k^sp)^2");
    prox->add_option("--vector", prox_vector, "comma list or @file")->required();
    prox->add_option("--k", prox_k, "sparsity parameter")->required();
    prox->add_option("--beta", prox_beta, "prox weight")->required();

    // fit
    FitFlags fit_flags;
    CLI::App* fit = app.add_subcommand("fit", "penalized least-squares fit");
    fit->add_option("--train", fit_flags.train, "training file")->required();
    fit->add_option("--val", fit_flags.val, "validation file");
    fit->add_option("--method", fit_flags.method, "ksupport|lasso|elastic")
        ->required()
        ->check(CLI::IsMember({"ksupport", "lasso", "elastic"}));
    fit->add_option("--format", fit_flags.format, "csv|svmlight")
        ->check(CLI::IsMember({"csv", "svmlight"}));
    fit->add_option("--out", fit_flags.out, "result document path")->required();
    fit->add_option("--label-column", fit_flags.label_column,
                    "csv label column (name or 0-based index; default last)");
    fit->add_flag("--no-header", fit_flags.no_header, "csv has no header row");
    fit->add_flag("--standardize", fit_flags.standardize,
                  "standardize features with train statistics");
    fit->add_option("--k", fit_flags.k, "sparsity parameter (ksupport)");
    fit->add_option("--lambda", fit_flags.lambda, "penalty weight");
    fit->add_option("--lambda1", fit_flags.lambda1, "l1 weight (elastic)");
    fit->add_option("--lambda2", fit_flags.lambda2, "l2 weight (elastic)");
    fit->add_option("--max-iters", fit_flags.max_iters, "iteration cap");
    fit->add_option("--tol", fit_flags.tol, "relative objective tolerance");

    // gridfit
    GridFitFlags grid_flags;
    CLI::App* gridfit =
        app.add_subcommand("gridfit", "validation-selected fit over a grid");
    gridfit->add_option("--train", grid_flags.base.train, "training file")->required();
    gridfit->add_option("--val", grid_flags.base.val, "validation file")->required();
    gridfit->add_option("--method", grid_flags.base.method, "ksupport|lasso|elastic")
        ->required()
        ->check(CLI::IsMember({"ksupport", "lasso", "elastic"}));
    gridfit->add_option("--format", grid_flags.base.format, "csv|svmlight")
        ->check(CLI::IsMember({"csv", "svmlight"}));
    gridfit->add_option("--out", grid_flags.base.out, "result document path")
        ->required();
    gridfit->add_option("--label-column", grid_flags.base.label_column,
                        "csv label column (name or 0-based index; default last)");
    gridfit->add_flag("--no-header", grid_flags.base.no_header,
                      "csv has no header row");
    gridfit->add_flag("--standardize", grid_flags.base.standardize,
                      "standardize features with train statistics");
    gridfit->add_option("--k-min", grid_flags.k_min, "smallest k (ksupport)");
    gridfit->add_option("--k-max", grid_flags.k_max, "largest k (ksupport; 0 = d)");
    gridfit->add_option("--lambda-exp-min", grid_flags.lambda_exp_min,
                        "smallest base-10 lambda exponent");
    gridfit->add_option("--lambda-exp-max", grid_flags.lambda_exp_max,
                        "largest base-10 lambda exponent");
    gridfit->add_option("--max-iters", grid_flags.base.max_iters, "iteration cap");
    gridfit->add_option("--tol", grid_flags.base.tol,
                        "relative objective tolerance");

    // synthetic
    SyntheticFlags synth_flags;
    CLI::App* synthetic = app.add_subcommand(
        "synthetic", "replicated synthetic comparison of the three methods");
    synthetic->add_option("--reps", synth_flags.reps, "number of replications");
    synthetic->add_option("--seed", synth_flags.seed, "master seed");
    synthetic->add_option("--sigma", synth_flags.sigma,
                          "within-group noise standard deviation");
    synthetic->add_option("--out-dir", synth_flags.out_dir, "output directory")
        ->required();
    synthetic->add_option("--threads", synth_flags.threads,
                          "parallel replications (result is thread-count invariant)");
    synthetic->add_option("--max-iters", synth_flags.max_iters, "iteration cap");
    synthetic->add_option("--tol", synth_flags.tol,
                          "relative objective tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (norm->parsed()) {
            return cmd_norm(norm_vector, norm_k, norm_elastic);
        }
        if (dualnorm->parsed()) {
            return cmd_dualnorm(dual_vector, dual_k, dual_elastic, dual_tol);
        }
        if (prox->parsed()) {
            return cmd_prox(prox_vector, prox_k, prox_beta);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_flags);
        }
        if (gridfit->parsed()) {
            return cmd_gridfit(grid_flags);
        }
        if (synthetic->parsed()) {
            return cmd_synthetic(synth_flags);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
