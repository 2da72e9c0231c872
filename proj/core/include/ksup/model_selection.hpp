#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ksup/data.hpp"
#include "ksup/solver.hpp"
#include "ksup/types.hpp"

namespace ksup {

/// Hyperparameter grid: lambdas are 10^i over `lambda_exponents`; ksupport
/// additionally crosses with k_values; elastic crosses the exponent list
/// with itself for (lambda1, lambda2).
struct GridSpec {
    PenaltyKind method = PenaltyKind::lasso;
    std::vector<int> k_values;
    std::vector<int> lambda_exponents;

    /// k = 1..d, lambda exponents -15..5.
    static GridSpec defaults(PenaltyKind method, Index d);

    std::vector<Penalty> cells() const;
};

struct GridCellResult {
    Penalty params;
    double val_mse = 0.0;
    bool ok = false;
    std::string error; ///< set when the solver failed on this cell
};

struct GridSearchResult {
    Penalty best;
    double best_val_mse = 0.0;
    FitResult best_fit; ///< the fit from the winning cell
    std::vector<GridCellResult> all;
};

/// Fits every grid cell on train and scores mean squared prediction error
/// on val. Ties break toward maximal regularization: larger lambda (lambda1
/// for elastic), then smaller k, then smaller lambda2. Solver failures mark
/// their cell and are fatal only if every cell fails.
GridSearchResult grid_search(const Dataset& train, const Dataset& val,
                             const GridSpec& grid, const FitConfig& solver_cfg);

/// (w_hat - w_star)^T V (w_hat - w_star): estimation error weighted by the
/// population feature covariance.
double oracle_mse(const Vector& w_hat, const Vector& w_star, const Matrix& V);

/// Fraction of test rows with sign(<w, x>) == y, sign(0) counting as +1.
/// Requires a binary dataset.
double accuracy(const Vector& w, const Dataset& test);

/// Mean squared prediction error ||Xw - y||^2 / n.
double prediction_mse(const Vector& w, const Dataset& data);

double median(std::vector<double> values);
double sample_sd(const std::vector<double>& values);
/// Bootstrap standard error of the median, fixed resample count, seeded.
double bootstrap_se_median(const std::vector<double>& values, int n_resamples,
                           std::uint64_t seed);

struct MethodReport {
    PenaltyKind method = PenaltyKind::lasso;
    std::vector<Penalty> selected;    ///< winning cell per replication
    std::vector<double> oracle_mses;  ///< per replication
    std::vector<double> test_mses;    ///< per replication
    std::vector<double> accuracies;   ///< binary tasks only, else empty
    Matrix coefficients;              ///< n_reps x d, |w_hat| rows

    double median_oracle_mse = 0.0;
    double se_median_oracle_mse = 0.0; ///< bootstrap, 1000 resamples
    double sd_oracle_mse = 0.0;
    double median_test_mse = 0.0;
};

struct ExperimentReport {
    SyntheticSpec spec; ///< config echo (sigma, sizes, base seed)
    std::uint64_t master_seed = 0;
    int n_reps = 0;
    std::vector<GridSpec> grids;
    std::vector<MethodReport> methods;
};

/// Runs the replicated synthetic comparison: per replication, generate data
/// with seed derive_seed(master_seed, rep), grid-search every method on
/// train/val, and record the selected model, its oracle MSE against the
/// analytic covariance, the test MSE, and |w_hat|. Replications are
/// independent; with n_threads > 1 they run concurrently and the report is
/// assembled by replication index, so the result does not depend on
/// scheduling. A failed replication aborts with its seed in the message.
ExperimentReport run_synthetic_experiment(const SyntheticSpec& spec,
                                          const std::vector<GridSpec>& grids,
                                          int n_reps, std::uint64_t master_seed,
                                          const FitConfig& solver_cfg,
                                          int n_threads = 1);

/// Key/value + table text document; byte-stable for fixed inputs.
void write_report(const ExperimentReport& report, std::ostream& out);
std::string format_report(const ExperimentReport& report);

/// Plain CSV, one replication per row, d columns, 17 significant digits.
void write_coefficient_csv(const Matrix& coefficients, const std::string& path);
Matrix read_coefficient_csv(const std::string& path);

} // namespace ksup
