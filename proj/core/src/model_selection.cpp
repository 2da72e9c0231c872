#include "ksup/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "ksup/errors.hpp"
#include "ksup/rng.hpp"

namespace ksup {

GridSpec GridSpec::defaults(PenaltyKind method, Index d) {
    GridSpec grid;
    grid.method = method;
    for (int i = -15; i <= 5; ++i) {
        grid.lambda_exponents.push_back(i);
    }
    if (method == PenaltyKind::ksupport) {
        for (int k = 1; k <= d; ++k) {
            grid.k_values.push_back(k);
        }
    }
    return grid;
}

std::vector<Penalty> GridSpec::cells() const {
    if (lambda_exponents.empty()) {
        throw ValidationError("lambda exponent list must be nonempty");
    }
    std::vector<Penalty> out;
    switch (method) {
        case PenaltyKind::ksupport:
            if (k_values.empty()) {
                throw ValidationError("k value list must be nonempty");
            }
            for (int k : k_values) {
                for (int e : lambda_exponents) {
                    out.push_back(Penalty::ksupport(k, std::pow(10.0, e)));
                }
            }
            break;
        case PenaltyKind::lasso:
            for (int e : lambda_exponents) {
                out.push_back(Penalty::lasso(std::pow(10.0, e)));
            }
            break;
        case PenaltyKind::elastic:
            for (int e1 : lambda_exponents) {
                for (int e2 : lambda_exponents) {
                    out.push_back(
                        Penalty::elastic(std::pow(10.0, e1), std::pow(10.0, e2)));
                }
            }
            break;
    }
    return out;
}

namespace {

double primary_lambda(const Penalty& p) {
    return p.kind == PenaltyKind::elastic ? p.lambda1 : p.lambda;
}

/// Tie order: prefer larger lambda, then smaller k, then smaller lambda2.
bool wins_tie(const Penalty& challenger, const Penalty& incumbent) {
    if (primary_lambda(challenger) != primary_lambda(incumbent)) {
        return primary_lambda(challenger) > primary_lambda(incumbent);
    }
    if (challenger.k != incumbent.k) {
        return challenger.k < incumbent.k;
    }
    return challenger.lambda2 < incumbent.lambda2;
}

} // namespace

double prediction_mse(const Vector& w, const Dataset& data) {
    if (w.size() != data.d()) {
        throw ValidationError("coefficient length does not match feature count");
    }
    return (data.X * w - data.y).squaredNorm() / static_cast<double>(data.n());
}

GridSearchResult grid_search(const Dataset& train, const Dataset& val,
                             const GridSpec& grid, const FitConfig& solver_cfg) {
    validate(train);
    validate(val);
    if (train.d() != val.d()) {
        throw ValidationError("train and val feature counts differ");
    }

    FitConfig cfg = solver_cfg;
    if (cfg.step_L == 0.0) {
        cfg.step_L = lipschitz_estimate(train.X); // shared across cells
    }

    GridSearchResult result;
    bool have_best = false;
    for (const Penalty& cell : grid.cells()) {
        GridCellResult row;
        row.params = cell;
        cfg.penalty = cell;
        try {
            FitResult fitres = fit(train.X, train.y, cfg);
            row.val_mse = prediction_mse(fitres.w, val);
            row.ok = true;
            const bool better =
                !have_best || row.val_mse < result.best_val_mse ||
                (row.val_mse == result.best_val_mse && wins_tie(cell, result.best));
            if (better) {
                have_best = true;
                result.best = cell;
                result.best_val_mse = row.val_mse;
                result.best_fit = std::move(fitres);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        result.all.push_back(std::move(row));
    }
    if (!have_best) {
        throw NumericError("every grid cell failed; first error: " +
                           result.all.front().error);
    }
    return result;
}

double oracle_mse(const Vector& w_hat, const Vector& w_star, const Matrix& V) {
    if (w_hat.size() != w_star.size() || V.rows() != V.cols() ||
        V.rows() != w_hat.size()) {
        throw ValidationError("dimension mismatch in oracle_mse");
    }
    const Vector diff = w_hat - w_star;
    return std::max(0.0, diff.dot(V * diff));
}

double accuracy(const Vector& w, const Dataset& test) {
    validate(test);
    if (test.kind != DatasetKind::binary) {
        throw ValidationError("accuracy requires a binary dataset");
    }
    if (w.size() != test.d()) {
        throw ValidationError("coefficient length does not match feature count");
    }
    Index correct = 0;
    for (Index i = 0; i < test.n(); ++i) {
        const double margin = test.X.row(i).dot(w);
        const double pred = margin >= 0.0 ? 1.0 : -1.0; // sign(0) = +1
        if (pred == test.y[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(test.n());
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw ValidationError("median of an empty list");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) {
        return values[n / 2];
    }
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sample_sd(const std::vector<double>& values) {
    if (values.empty()) {
        throw ValidationError("sd of an empty list");
    }
    if (values.size() == 1) {
        return 0.0;
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double bootstrap_se_median(const std::vector<double>& values, int n_resamples,
                           std::uint64_t seed) {
    if (values.empty()) {
        throw ValidationError("bootstrap of an empty list");
    }
    if (n_resamples < 2) {
        throw ValidationError("need at least two resamples");
    }
    Rng rng(seed);
    const std::size_t n = values.size();
    std::vector<double> medians(static_cast<std::size_t>(n_resamples));
    std::vector<double> sample(n);
    for (int b = 0; b < n_resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            sample[i] = values[rng.below(n)];
        }
        medians[static_cast<std::size_t>(b)] = median(sample);
    }
    return sample_sd(medians);
}

namespace {

struct RepOutcome {
    std::vector<Penalty> selected;   // per method
    std::vector<double> oracle_mses; // per method
    std::vector<double> test_mses;   // per method
    std::vector<double> accuracies;  // per method, NaN when not binary
    std::vector<Vector> abs_coeffs;  // per method
};

} // namespace

ExperimentReport run_synthetic_experiment(const SyntheticSpec& spec,
                                          const std::vector<GridSpec>& grids,
                                          int n_reps, std::uint64_t master_seed,
                                          const FitConfig& solver_cfg,
                                          int n_threads) {
    validate(spec);
    if (n_reps < 1) {
        throw ValidationError("n_reps must be at least 1");
    }
    if (grids.empty()) {
        throw ValidationError("need at least one method grid");
    }
    if (spec.n_val < 1) {
        throw ValidationError("the experiment needs a validation split");
    }
    if (n_threads < 1) {
        n_threads = 1;
    }

    const Matrix V = population_covariance(spec);
    const std::size_t n_methods = grids.size();

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(n_reps));
    std::vector<std::optional<std::string>> failures(
        static_cast<std::size_t>(n_reps));

    const auto run_rep = [&](int rep) {
        SyntheticSpec rep_spec = spec;
        rep_spec.seed = derive_seed(master_seed, static_cast<std::uint64_t>(rep));
        try {
            const SyntheticData data = synthetic_generate(rep_spec);
            RepOutcome& out = outcomes[static_cast<std::size_t>(rep)];
            for (const GridSpec& grid : grids) {
                GridSearchResult res =
                    grid_search(data.train, data.val, grid, solver_cfg);
                out.selected.push_back(res.best);
                out.oracle_mses.push_back(
                    oracle_mse(res.best_fit.w, data.w_star, V));
                out.test_mses.push_back(prediction_mse(res.best_fit.w, data.test));
                out.accuracies.push_back(
                    data.test.kind == DatasetKind::binary
                        ? accuracy(res.best_fit.w, data.test)
                        : std::numeric_limits<double>::quiet_NaN());
                out.abs_coeffs.push_back(res.best_fit.w.cwiseAbs());
            }
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(rep)] =
                "replication " + std::to_string(rep) + " (seed " +
                std::to_string(rep_spec.seed) + ") failed: " + e.what();
        }
    };

    if (n_threads == 1) {
        for (int rep = 0; rep < n_reps; ++rep) {
            run_rep(rep);
        }
    } else {
        // Replications are independent (per-rep derived seeds); a static
        // stride partition keeps the result identical to the serial run.
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            workers.emplace_back([&, t]() {
                for (int rep = t; rep < n_reps; rep += n_threads) {
                    run_rep(rep);
                }
            });
        }
        for (std::thread& w : workers) {
            w.join();
        }
    }

    for (const auto& failure : failures) {
        if (failure) {
            throw NumericError(*failure);
        }
    }

    ExperimentReport report;
    report.spec = spec;
    report.master_seed = master_seed;
    report.n_reps = n_reps;
    report.grids = grids;
    for (std::size_t m = 0; m < n_methods; ++m) {
        MethodReport mr;
        mr.method = grids[m].method;
        mr.coefficients.resize(n_reps, spec.d);
        bool any_binary = false;
        for (int rep = 0; rep < n_reps; ++rep) {
            const RepOutcome& out = outcomes[static_cast<std::size_t>(rep)];
            mr.selected.push_back(out.selected[m]);
            mr.oracle_mses.push_back(out.oracle_mses[m]);
            mr.test_mses.push_back(out.test_mses[m]);
            if (!std::isnan(out.accuracies[m])) {
                any_binary = true;
                mr.accuracies.push_back(out.accuracies[m]);
            }
            mr.coefficients.row(rep) = out.abs_coeffs[m].transpose();
        }
        if (!any_binary) {
            mr.accuracies.clear();
        }
        mr.median_oracle_mse = median(mr.oracle_mses);
        mr.se_median_oracle_mse = bootstrap_se_median(
            mr.oracle_mses, 1000, derive_seed(master_seed, 0xB007'0000ull + m));
        mr.sd_oracle_mse = sample_sd(mr.oracle_mses);
        mr.median_test_mse = median(mr.test_mses);
        report.methods.push_back(std::move(mr));
    }
    return report;
}

} // namespace ksup
