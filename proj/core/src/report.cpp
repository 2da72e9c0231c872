#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ksup/errors.hpp"
#include "ksup/format.hpp"
#include "ksup/model_selection.hpp"

namespace ksup {

namespace {

std::string describe(const Penalty& p) {
    switch (p.kind) {
        case PenaltyKind::ksupport:
            return "k=" + std::to_string(p.k) +
                   " lambda=" + format_double(p.lambda);
        case PenaltyKind::lasso:
            return "lambda=" + format_double(p.lambda);
        case PenaltyKind::elastic:
            return "lambda1=" + format_double(p.lambda1) +
                   " lambda2=" + format_double(p.lambda2);
    }
    throw ValidationError("unknown penalty kind");
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_double(values[i]);
    }
    return out;
}

std::string exponents_range(const std::vector<int>& exps) {
    std::string out;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(exps[i]);
    }
    return out;
}

} // namespace

void write_report(const ExperimentReport& report, std::ostream& out) {
    out << "# synthetic experiment report\n";
    out << "master_seed: " << report.master_seed << '\n';
    out << "replications: " << report.n_reps << '\n';
    out << "d: " << report.spec.d << '\n';
    out << "sparse_support: " << report.spec.sparse_support << '\n';
    out << "signal: " << format_double(report.spec.signal) << '\n';
    out << "group_size: " << report.spec.group_size << '\n';
    out << "n_groups: " << report.spec.n_groups << '\n';
    out << "within_group_noise_sd: "
        << format_double(report.spec.within_group_noise_sd) << '\n';
    out << "response_noise_sd: " << format_double(report.spec.response_noise_sd)
        << '\n';
    out << "n_train: " << report.spec.n_train << '\n';
    out << "n_val: " << report.spec.n_val << '\n';
    out << "n_test: " << report.spec.n_test << '\n';
    out << "note: within_group_noise_sd is an assumed default; the generating "
           "protocol does not pin it and results are sensitive to it\n";
    out << '\n';

    out << "## summary\n";
    out << "oracle mse = (w_hat - w*)^T V (w_hat - w*); "
           "se via seeded 1000-resample bootstrap of the median\n";
    out << "method  median_oracle_mse  se_median  sd  median_test_mse\n";
    for (const MethodReport& m : report.methods) {
        out << to_string(m.method) << "  " << format_double(m.median_oracle_mse)
            << "  " << format_double(m.se_median_oracle_mse) << "  "
            << format_double(m.sd_oracle_mse) << "  "
            << format_double(m.median_test_mse) << '\n';
    }

    for (std::size_t i = 0; i < report.methods.size(); ++i) {
        const MethodReport& m = report.methods[i];
        const GridSpec& grid = report.grids[i];
        out << '\n';
        out << "## method: " << to_string(m.method) << '\n';
        out << "grid.lambda_exponents: " << exponents_range(grid.lambda_exponents)
            << '\n';
        if (!grid.k_values.empty()) {
            out << "grid.k_values: " << grid.k_values.front() << ".."
                << grid.k_values.back() << '\n';
        }
        out << "median_oracle_mse: " << format_double(m.median_oracle_mse) << '\n';
        out << "se_median_oracle_mse: " << format_double(m.se_median_oracle_mse)
            << '\n';
        out << "sd_oracle_mse: " << format_double(m.sd_oracle_mse) << '\n';
        out << "median_test_mse: " << format_double(m.median_test_mse) << '\n';
        out << "oracle_mse: " << join(m.oracle_mses) << '\n';
        out << "test_mse: " << join(m.test_mses) << '\n';
        if (!m.accuracies.empty()) {
            out << "accuracy: " << join(m.accuracies) << '\n';
        }
        for (std::size_t rep = 0; rep < m.selected.size(); ++rep) {
            out << "selected[" << rep << "]: " << describe(m.selected[rep])
                << '\n';
        }
    }
}

std::string format_report(const ExperimentReport& report) {
    std::ostringstream out;
    write_report(report, out);
    return out.str();
}

void write_coefficient_csv(const Matrix& coefficients, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open file for writing: " + path);
    }
    for (Index i = 0; i < coefficients.rows(); ++i) {
        for (Index j = 0; j < coefficients.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_double(coefficients(i, j), 17);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failure on file: " + path);
    }
}

Matrix read_coefficient_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            const std::string field = pos == std::string::npos
                                          ? line.substr(start)
                                          : line.substr(start, pos - start);
            double value = 0.0;
            if (!parse_double(field, value)) {
                throw IoError("bad value '" + field + "' in " + path);
            }
            row.push_back(value);
            if (pos == std::string::npos) {
                break;
            }
            start = pos + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("ragged row in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw IoError("empty file: " + path);
    }
    Matrix out(static_cast<Index>(rows.size()),
               static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return out;
}

} // namespace ksup
