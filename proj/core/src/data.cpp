#include "ksup/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "ksup/errors.hpp"
#include "ksup/format.hpp"
#include "ksup/rng.hpp"

namespace ksup {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    if (in.bad()) {
        throw IoError("read failure on file: " + path);
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool labels_are_signs(const Vector& y) {
    for (Index i = 0; i < y.size(); ++i) {
        if (y[i] != 1.0 && y[i] != -1.0) {
            return false;
        }
    }
    return true;
}

} // namespace

void validate(const Dataset& data) {
    if (data.X.rows() < 1 || data.X.cols() < 1) {
        throw ValidationError("dataset must have at least one row and column");
    }
    if (data.y.size() != data.X.rows()) {
        throw ValidationError("label count does not match row count");
    }
    if (!data.X.allFinite() || !data.y.allFinite()) {
        throw ValidationError("dataset entries must be finite");
    }
    if (!data.feature_names.empty() &&
        static_cast<Index>(data.feature_names.size()) != data.X.cols()) {
        throw ValidationError("feature name count does not match column count");
    }
    if (data.kind == DatasetKind::binary && !labels_are_signs(data.y)) {
        throw ValidationError("binary dataset labels must be -1 or +1");
    }
}

Dataset load_csv(const std::string& path, bool has_header,
                 const std::string& label_column) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) {
        throw IoError("empty file: " + path);
    }

    std::size_t first_row = 0;
    std::vector<std::string> header;
    if (has_header) {
        header = split_fields(lines[0], ',');
        first_row = 1;
        if (lines.size() < 2) {
            throw IoError("no data rows in " + path);
        }
    }
    const std::size_t width = split_fields(lines[first_row], ',').size();
    if (has_header && header.size() != width) {
        throw IoError("header width differs from data width in " + path);
    }
    if (width < 2) {
        throw IoError("need at least one feature column and a label column in " +
                      path);
    }

    // Resolve the label column: header name, 0-based index, or last.
    std::size_t label_idx = width - 1;
    if (!label_column.empty()) {
        bool resolved = false;
        if (has_header) {
            const auto it = std::find(header.begin(), header.end(), label_column);
            if (it != header.end()) {
                label_idx = static_cast<std::size_t>(it - header.begin());
                resolved = true;
            }
        }
        if (!resolved) {
            int idx = -1;
            const auto res = std::from_chars(
                label_column.data(), label_column.data() + label_column.size(), idx);
            if (res.ec != std::errc() ||
                res.ptr != label_column.data() + label_column.size() || idx < 0 ||
                static_cast<std::size_t>(idx) >= width) {
                throw ValidationError("label column '" + label_column +
                                      "' not found");
            }
            label_idx = static_cast<std::size_t>(idx);
        }
    }

    const Index n = static_cast<Index>(lines.size() - first_row);
    const Index d = static_cast<Index>(width - 1);
    Dataset data;
    data.X.resize(n, d);
    data.y.resize(n);
    for (std::size_t row = first_row; row < lines.size(); ++row) {
        const std::vector<std::string> fields = split_fields(lines[row], ',');
        if (fields.size() != width) {
            throw IoError("ragged row " + std::to_string(row + 1) + " in " + path +
                          ": expected " + std::to_string(width) + " fields, got " +
                          std::to_string(fields.size()));
        }
        Index col_out = 0;
        for (std::size_t col = 0; col < width; ++col) {
            double value = 0.0;
            if (!parse_double(fields[col], value) || !std::isfinite(value)) {
                throw IoError("parse error at row " + std::to_string(row + 1) +
                              " column " + std::to_string(col + 1) + ": '" +
                              fields[col] + "'");
            }
            if (col == label_idx) {
                data.y[static_cast<Index>(row - first_row)] = value;
            } else {
                data.X(static_cast<Index>(row - first_row), col_out++) = value;
            }
        }
    }

    if (has_header) {
        for (std::size_t col = 0; col < width; ++col) {
            if (col != label_idx) {
                data.feature_names.push_back(header[col]);
            }
        }
    }
    data.kind = labels_are_signs(data.y) ? DatasetKind::binary
                                         : DatasetKind::regression;
    validate(data);
    return data;
}

void save_csv(const Dataset& data, const std::string& path, bool with_header) {
    validate(data);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open file for writing: " + path);
    }
    const Index d = data.d();
    if (with_header) {
        for (Index j = 0; j < d; ++j) {
            if (data.feature_names.empty()) {
                out << "f" << (j + 1);
            } else {
                out << data.feature_names[static_cast<std::size_t>(j)];
            }
            out << ',';
        }
        out << "label\n";
    }
    for (Index i = 0; i < data.n(); ++i) {
        for (Index j = 0; j < d; ++j) {
            out << format_double(data.X(i, j), 17) << ',';
        }
        out << format_double(data.y[i], 17) << '\n';
    }
    if (!out) {
        throw IoError("write failure on file: " + path);
    }
}

Dataset load_svmlight(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) {
        throw IoError("empty file: " + path);
    }

    struct Entry {
        Index row;
        Index col;
        double value;
    };
    std::vector<Entry> entries;
    std::vector<double> labels;
    labels.reserve(lines.size());
    Index d = 0;

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        const std::string where = " at line " + std::to_string(li + 1);
        std::istringstream tokens(line);
        std::string tok;
        if (!(tokens >> tok)) {
            throw IoError("empty line" + where);
        }
        double label = 0.0;
        if (!parse_double(tok, label)) {
            throw IoError("bad label '" + tok + "'" + where);
        }
        labels.push_back(label);

        long prev_idx = 0;
        while (tokens >> tok) {
            const std::size_t colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 ||
                colon + 1 == tok.size()) {
                throw IoError("malformed pair '" + tok + "'" + where);
            }
            long idx = 0;
            const auto res =
                std::from_chars(tok.data(), tok.data() + colon, idx);
            if (res.ec != std::errc() || res.ptr != tok.data() + colon ||
                idx < 1) {
                throw IoError("bad feature index in '" + tok + "'" + where);
            }
            if (idx <= prev_idx) {
                throw IoError("non-ascending or duplicate feature index " +
                              std::to_string(idx) + where);
            }
            double value = 0.0;
            if (!parse_double(tok.substr(colon + 1), value) ||
                !std::isfinite(value)) {
                throw IoError("bad feature value in '" + tok + "'" + where);
            }
            prev_idx = idx;
            entries.push_back(Entry{static_cast<Index>(li),
                                    static_cast<Index>(idx - 1), value});
            d = std::max(d, static_cast<Index>(idx));
        }
    }
    if (d == 0) {
        throw IoError("no features found in " + path);
    }

    Dataset data;
    data.X = Matrix::Zero(static_cast<Index>(lines.size()), d);
    for (const Entry& e : entries) {
        data.X(e.row, e.col) = e.value;
    }
    data.y.resize(static_cast<Index>(labels.size()));

    std::set<double> distinct(labels.begin(), labels.end());
    if (distinct.size() == 2) {
        const double low = *distinct.begin();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            data.y[static_cast<Index>(i)] = labels[i] == low ? -1.0 : 1.0;
        }
        data.kind = DatasetKind::binary;
    } else {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            data.y[static_cast<Index>(i)] = labels[i];
        }
        data.kind = DatasetKind::regression;
    }
    validate(data);
    return data;
}

Standardization standardize(const Dataset& train,
                            const std::vector<Dataset>& others) {
    validate(train);
    const Index n = train.n();
    const Index d = train.d();
    for (const Dataset& o : others) {
        validate(o);
        if (o.d() != d) {
            throw ValidationError("all datasets must share the feature count");
        }
    }

    Standardization result;
    result.means = train.X.colwise().mean();
    result.sds.resize(d);
    result.zero_variance.assign(static_cast<std::size_t>(d), false);
    for (Index j = 0; j < d; ++j) {
        double ss = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double c = train.X(i, j) - result.means[j];
            ss += c * c;
        }
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        result.sds[j] = sd;
        if (sd == 0.0) {
            result.zero_variance[static_cast<std::size_t>(j)] = true;
        }
    }

    const auto transform = [&](const Dataset& src) {
        Dataset out = src;
        for (Index j = 0; j < d; ++j) {
            if (result.zero_variance[static_cast<std::size_t>(j)]) {
                out.X.col(j).setZero();
            } else {
                out.X.col(j) =
                    (src.X.col(j).array() - result.means[j]) / result.sds[j];
            }
        }
        return out;
    };
    result.datasets.push_back(transform(train));
    for (const Dataset& o : others) {
        result.datasets.push_back(transform(o));
    }
    return result;
}

SplitResult split(const Dataset& data, const SplitSizes& sizes,
                  std::uint64_t seed) {
    validate(data);
    if (sizes.n_train < 0 || sizes.n_val < 0 || sizes.n_test < 0) {
        throw ValidationError("split sizes must be nonnegative");
    }
    if (sizes.n_train + sizes.n_val + sizes.n_test > data.n()) {
        throw ValidationError("split sizes exceed the number of rows");
    }

    std::vector<Index> idx(static_cast<std::size_t>(data.n()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = static_cast<Index>(i);
    }
    Rng rng(seed);
    rng.shuffle(idx);

    const auto take = [&](Index offset, Index count) {
        Dataset out;
        out.X.resize(count, data.d());
        out.y.resize(count);
        out.feature_names = data.feature_names;
        out.kind = data.kind;
        for (Index i = 0; i < count; ++i) {
            const Index src = idx[static_cast<std::size_t>(offset + i)];
            out.X.row(i) = data.X.row(src);
            out.y[i] = data.y[src];
        }
        return out;
    };

    SplitResult result;
    result.train = take(0, sizes.n_train);
    result.val = take(sizes.n_train, sizes.n_val);
    result.test = take(sizes.n_train + sizes.n_val, sizes.n_test);
    return result;
}

void validate(const SyntheticSpec& spec) {
    if (spec.d < 1) {
        throw ValidationError("d must be positive");
    }
    if (spec.sparse_support < 0 || spec.sparse_support > spec.d) {
        throw ValidationError("sparse_support out of range");
    }
    if (spec.group_size < 1 || spec.n_groups < 0 ||
        spec.n_groups * spec.group_size > spec.d) {
        throw ValidationError("group structure does not fit in d features");
    }
    if (!(spec.within_group_noise_sd >= 0.0) ||
        !(spec.response_noise_sd >= 0.0)) {
        throw ValidationError("noise standard deviations must be nonnegative");
    }
    if (spec.n_train < 1 || spec.n_val < 0 || spec.n_test < 0) {
        throw ValidationError("sample counts out of range");
    }
}

SyntheticData synthetic_generate(const SyntheticSpec& spec) {
    validate(spec);
    const Index d = spec.d;
    const int grouped = spec.n_groups * spec.group_size;

    SyntheticData out;
    out.w_star = Vector::Zero(d);
    for (int j = 0; j < spec.sparse_support; ++j) {
        out.w_star[j] = spec.signal;
    }

    Rng rng(spec.seed);
    const auto fill = [&](Index rows) {
        Dataset ds;
        ds.X.resize(rows, d);
        ds.y.resize(rows);
        ds.kind = DatasetKind::regression;
        for (Index i = 0; i < rows; ++i) {
            // Group means first, then the grouped features' jitter, the
            // free features, and last the response noise.
            for (int g = 0; g < spec.n_groups; ++g) {
                const double mean = rng.normal();
                for (int j = 0; j < spec.group_size; ++j) {
                    ds.X(i, g * spec.group_size + j) = mean;
                }
            }
            for (int j = 0; j < grouped; ++j) {
                ds.X(i, j) += spec.within_group_noise_sd * rng.normal();
            }
            for (Index j = grouped; j < d; ++j) {
                ds.X(i, j) = rng.normal();
            }
            ds.y[i] = ds.X.row(i).dot(out.w_star) +
                      spec.response_noise_sd * rng.normal();
        }
        return ds;
    };

    out.train = fill(spec.n_train);
    out.val = fill(spec.n_val);
    out.test = fill(spec.n_test);
    return out;
}

Matrix population_covariance(const SyntheticSpec& spec) {
    validate(spec);
    const Index d = spec.d;
    const double s2 = spec.within_group_noise_sd * spec.within_group_noise_sd;
    Matrix V = Matrix::Identity(d, d);
    for (int g = 0; g < spec.n_groups; ++g) {
        const int base = g * spec.group_size;
        for (int a = 0; a < spec.group_size; ++a) {
            for (int b = 0; b < spec.group_size; ++b) {
                V(base + a, base + b) = a == b ? 1.0 + s2 : 1.0;
            }
        }
    }
    return V;
}

} // namespace ksup
