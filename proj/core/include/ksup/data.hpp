#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksup/types.hpp"

namespace ksup {

enum class DatasetKind { regression, binary };

/// Design matrix (row = example), responses, optional feature names.
/// kind == binary implies y entries are exactly -1 or +1.
struct Dataset {
    Matrix X;
    Vector y;
    std::vector<std::string> feature_names; ///< empty, or exactly d entries
    DatasetKind kind = DatasetKind::regression;

    Index n() const { return X.rows(); }
    Index d() const { return X.cols(); }
};

/// Throws ValidationError if the invariants above do not hold.
void validate(const Dataset& data);

/// Reads a rectangular numeric CSV. `label_column` selects the response
/// column by header name, or by 0-based index when it parses as an integer;
/// empty means the last column. Missing values and ragged rows are rejected
/// with the offending row/column in the message. The dataset is binary when
/// the labels are exactly {-1, +1}.
Dataset load_csv(const std::string& path, bool has_header,
                 const std::string& label_column = "");

/// Writes features plus a final "label" column, 17 significant digits so a
/// round trip through load_csv reproduces every value.
void save_csv(const Dataset& data, const std::string& path,
              bool with_header = true);

/// Reads sparse "label idx:val ..." lines with 1-based strictly ascending
/// indices; d is the largest index seen, absent entries are zero. When
/// exactly two distinct label values occur they map to -1/+1 (smaller to -1)
/// and the dataset is binary. Malformed lines are rejected with their line
/// number.
Dataset load_svmlight(const std::string& path);

/// Per-feature affine transform fitted on train and applied to every split.
struct Standardization {
    std::vector<Dataset> datasets;   ///< train first, then the others
    Vector means;                    ///< train column means
    Vector sds;                      ///< train column sds (sample, n-1); 0 for constant columns
    std::vector<bool> zero_variance; ///< flagged features, forced to all-zeros
};

/// Centers and scales every dataset with the train means/sds. Features with
/// sd = 0 on train become all-zero columns and are flagged.
Standardization standardize(const Dataset& train,
                            const std::vector<Dataset>& others = {});

struct SplitSizes {
    Index n_train = 0;
    Index n_val = 0;
    Index n_test = 0;
};

struct SplitResult {
    Dataset train, val, test;
};

/// Seeded uniform random partition into disjoint splits; sizes must sum to
/// at most n. Same seed, same partition.
SplitResult split(const Dataset& data, const SplitSizes& sizes,
                  std::uint64_t seed);

/// Synthetic regression protocol: the target has `signal` on the first
/// sparse_support coordinates and 0 elsewhere; the first n_groups blocks of
/// group_size features share a per-row latent N(0,1) mean plus
/// N(0, within_group_noise_sd^2) jitter; the remaining features are i.i.d.
/// N(0,1); y = <w*, x> + N(0, response_noise_sd^2).
struct SyntheticSpec {
    int d = 40;
    int sparse_support = 15;
    double signal = 3.0;
    int group_size = 5;
    int n_groups = 3;
    double within_group_noise_sd = 0.01;
    double response_noise_sd = 1.0;
    int n_train = 50;
    int n_val = 50;
    int n_test = 350;
    std::uint64_t seed = 0;
};

void validate(const SyntheticSpec& spec);

struct SyntheticData {
    Dataset train, val, test;
    Vector w_star;
};

/// Deterministic given spec.seed: rows are drawn train, then val, then test;
/// within a row the draw order is the group means, the grouped features'
/// jitter, the free features, then the response noise.
SyntheticData synthetic_generate(const SyntheticSpec& spec);

/// Analytic population covariance of a generated row: within a group the
/// diagonal is 1 + sigma^2 and the off-diagonal 1, blocks are independent,
/// free features are identity.
Matrix population_covariance(const SyntheticSpec& spec);

} // namespace ksup
