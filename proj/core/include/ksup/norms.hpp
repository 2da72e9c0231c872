#pragma once

#include <vector>

#include "ksup/types.hpp"

// The k-support norm ||w||_k^sp is the gauge of the convex hull of k-sparse
// vectors with unit l2 norm. It interpolates between l1 (k = 1) and l2
// (k = d). Its dual is the l2 norm of the k largest-magnitude entries. The
// elastic-net "max" norm max{||w||_2, ||w||_1 / sqrt(k)} sandwiches it within
// a factor of sqrt(2).

namespace ksup {

/// Magnitudes of a vector in nonincreasing order, with enough bookkeeping to
/// restore the original order and signs exactly.
struct SortedAbsView {
    Vector magnitudes;        ///< |w| sorted nonincreasing
    std::vector<Index> order; ///< order[i] = original position of magnitudes[i]
    Vector signs;             ///< sign of w[order[i]], sign(0) = +1

    /// Maps a vector living in the sorted frame back to the original order
    /// and signs. restore(magnitudes) reconstructs the input exactly.
    Vector restore(const Vector& sorted_values) const;
};

/// Sorts |w| nonincreasing. Ties break by ascending original index (stable).
SortedAbsView sort_abs_desc(const Vector& w);

/// Value of the k-support norm together with the split that produced it.
///
/// The norm equals sqrt(head_energy + tail_sum^2 / (r + 1)) where
/// head_energy sums the squared magnitudes strictly above the split index
/// k - r - 1 and tail_sum sums the magnitudes from there down. r is the
/// unique integer in {0, ..., k-1} with
///   |w|_(k-r-1) > tail_sum / (r+1) >= |w|_(k-r)     (1-based, |w|_(0) = +inf)
struct NormBreakdown {
    double value = 0.0;
    int r = 0;
    double head_energy = 0.0;
    double tail_sum = 0.0;
};

/// k-support norm of w, 1 <= k <= d integer. O(d log d).
/// Throws ValidationError on bad k or non-finite input, NumericError if no
/// valid split exists (impossible for finite inputs).
NormBreakdown ksup_norm(const Vector& w, int k);

/// Dual of the k-support norm: l2 norm of the k largest |u| entries.
/// Partial selection, O(d + k log k).
double ksup_dual_norm(const Vector& u, int k);

/// Elastic-net norm max{||w||_2, ||w||_1 / sqrt(k)}; k real in [1, d].
double elastic_norm(const Vector& w, double k);

/// Dual of the elastic-net norm,
///   inf_a ||a||_2 + sqrt(k) * ||u - a||_inf.
/// For a fixed threshold t the inner optimum is coordinatewise
/// soft-thresholding of u at t, so the problem reduces to minimizing the
/// convex scalar function
///   phi(t) = ||soft(u, t)||_2 + sqrt(k) * t,   t in [0, max|u|],
/// which is located to absolute accuracy `tol` by bracketing over the
/// breakpoints (the sorted magnitudes) plus interval search.
double elastic_dual_norm(const Vector& u, double k, double tol = 1e-10);

/// Independent check of ksup_norm: dense grid maximization of
///   sum_i alpha_i |w|_(i) - 1/2 sum_{i<=k} alpha_i^2
/// over the cone alpha_1 >= ... >= alpha_d >= 0 (whose maximum is half the
/// squared norm), with one local refinement pass. Exponential in d; rejects
/// d > 4. Test support only -- never used by the other operations.
double ksup_norm_oracle(const Vector& w, int k);

} // namespace ksup
