#include "ksup/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ksup/errors.hpp"

namespace ksup {

namespace {

void check_vector(const Vector& w) {
    if (w.size() < 1) {
        throw ValidationError("vector must have at least one entry");
    }
    if (!w.allFinite()) {
        throw ValidationError("vector entries must be finite");
    }
}

void check_k(int k, Index d) {
    if (k < 1 || k > d) {
        throw ValidationError("k out of range: k=" + std::to_string(k) +
                              ", d=" + std::to_string(d));
    }
}

void check_k_real(double k, Index d) {
    if (!(k >= 1.0) || !(k <= static_cast<double>(d))) {
        throw ValidationError("k out of range: k must lie in [1, d]");
    }
}

} // namespace

Vector SortedAbsView::restore(const Vector& sorted_values) const {
    Vector out(sorted_values.size());
    for (Index i = 0; i < sorted_values.size(); ++i) {
        out[order[static_cast<std::size_t>(i)]] = signs[i] * sorted_values[i];
    }
    return out;
}

SortedAbsView sort_abs_desc(const Vector& w) {
    check_vector(w);
    const Index d = w.size();
    SortedAbsView view;
    view.order.resize(static_cast<std::size_t>(d));
    std::iota(view.order.begin(), view.order.end(), Index{0});
    std::stable_sort(view.order.begin(), view.order.end(),
                     [&w](Index a, Index b) {
                         return std::abs(w[a]) > std::abs(w[b]);
                     });
    view.magnitudes.resize(d);
    view.signs.resize(d);
    for (Index i = 0; i < d; ++i) {
        const double x = w[view.order[static_cast<std::size_t>(i)]];
        view.magnitudes[i] = std::abs(x);
        view.signs[i] = x < 0.0 ? -1.0 : 1.0;
    }
    return view;
}

NormBreakdown ksup_norm(const Vector& w, int k) {
    check_vector(w);
    const Index d = w.size();
    check_k(k, d);

    const SortedAbsView view = sort_abs_desc(w);
    const Vector& z = view.magnitudes;

    // suffix[i] = z[i] + ... + z[d-1]
    Vector suffix(d + 1);
    suffix[d] = 0.0;
    for (Index i = d - 1; i >= 0; --i) {
        suffix[i] = z[i] + suffix[i + 1];
    }

    // head_energy tracks sum of z_i^2 over the first k-r-1 entries as r
    // descends; start at r = 0.
    double head_energy = 0.0;
    for (Index i = 0; i < k - 1; ++i) {
        head_energy += z[i] * z[i];
    }

    for (int r = 0; r < k; ++r) {
        const double tail = suffix[k - r - 1]; // 1-based positions k-r .. d
        const double avg = tail / (r + 1);
        // z_(0) = +inf sentinel: the left inequality holds vacuously at
        // r = k-1 (guard branch, never evaluated in arithmetic).
        const bool left = (r == k - 1) || (z[k - r - 2] > avg);
        const bool right = avg >= z[k - r - 1];
        if (left && right) {
            NormBreakdown out;
            out.r = r;
            out.head_energy = head_energy;
            out.tail_sum = tail;
            out.value = std::sqrt(head_energy + tail * avg);
            return out;
        }
        if (r + 1 < k) {
            head_energy -= z[k - r - 2] * z[k - r - 2];
        }
    }
    throw NumericError("ksup_norm: no valid split found; input corrupted");
}

double ksup_dual_norm(const Vector& u, int k) {
    check_vector(u);
    const Index d = u.size();
    check_k(k, d);

    std::vector<double> mags(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        mags[static_cast<std::size_t>(i)] = std::abs(u[i]);
    }
    std::nth_element(mags.begin(), mags.begin() + (k - 1), mags.end(),
                     std::greater<double>());
    // Canonical summation order (nonincreasing) keeps the result independent
    // of the input permutation.
    std::sort(mags.begin(), mags.begin() + k, std::greater<double>());
    double sq = 0.0;
    for (int i = 0; i < k; ++i) {
        sq += mags[static_cast<std::size_t>(i)] * mags[static_cast<std::size_t>(i)];
    }
    return std::sqrt(sq);
}

double elastic_norm(const Vector& w, double k) {
    check_vector(w);
    check_k_real(k, w.size());
    return std::max(w.norm(), w.lpNorm<1>() / std::sqrt(k));
}

double elastic_dual_norm(const Vector& u, double k, double tol) {
    check_vector(u);
    const Index d = u.size();
    check_k_real(k, d);
    if (!(tol > 0.0)) {
        throw ValidationError("tol must be positive");
    }

    std::vector<double> mags(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        mags[static_cast<std::size_t>(i)] = std::abs(u[i]);
    }
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    if (mags.front() == 0.0) {
        return 0.0;
    }

    const double sqrt_k = std::sqrt(k);
    // phi(t) = ||soft(u, t)||_2 + sqrt(k) t; mags are sorted descending so
    // only a prefix is active.
    const auto phi = [&](double t) {
        double sq = 0.0;
        for (double m : mags) {
            if (m <= t) {
                break;
            }
            const double s = m - t;
            sq += s * s;
        }
        return std::sqrt(sq) + sqrt_k * t;
    };

    // Bracket the minimum of the convex phi over its breakpoints
    // (0 and the distinct magnitudes, ascending). phi sampled at ascending
    // breakpoints is unimodal, so a ternary index search locates the
    // bracketing pair in O(log d) evaluations.
    std::vector<double> brk;
    brk.reserve(mags.size() + 1);
    brk.push_back(0.0);
    for (auto it = mags.rbegin(); it != mags.rend(); ++it) {
        if (*it > brk.back()) {
            brk.push_back(*it);
        }
    }
    std::size_t ilo = 0;
    std::size_t ihi = brk.size() - 1;
    while (ihi - ilo > 2) {
        const std::size_t m1 = ilo + (ihi - ilo) / 3;
        const std::size_t m2 = ihi - (ihi - ilo) / 3;
        if (phi(brk[m1]) < phi(brk[m2])) {
            ihi = m2;
        } else {
            ilo = m1;
        }
    }
    std::size_t best_i = ilo;
    double best_val = phi(brk[ilo]);
    for (std::size_t i = ilo + 1; i <= ihi; ++i) {
        const double v = phi(brk[i]);
        if (v < best_val) {
            best_val = v;
            best_i = i;
        }
    }
    double lo = brk[best_i > 0 ? best_i - 1 : 0];
    double hi = brk[std::min(best_i + 1, brk.size() - 1)];

    // |phi'| <= sqrt(d) + sqrt(k): interval search until the value is
    // pinned to tol.
    const double lipschitz = std::sqrt(static_cast<double>(d)) + sqrt_k;
    for (int iter = 0; iter < 500 && (hi - lo) * lipschitz > 0.5 * tol; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        const double f1 = phi(m1);
        const double f2 = phi(m2);
        best_val = std::min(best_val, std::min(f1, f2));
        if (f1 < f2) {
            hi = m2;
        } else if (f2 < f1) {
            lo = m1;
        } else {
            lo = m1;
            hi = m2;
        }
    }
    best_val = std::min(best_val, phi(0.5 * (lo + hi)));
    return best_val;
}

} // namespace ksup
