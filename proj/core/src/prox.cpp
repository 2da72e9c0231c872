#include "ksup/prox.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "ksup/errors.hpp"
#include "ksup/norms.hpp"

namespace ksup {

namespace {

void check_input(const Vector& v) {
    if (v.size() < 1) {
        throw ValidationError("vector must have at least one entry");
    }
    if (!v.allFinite()) {
        throw ValidationError("vector entries must be finite");
    }
}

} // namespace

Vector prox_ksup_sq(const Vector& v, int k, double beta) {
    ProxSearchResult search;
    return prox_ksup_sq(v, k, beta, search);
}

Vector prox_ksup_sq(const Vector& v, int k, double beta,
                    ProxSearchResult& search) {
    check_input(v);
    const Index d = v.size();
    if (k < 1 || k > d) {
        throw ValidationError("k out of range: k=" + std::to_string(k) +
                              ", d=" + std::to_string(d));
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ValidationError("beta must be positive and finite");
    }
    // The defining conditions are written for the prox of
    // (1/2L)(||.||_k^sp)^2, so L = 1/beta.
    const double L = 1.0 / beta;

    const SortedAbsView view = sort_abs_desc(v);
    const Vector& z = view.magnitudes;

    // Fewer than k nonzeros (v = 0 included): every candidate q is k-sparse,
    // where the squared k-support norm is the squared l2 norm, so the prox
    // is plain ridge shrinkage. The split conditions have no solution here:
    // they require z_ell > T/denom >= 0 at some ell >= k, but z_k = 0.
    if (z[k - 1] == 0.0) {
        search = ProxSearchResult{0, k, 0.0};
        return v * (L / (L + 1.0));
    }

    // T_{r,l} accumulates by running window sums rather than prefix-sum
    // differences: the conditions hold with exact equality at (r, l) = (0, k)
    // whenever that is the answer (T is then the single term z_k), and
    // cancellation in a prefix difference can misround the boundary and
    // leave no valid pair.
    bool found = false;
    int r_found = 0;
    int ell_found = 0;
    double t_found = 0.0;
    double shrink_found = 0.0;

    double t_start = 0.0; // T_{r,k}: window positions k-r .. k (1-based)
    for (int r = 0; r < k && !found; ++r) {
        t_start = r == 0 ? z[k - 1] : t_start + z[k - r - 1];
        double t = t_start;
        for (int ell = k; ell <= d; ++ell) {
            const double denom = (ell - k) + (L + 1.0) * r + L + 1.0;
            const double shrink = t / denom;
            // z_0 = +inf and z_{d+1} = -inf sentinels as guard branches.
            const bool c1_left = (r == k - 1) || (z[k - r - 2] / (L + 1.0) > shrink);
            const bool c1_right = shrink >= z[k - r - 1] / (L + 1.0);
            const bool c2_left = z[ell - 1] > shrink;
            const bool c2_right = (ell == d) || (shrink >= z[ell]);
            if (c1_left && c1_right && c2_left && c2_right) {
                found = true;
                r_found = r;
                ell_found = ell;
                t_found = t;
                shrink_found = shrink;
                break;
            }
            if (ell < d) {
                t += z[ell];
            }
        }
    }
    if (!found) {
        throw NumericError("prox_ksup_sq: no valid (r, ell) split; input corrupted");
    }

#ifndef NDEBUG
    // The split is expected to be unique; keep scanning in debug builds.
    t_start = 0.0;
    for (int r = 0; r < k; ++r) {
        t_start = r == 0 ? z[k - 1] : t_start + z[k - r - 1];
        double t = t_start;
        for (int ell = k; ell <= d; ++ell) {
            const double denom = (ell - k) + (L + 1.0) * r + L + 1.0;
            const double shrink = t / denom;
            const bool c1_left = (r == k - 1) || (z[k - r - 2] / (L + 1.0) > shrink);
            const bool c1_right = shrink >= z[k - r - 1] / (L + 1.0);
            const bool c2_left = z[ell - 1] > shrink;
            const bool c2_right = (ell == d) || (shrink >= z[ell]);
            assert(!(c1_left && c1_right && c2_left && c2_right) ||
                   (r == r_found && ell == ell_found));
            if (ell < d) {
                t += z[ell];
            }
        }
    }
#endif

    Vector q(d);
    const double head_scale = L / (L + 1.0);
    for (Index i = 0; i < d; ++i) {
        const int pos = static_cast<int>(i) + 1; // 1-based
        if (pos <= k - r_found - 1) {
            q[i] = head_scale * z[i];
        } else if (pos <= ell_found) {
            q[i] = z[i] - shrink_found;
        } else {
            q[i] = 0.0;
        }
    }

    search = ProxSearchResult{r_found, ell_found, t_found};
    return view.restore(q);
}

Vector prox_l1(const Vector& v, double tau) {
    check_input(v);
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValidationError("tau must be positive and finite");
    }
    return v.array().sign() * (v.array().abs() - tau).max(0.0);
}

Vector prox_elastic(const Vector& v, double tau1, double tau2) {
    check_input(v);
    if (!(tau1 >= 0.0) || !(tau2 >= 0.0) || !std::isfinite(tau1) ||
        !std::isfinite(tau2)) {
        throw ValidationError("tau1 and tau2 must be nonnegative and finite");
    }
    if (tau1 == 0.0 && tau2 == 0.0) {
        throw ValidationError("tau1 and tau2 must not both be zero");
    }
    const double scale = 1.0 / (1.0 + 2.0 * tau2);
    if (tau1 == 0.0) {
        return scale * v;
    }
    return scale * (v.array().sign() * (v.array().abs() - tau1).max(0.0)).matrix();
}

} // namespace ksup
