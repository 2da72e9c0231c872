#pragma once

#include "ksup/types.hpp"

namespace ksup {

/// Split located by the prox search, in the sorted-magnitude frame
/// (1-based indices as in the defining conditions).
struct ProxSearchResult {
    int r = 0;        ///< in {0, ..., k-1}
    int ell = 0;      ///< in {k, ..., d}
    double t_rl = 0.0; ///< sum of sorted magnitudes over positions k-r .. ell
};

/// Proximity operator of the squared k-support norm:
///   argmin_q 1/2 ||q - v||^2 + (beta/2) (||q||_k^sp)^2,   beta > 0.
///
/// Sorts |v|, finds the unique (r, ell) split with running prefix sums,
/// applies the three-piece shrinkage (scale the head by L/(L+1) with
/// L = 1/beta, subtract a constant from the middle, zero the tail), and
/// restores the order and signs of v. O(d(k + log d)).
Vector prox_ksup_sq(const Vector& v, int k, double beta);

/// Same, also reporting the split that was found.
Vector prox_ksup_sq(const Vector& v, int k, double beta,
                    ProxSearchResult& search);

/// Soft-thresholding, the prox of tau * ||.||_1: sign(v) max(|v| - tau, 0).
Vector prox_l1(const Vector& v, double tau);

/// Prox of tau1 * ||.||_1 + tau2 * ||.||_2^2: soft-threshold at tau1, then
/// scale by 1 / (1 + 2 tau2). tau1, tau2 >= 0, not both zero.
Vector prox_elastic(const Vector& v, double tau1, double tau2);

} // namespace ksup
