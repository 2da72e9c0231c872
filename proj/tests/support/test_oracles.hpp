#pragma once

// Independent reference routes used by the tests: brute-force dual
// enumeration, a lattice minimizer for the prox objective, dense
// eigendecomposition, and finite differences. None of these share code with
// the implementation paths they check.

#include "ksup/rng.hpp"
#include "ksup/types.hpp"

namespace ksup::testing {

/// Max over all C(d, k) index subsets of the subset l2 norm; the summation
/// order matches ksup_dual_norm so agreement is exact. d <= 20.
double dual_brute_force(const Vector& u, int k);

/// Multiscale lattice minimizer of
///   1/2 ||q - v||^2 + (beta/2) (||q||_k^sp)^2,  d <= 4.
/// Accurate to a few 1e-5 per coordinate for beta up to about 1.5.
Vector prox_lattice_oracle(const Vector& v, int k, double beta);

double prox_objective(const Vector& q, const Vector& v, int k, double beta);

/// Central finite differences of 1/2 ||Xw - y||^2.
Vector fd_gradient(const Matrix& X, const Vector& y, const Vector& w, double h);

/// Largest eigenvalue of the symmetric matrix G by dense eigendecomposition.
double max_eigenvalue(const Matrix& G);

Vector random_vector(Rng& rng, Index d, double scale = 1.0);

/// Random vector with repeated magnitudes and zeros mixed in, to exercise
/// tie handling.
Vector random_tied_vector(Rng& rng, Index d);

Matrix random_matrix(Rng& rng, Index rows, Index cols, double scale = 1.0);

} // namespace ksup::testing
