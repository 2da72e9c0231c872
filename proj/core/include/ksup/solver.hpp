#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ksup/data.hpp"
#include "ksup/types.hpp"

namespace ksup {

enum class PenaltyKind { ksupport, lasso, elastic };

std::string to_string(PenaltyKind kind);

/// Regularizer of the composite objective 1/2 ||Xw - y||^2 + penalty(w):
///   ksupport: (lambda/2) (||w||_k^sp)^2
///   lasso:    lambda ||w||_1
///   elastic:  lambda1 ||w||_1 + lambda2 ||w||_2^2
struct Penalty {
    PenaltyKind kind = PenaltyKind::lasso;
    int k = 1;
    double lambda = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    static Penalty ksupport(int k, double lambda);
    static Penalty lasso(double lambda);
    static Penalty elastic(double lambda1, double lambda2);
};

struct FitConfig {
    Penalty penalty;
    int max_iters = 50000;
    /// Stop once the relative objective change stays below rel_tol for 5
    /// consecutive iterations.
    double rel_tol = 1e-8;
    /// Gradient Lipschitz constant; 0 means estimate from the data.
    double step_L = 0.0;
};

struct FitResult {
    Vector w;                           ///< best-objective iterate
    std::vector<double> objective_trace; ///< F(w_t) for every iterate, w_1 first
    int iterations = 0;                 ///< prox steps performed
    bool converged = false;
    double L_used = 0.0;

    double best_objective() const;
    double initial_objective() const;
};

/// Upper bound on the largest eigenvalue of X^T X: power iteration from a
/// fixed seeded start (at least 50 iterations, until the estimate settles to
/// 1e-8 relative), times a 1.01 safety factor. Throws on an all-zero matrix.
double lipschitz_estimate(const Matrix& X);

/// Gradient of 1/2 ||Xw - y||^2, that is X^T (Xw - y).
Vector squared_loss_grad(const Matrix& X, const Vector& y, const Vector& w);

double penalty_value(const Vector& w, const Penalty& penalty);

/// 1/2 ||Xw - y||^2 + penalty(w).
double objective_value(const Matrix& X, const Vector& y, const Vector& w,
                       const Penalty& penalty);

using GradFn = std::function<Vector(const Vector&)>;
using ProxFn = std::function<Vector(const Vector&)>;
using ObjectiveFn = std::function<double(const Vector&)>;

/// Accelerated proximal gradient. Momentum follows
///   theta_1 = 1,  theta_{t+1} = (1 + sqrt(1 + 4 theta_t^2)) / 2,
///   w_{t+1} = prox(alpha_t - grad(alpha_t)/L),
///   alpha_{t+1} = w_{t+1} + ((theta_t - 1)/theta_{t+1}) (w_{t+1} - w_t),
/// with alpha_1 = w_1. The step from alpha_t to w_{t+1} already includes the
/// 1/L factor; `prox` must apply the penalty prox at weight penalty/L.
///
/// The method is not monotone, so the returned iterate is the best-objective
/// w_t seen, while objective_trace records the raw sequence. A non-finite
/// objective raises NumericError naming the iteration.
FitResult fista(const GradFn& grad, const ProxFn& prox,
                const ObjectiveFn& objective, const Vector& w1, double L,
                const FitConfig& cfg);

/// Solves 1/2 ||Xw - y||^2 + penalty(w) from w_1 = 0, dispatching the
/// penalty-matched prox into fista. step_L = 0 invokes lipschitz_estimate.
FitResult fit(const Matrix& X, const Vector& y, const FitConfig& cfg);

inline FitResult fit(const Dataset& data, const FitConfig& cfg) {
    return fit(data.X, data.y, cfg);
}

} // namespace ksup
