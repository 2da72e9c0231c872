#include "ksup/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ksup/errors.hpp"
#include "ksup/norms.hpp"
#include "ksup/prox.hpp"
#include "ksup/rng.hpp"

namespace ksup {

std::string to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::ksupport: return "ksupport";
        case PenaltyKind::lasso: return "lasso";
        case PenaltyKind::elastic: return "elastic";
    }
    throw ValidationError("unknown penalty kind");
}

namespace {

void check_nonneg(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError(std::string(name) + " must be nonnegative and finite");
    }
}

} // namespace

Penalty Penalty::ksupport(int k, double lambda) {
    if (k < 1) {
        throw ValidationError("k must be at least 1");
    }
    check_nonneg(lambda, "lambda");
    Penalty p;
    p.kind = PenaltyKind::ksupport;
    p.k = k;
    p.lambda = lambda;
    return p;
}

Penalty Penalty::lasso(double lambda) {
    check_nonneg(lambda, "lambda");
    Penalty p;
    p.kind = PenaltyKind::lasso;
    p.lambda = lambda;
    return p;
}

Penalty Penalty::elastic(double lambda1, double lambda2) {
    check_nonneg(lambda1, "lambda1");
    check_nonneg(lambda2, "lambda2");
    Penalty p;
    p.kind = PenaltyKind::elastic;
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    return p;
}

double FitResult::best_objective() const {
    return *std::min_element(objective_trace.begin(), objective_trace.end());
}

double FitResult::initial_objective() const {
    return objective_trace.front();
}

double lipschitz_estimate(const Matrix& X) {
    if (X.size() == 0 || !X.allFinite()) {
        throw ValidationError("design matrix must be nonempty and finite");
    }
    if (X.isZero(0.0)) {
        throw ValidationError("design matrix is all zeros");
    }
    const Index d = X.cols();

    // Fixed-seed start: deterministic, and almost surely not orthogonal to
    // the dominant eigenvector.
    Rng rng(0x9E3779B97F4A7C15ull);
    Vector q(d);
    for (Index i = 0; i < d; ++i) {
        q[i] = rng.normal();
    }
    q.normalize();

    // ||X^T X q|| <= lambda_max for unit q, so the estimate approaches the
    // top eigenvalue from below; the 1.01 factor covers the residual gap.
    double lambda = 0.0;
    const int min_iters = 50;
    const int max_iters = 10000;
    for (int iter = 1; iter <= max_iters; ++iter) {
        Vector s = X.transpose() * (X * q);
        const double norm_s = s.norm();
        if (norm_s == 0.0) {
            // q landed in the null space; restart from a fresh direction.
            for (Index i = 0; i < d; ++i) {
                q[i] = rng.normal();
            }
            q.normalize();
            continue;
        }
        const double prev = lambda;
        lambda = norm_s;
        q = s / norm_s;
        if (iter >= min_iters &&
            std::abs(lambda - prev) <= 1e-8 * std::max(lambda, 1e-300)) {
            break;
        }
    }
    return 1.01 * lambda;
}

Vector squared_loss_grad(const Matrix& X, const Vector& y, const Vector& w) {
    if (X.rows() != y.size() || X.cols() != w.size()) {
        throw ValidationError("shape mismatch between X, y, and w");
    }
    return X.transpose() * (X * w - y);
}

double penalty_value(const Vector& w, const Penalty& penalty) {
    switch (penalty.kind) {
        case PenaltyKind::ksupport: {
            if (penalty.lambda == 0.0) {
                return 0.0;
            }
            const double nrm = ksup_norm(w, penalty.k).value;
            return 0.5 * penalty.lambda * nrm * nrm;
        }
        case PenaltyKind::lasso:
            return penalty.lambda * w.lpNorm<1>();
        case PenaltyKind::elastic:
            return penalty.lambda1 * w.lpNorm<1>() +
                   penalty.lambda2 * w.squaredNorm();
    }
    throw ValidationError("unknown penalty kind");
}

double objective_value(const Matrix& X, const Vector& y, const Vector& w,
                       const Penalty& penalty) {
    if (X.rows() != y.size() || X.cols() != w.size()) {
        throw ValidationError("shape mismatch between X, y, and w");
    }
    return 0.5 * (X * w - y).squaredNorm() + penalty_value(w, penalty);
}

FitResult fista(const GradFn& grad, const ProxFn& prox,
                const ObjectiveFn& objective, const Vector& w1, double L,
                const FitConfig& cfg) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ValidationError("L must be positive and finite");
    }
    if (cfg.max_iters < 1) {
        throw ValidationError("max_iters must be at least 1");
    }
    if (!(cfg.rel_tol > 0.0)) {
        throw ValidationError("rel_tol must be positive");
    }
    if (!w1.allFinite()) {
        throw ValidationError("starting point must be finite");
    }

    FitResult res;
    res.L_used = L;

    Vector w = w1;
    Vector alpha = w1;
    double theta = 1.0;

    double f = objective(w1);
    if (!std::isfinite(f)) {
        throw NumericError("objective not finite at the starting point");
    }
    res.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
    res.objective_trace.push_back(f);

    Vector best_w = w1;
    double best_f = f;
    int calm = 0; // consecutive iterations with a small relative change

    for (int t = 1; t <= cfg.max_iters; ++t) {
        res.iterations = t;
        Vector stepped = alpha - grad(alpha) / L;
        if (!stepped.allFinite()) {
            throw NumericError("fista diverged at iteration " + std::to_string(t));
        }
        Vector w_next = prox(stepped);
        const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        alpha = w_next + ((theta - 1.0) / theta_next) * (w_next - w);
        w = std::move(w_next);
        theta = theta_next;

        const double f_next = objective(w);
        if (!std::isfinite(f_next)) {
            throw NumericError("objective diverged at iteration " + std::to_string(t));
        }
        res.objective_trace.push_back(f_next);
        if (f_next < best_f) {
            best_f = f_next;
            best_w = w;
        }

        const double denom = std::max(std::abs(f), 1e-12);
        calm = std::abs(f_next - f) <= cfg.rel_tol * denom ? calm + 1 : 0;
        f = f_next;
        if (calm >= 5) {
            res.converged = true;
            break;
        }
    }

    res.w = std::move(best_w);
    return res;
}

FitResult fit(const Matrix& X, const Vector& y, const FitConfig& cfg) {
    if (X.rows() != y.size()) {
        throw ValidationError("X and y row counts differ");
    }
    if (X.rows() < 1 || X.cols() < 1) {
        throw ValidationError("empty design matrix");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw ValidationError("X and y must be finite");
    }
    const Index d = X.cols();
    const Penalty& pen = cfg.penalty;
    if (pen.kind == PenaltyKind::ksupport && (pen.k < 1 || pen.k > d)) {
        throw ValidationError("k out of range: k=" + std::to_string(pen.k) +
                              ", d=" + std::to_string(d));
    }
    if (cfg.step_L < 0.0 || !std::isfinite(cfg.step_L)) {
        throw ValidationError("step_L must be nonnegative");
    }

    const double L = cfg.step_L > 0.0 ? cfg.step_L : lipschitz_estimate(X);

    const ProxFn identity = [](const Vector& x) { return x; };
    ProxFn prox = identity;
    switch (pen.kind) {
        case PenaltyKind::ksupport:
            if (pen.lambda > 0.0) {
                const double beta = pen.lambda / L;
                const int k = pen.k;
                prox = [k, beta](const Vector& x) {
                    return prox_ksup_sq(x, k, beta);
                };
            }
            break;
        case PenaltyKind::lasso:
            if (pen.lambda > 0.0) {
                const double tau = pen.lambda / L;
                prox = [tau](const Vector& x) { return prox_l1(x, tau); };
            }
            break;
        case PenaltyKind::elastic:
            if (pen.lambda1 > 0.0 || pen.lambda2 > 0.0) {
                const double tau1 = pen.lambda1 / L;
                const double tau2 = pen.lambda2 / L;
                prox = [tau1, tau2](const Vector& x) {
                    return prox_elastic(x, tau1, tau2);
                };
            }
            break;
    }

    const GradFn grad = [&X, &y](const Vector& w) {
        return squared_loss_grad(X, y, w);
    };
    const ObjectiveFn objective = [&X, &y, &pen](const Vector& w) {
        return objective_value(X, y, w, pen);
    };

    return fista(grad, prox, objective, Vector::Zero(d), L, cfg);
}

} // namespace ksup
