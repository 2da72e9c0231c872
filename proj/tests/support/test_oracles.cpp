#include "support/test_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ksup/norms.hpp"

namespace ksup::testing {

double dual_brute_force(const Vector& u, int k) {
    const int d = static_cast<int>(u.size());
    if (d > 20 || k < 1 || k > d) {
        throw std::invalid_argument("dual_brute_force: bad arguments");
    }
    std::vector<int> comb(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        comb[static_cast<std::size_t>(i)] = i;
    }
    double best = 0.0;
    std::vector<double> mags(static_cast<std::size_t>(k));
    while (true) {
        for (int i = 0; i < k; ++i) {
            mags[static_cast<std::size_t>(i)] =
                std::abs(u[comb[static_cast<std::size_t>(i)]]);
        }
        std::sort(mags.begin(), mags.end(), std::greater<double>());
        double sq = 0.0;
        for (double m : mags) {
            sq += m * m;
        }
        best = std::max(best, std::sqrt(sq));

        // next combination
        int pos = k - 1;
        while (pos >= 0 &&
               comb[static_cast<std::size_t>(pos)] == d - k + pos) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++comb[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i) {
            comb[static_cast<std::size_t>(i)] =
                comb[static_cast<std::size_t>(i - 1)] + 1;
        }
    }
    return best;
}

double prox_objective(const Vector& q, const Vector& v, int k, double beta) {
    const double nrm = ksup_norm(q, k).value;
    return 0.5 * (q - v).squaredNorm() + 0.5 * beta * nrm * nrm;
}

Vector prox_lattice_oracle(const Vector& v, int k, double beta) {
    const Index d = v.size();
    if (d > 4) {
        throw std::invalid_argument("prox_lattice_oracle: d <= 4 only");
    }
    constexpr int pts = 9;
    double half = std::max(1.0, v.cwiseAbs().maxCoeff());
    Vector center = v;
    Vector best = v;
    double best_f = prox_objective(v, v, k, beta);

    Vector q(d);
    std::function<void(Index)> enumerate = [&](Index dim) {
        if (dim == d) {
            const double f = prox_objective(q, v, k, beta);
            if (f < best_f) {
                best_f = f;
                best = q;
            }
            return;
        }
        for (int j = 0; j < pts; ++j) {
            q[dim] = center[dim] - half + 2.0 * half * j / (pts - 1);
            enumerate(dim + 1);
        }
    };

    // The objective is 1-strongly convex, so the grid best stays within the
    // next (shrunken) window of the true minimizer.
    for (int level = 0; level < 40; ++level) {
        enumerate(0);
        center = best;
        half *= 0.75;
    }
    return best;
}

Vector fd_gradient(const Matrix& X, const Vector& y, const Vector& w,
                   double h) {
    const auto loss = [&](const Vector& ww) {
        return 0.5 * (X * ww - y).squaredNorm();
    };
    Vector g(w.size());
    Vector probe = w;
    for (Index i = 0; i < w.size(); ++i) {
        probe[i] = w[i] + h;
        const double up = loss(probe);
        probe[i] = w[i] - h;
        const double down = loss(probe);
        probe[i] = w[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

double max_eigenvalue(const Matrix& G) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(G);
    return solver.eigenvalues().maxCoeff();
}

Vector random_vector(Rng& rng, Index d, double scale) {
    Vector v(d);
    for (Index i = 0; i < d; ++i) {
        v[i] = scale * rng.normal();
    }
    return v;
}

Vector random_tied_vector(Rng& rng, Index d) {
    Vector v(d);
    for (Index i = 0; i < d; ++i) {
        const double roll = rng.uniform();
        if (roll < 0.25) {
            v[i] = 0.0;
        } else if (roll < 0.6) {
            // small integers over random signs produce repeated magnitudes
            v[i] = (rng.uniform() < 0.5 ? -1.0 : 1.0) *
                   static_cast<double>(1 + rng.below(3));
        } else {
            v[i] = rng.normal();
        }
    }
    return v;
}

Matrix random_matrix(Rng& rng, Index rows, Index cols, double scale) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = scale * rng.normal();
        }
    }
    return m;
}

} // namespace ksup::testing
