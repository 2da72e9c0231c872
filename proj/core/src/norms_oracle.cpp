#include <algorithm>
#include <cmath>
#include <vector>

#include "ksup/errors.hpp"
#include "ksup/norms.hpp"

// Grid maximization of f(alpha) = sum_i alpha_i z_i - 1/2 sum_{i<=k} alpha_i^2
// over the cone alpha_1 >= ... >= alpha_d >= 0, where z is |w| sorted
// nonincreasing; the maximum equals half the squared k-support norm. Kept
// deliberately free of the machinery in norms.cpp so the two routes stay
// independent.

namespace ksup {

namespace {

// Enumerates monotone tuples with alpha_i drawn from per-coordinate value
// lists, accumulating the objective along the way.
void search(const std::vector<std::vector<double>>& values,
            const std::vector<double>& z, int k, std::size_t depth,
            double upper, double partial, std::vector<double>& alpha,
            double& best, std::vector<double>& best_alpha) {
    if (depth == values.size()) {
        if (partial > best) {
            best = partial;
            best_alpha = alpha;
        }
        return;
    }
    for (double v : values[depth]) {
        if (v < 0.0 || v > upper) {
            continue;
        }
        double f = partial + v * z[depth];
        if (static_cast<int>(depth) < k) {
            f -= 0.5 * v * v;
        }
        alpha[depth] = v;
        search(values, z, k, depth + 1, v, f, alpha, best, best_alpha);
    }
}

} // namespace

double ksup_norm_oracle(const Vector& w, int k) {
    const Index d = w.size();
    if (d < 1 || !w.allFinite()) {
        throw ValidationError("vector must be nonempty and finite");
    }
    if (d > 4) {
        throw ValidationError("ksup_norm_oracle is exponential in d; d <= 4 only");
    }
    if (k < 1 || k > d) {
        throw ValidationError("k out of range");
    }

    std::vector<double> z(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        z[static_cast<std::size_t>(i)] = std::abs(w[i]);
    }
    std::sort(z.begin(), z.end(), std::greater<double>());

    double box = 0.0;
    for (double zi : z) {
        box += zi;
    }
    if (box == 0.0) {
        return 0.0;
    }

    // Coarse pass: common grid over [0, box].
    const int coarse_steps = 32;
    std::vector<double> coarse(coarse_steps + 1);
    for (int j = 0; j <= coarse_steps; ++j) {
        coarse[static_cast<std::size_t>(j)] = box * j / coarse_steps;
    }
    std::vector<std::vector<double>> grids(static_cast<std::size_t>(d), coarse);
    std::vector<double> alpha(static_cast<std::size_t>(d), 0.0);
    std::vector<double> best_alpha(static_cast<std::size_t>(d), 0.0);
    double best = 0.0;
    search(grids, z, k, 0, box, 0.0, alpha, best, best_alpha);

    // One refinement pass around the coarse optimum; final step is
    // box/1024. Coordinates tied at the coarse stage share a center, hence
    // a grid, so they can stay tied exactly.
    const double half = box / coarse_steps;
    const int fine_steps = 64;
    for (std::size_t i = 0; i < grids.size(); ++i) {
        std::vector<double> g(fine_steps + 1);
        for (int j = 0; j <= fine_steps; ++j) {
            g[static_cast<std::size_t>(j)] =
                best_alpha[i] - half + 2.0 * half * j / fine_steps;
        }
        grids[i] = std::move(g);
    }
    search(grids, z, k, 0, box + half, 0.0, alpha, best, best_alpha);

    return std::sqrt(2.0 * best);
}

} // namespace ksup
