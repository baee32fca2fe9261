#include "ulab/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>

#include "ulab/errors.hpp"

namespace ulab::doubling {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double FiniteMetricSpace::dist_to_gamma(std::size_t i) const {
    double best = kInf;
    for (std::size_t g : gamma) best = std::min(best, d(i, g));
    return best;
}

FiniteMetricSpace make_space(std::size_t n, std::vector<double> dist,
                             std::vector<std::size_t> sigma,
                             std::vector<std::size_t> d_set) {
    if (dist.size() != n * n)
        throw PreconditionError("make_space: distance matrix must be n x n");
    FiniteMetricSpace sp;
    sp.n = n;
    sp.dist = std::move(dist);
    for (std::size_t i = 0; i < n; ++i) {
        if (sp.d(i, i) != 0.0)
            throw PreconditionError("make_space: nonzero diagonal entry");
        for (std::size_t j = 0; j < n; ++j) {
            double v = sp.d(i, j);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw PreconditionError("make_space: distances must be finite and nonnegative");
            if (v != sp.d(j, i))
                throw PreconditionError("make_space: distance matrix not symmetric");
            if (i != j && v == 0.0)
                throw PreconditionError("make_space: distinct points at distance 0");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double dij = sp.d(i, j);
            for (std::size_t l = 0; l < n; ++l)
                if (dij > sp.d(i, l) + sp.d(l, j) + 1e-12 * dij)
                    throw PreconditionError("make_space: triangle inequality violated");
        }

    if (d_set.empty()) throw PreconditionError("make_space: D must be nonempty");
    std::sort(sigma.begin(), sigma.end());
    std::sort(d_set.begin(), d_set.end());
    for (std::size_t i : sigma)
        if (i >= n) throw PreconditionError("make_space: Sigma index out of range");
    if (!std::includes(sigma.begin(), sigma.end(), d_set.begin(), d_set.end()))
        throw PreconditionError("make_space: D must be a subset of Sigma");
    std::set_difference(sigma.begin(), sigma.end(), d_set.begin(), d_set.end(),
                        std::back_inserter(sp.gamma));
    sp.sigma = std::move(sigma);
    sp.d_set = std::move(d_set);
    return sp;
}

namespace {

std::size_t d_index(const FiniteMetricSpace& sp, std::size_t point) {
    auto it = std::lower_bound(sp.d_set.begin(), sp.d_set.end(), point);
    if (it == sp.d_set.end() || *it != point)
        throw PreconditionError("doubling_select: point not in D");
    return it - sp.d_set.begin();
}

}  // namespace

SelectResult doubling_select(const FiniteMetricSpace& space,
                             const std::vector<double>& M, double k,
                             std::size_t y) {
    if (M.size() != space.d_set.size())
        throw PreconditionError("doubling_select: M must have one value per point of D");
    for (double m : M)
        if (!(m > 0.0) || !std::isfinite(m))
            throw PreconditionError("doubling_select: M values must be positive and finite");
    if (!(k > 0.0)) throw PreconditionError("doubling_select: k must be positive");
    double My = M[d_index(space, y)];
    double prod = My * space.dist_to_gamma(y);
    if (!(prod > 2 * k))
        throw PreconditionError(
            "doubling_select: precondition M(y) dist(y,Gamma) > 2k fails, product = " +
            std::to_string(prod));

    SelectResult res;
    std::size_t x = y;
    res.trace.push_back(x);
    for (;;) {
        double Mx = M[d_index(space, x)];
        // The invariant survives every hop: d(x_{j+1}, x_j) <= k/M(x_j) and
        // M doubles, so M(x_{j+1}) dist(x_{j+1}, Gamma) > 2k still holds.
        if (!(Mx * space.dist_to_gamma(x) > 2 * k))
            throw NumericError("doubling_select: loop invariant broken (bug)");
        double radius = k / Mx;
        std::size_t best = x;
        double best_M = 2 * Mx;  // looking for a strict doubler in the ball
        for (std::size_t di = 0; di < space.d_set.size(); ++di) {
            std::size_t z = space.d_set[di];
            if (space.d(z, x) <= radius && M[di] > best_M) {
                best = z;
                best_M = M[di];
            }
        }
        if (best == x) break;
        x = best;
        res.trace.push_back(x);
    }
    res.x = x;
    return res;
}

bool check_conclusions(const FiniteMetricSpace& space,
                       const std::vector<double>& M, double k, std::size_t y,
                       std::size_t x) {
    double Mx = M[d_index(space, x)];
    double My = M[d_index(space, y)];
    if (!(Mx * space.dist_to_gamma(x) > 2 * k)) return false;  // (a)
    if (!(Mx >= My)) return false;                             // (b)
    double radius = k / Mx;
    for (std::size_t di = 0; di < space.d_set.size(); ++di) {  // (c)
        if (space.d(space.d_set[di], x) <= radius && M[di] > 2 * Mx) return false;
    }
    return true;
}

}  // namespace ulab::doubling
