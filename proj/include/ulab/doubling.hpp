#pragma once

// Doubling lemma on finite metric spaces: given M: D -> (0,inf) and a point y
// with M(y) dist(y, Gamma) > 2k, select x in D with
//   (a) M(x) dist(x, Gamma) > 2k,
//   (b) M(x) >= M(y),
//   (c) M(z) <= 2 M(x) for all z in D with d(z,x) <= k/M(x).

#include <cstddef>
#include <vector>

namespace ulab::doubling {

struct FiniteMetricSpace {
    std::size_t n = 0;
    std::vector<double> dist;        // row-major n x n
    std::vector<std::size_t> sigma;  // index set Sigma
    std::vector<std::size_t> d_set;  // D subset of Sigma, nonempty
    std::vector<std::size_t> gamma;  // Sigma \ D, derived at construction

    double d(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
    // dist(i, Gamma); +inf when Gamma is empty.
    double dist_to_gamma(std::size_t i) const;
};

// Validates symmetry, nonnegativity, identity, triangle inequality, and the
// set inclusions. Throws PreconditionError on violation.
FiniteMetricSpace make_space(std::size_t n, std::vector<double> dist,
                             std::vector<std::size_t> sigma,
                             std::vector<std::size_t> d_set);

struct SelectResult {
    std::size_t x = 0;
    std::vector<std::size_t> trace;  // x_0 = y, ..., x_final
};

// M holds one positive value per element of space.d_set (same order).
SelectResult doubling_select(const FiniteMetricSpace& space,
                             const std::vector<double>& M, double k,
                             std::size_t y);

// Exhaustive check of conclusions (a)-(c); returns true iff all hold.
bool check_conclusions(const FiniteMetricSpace& space,
                       const std::vector<double>& M, double k, std::size_t y,
                       std::size_t x);

}  // namespace ulab::doubling
