#pragma once

#include "odar/dataset.hpp"
#include "odar/neighbors.hpp"
#include "odar/transform.hpp"

#include <utility>
#include <vector>

namespace odar::ref {

// Serial brute-force baselines. They are written independently of the main
// kernels (plain scalar loops, no spatial index, no window scan) and serve
// two purposes: oracles for the test suites and the comparison side of the
// kernel benchmark.

/// All-pairs distances sorted per row; exact match contract with the kd-tree.
KnnDistances knn_bruteforce(const Dataset& data, int k);

/// Linear-scan k-NN for a single query point.
std::vector<Neighbor> nearest_bruteforce(std::span<const double> points, int n, int d,
                                         std::span<const double> query, int k,
                                         int exclude_index = -1);

/// Literal per-element transcription of the local-density definition.
std::vector<double> local_density_literal(const KnnDistances& knn,
                                          Normalization norm = Normalization::global);

/// O(N^2) double loop over the high-order density definition.
std::pair<std::vector<double>, double>
high_order_density_bruteforce(const std::vector<double>& rho);

/// O(N^2) neighbor search per point, then the same centroid move.
OdarSpace shrink_bruteforce(const OdarSpace& space, int beta);

} // namespace odar::ref
