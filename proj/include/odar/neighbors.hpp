#pragma once

#include "odar/dataset.hpp"

#include <memory>
#include <span>
#include <vector>

namespace odar {

/// Row i holds the k smallest Euclidean distances from object i to the other
/// objects, sorted nondecreasing. Self is never its own neighbor.
struct KnnDistances {
    std::vector<double> dist; // row-major n x k
    int n = 0;
    int k = 0;

    double at(int i, int j) const { return dist[static_cast<std::size_t>(i) * k + j]; }
};

struct Neighbor {
    double dist;
    int index;
};

/// Exact k-NN under the Euclidean metric via a kd-tree with leaf buckets.
/// Distance ties resolve toward the lower object index, so queries are
/// deterministic. Queries are read-only and safe to run concurrently.
class SpatialIndex {
public:
    SpatialIndex(std::vector<double> points, int n, int d);
    explicit SpatialIndex(const Dataset& data);

    int size() const { return n_; }
    int dim() const { return d_; }

    /// k nearest neighbors of stored point `point_index`, self excluded.
    std::vector<Neighbor> nearest(int point_index, int k) const;

    /// k nearest stored points to an arbitrary query location.
    std::vector<Neighbor> nearest(std::span<const double> query, int k,
                                  int exclude_index = -1) const;

private:
    struct Node {
        int dim = -1; // -1 marks a leaf
        double split = 0.0;
        int left = -1, right = -1;
        int lo = 0, hi = 0; // leaf range into order_
    };

    int build(int lo, int hi);
    void search(int node, std::span<const double> q, int k, int exclude,
                std::vector<std::pair<double, int>>& heap) const;

    std::vector<double> pts_; // row-major copy
    int n_ = 0;
    int d_ = 0;
    std::vector<Node> nodes_;
    std::vector<int> order_; // point indices, permuted during build
    int root_ = -1;
};

SpatialIndex build_index(const Dataset& data);

/// 1 <= k <= N-1; rows are filled independently (parallel-safe).
KnnDistances knn_distances(const SpatialIndex& index, int k);

} // namespace odar
