#include "odar/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace odar {

namespace {
constexpr int kLeafSize = 16;

// (squared distance, index) with lexicographic order: equal distances favor
// the lower index, which fixes the tie-breaking rule everywhere.
using Entry = std::pair<double, int>;
} // namespace

SpatialIndex::SpatialIndex(std::vector<double> points, int n, int d)
    : pts_(std::move(points)), n_(n), d_(d) {
    if (n_ < 1 || d_ < 1 || pts_.size() != static_cast<std::size_t>(n_) * d_)
        throw std::invalid_argument("spatial index requires an N x d matrix with N,d >= 1");
    order_.resize(n_);
    for (int i = 0; i < n_; ++i) order_[i] = i;
    nodes_.reserve(2 * (n_ / kLeafSize + 1));
    root_ = build(0, n_);
}

SpatialIndex::SpatialIndex(const Dataset& data)
    : SpatialIndex(std::vector<double>(data.raw().begin(), data.raw().end()), data.size(),
                   data.dim()) {}

int SpatialIndex::build(int lo, int hi) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (hi - lo <= kLeafSize) {
        std::sort(order_.begin() + lo, order_.begin() + hi);
        nodes_[id].lo = lo;
        nodes_[id].hi = hi;
        return id;
    }
    // split along the widest extent
    int dim = 0;
    double widest = -1.0;
    for (int t = 0; t < d_; ++t) {
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (int i = lo; i < hi; ++i) {
            const double v = pts_[static_cast<std::size_t>(order_[i]) * d_ + t];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (mx - mn > widest) {
            widest = mx - mn;
            dim = t;
        }
    }
    const int mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](int a, int b) {
                         const double va = pts_[static_cast<std::size_t>(a) * d_ + dim];
                         const double vb = pts_[static_cast<std::size_t>(b) * d_ + dim];
                         return va < vb || (va == vb && a < b);
                     });
    const double split = pts_[static_cast<std::size_t>(order_[mid]) * d_ + dim];
    const int left = build(lo, mid);
    const int right = build(mid, hi);
    nodes_[id].dim = dim;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void SpatialIndex::search(int node, std::span<const double> q, int k, int exclude,
                          std::vector<std::pair<double, int>>& heap) const {
    const Node& nd = nodes_[node];
    if (nd.dim < 0) {
        for (int t = nd.lo; t < nd.hi; ++t) {
            const int idx = order_[t];
            if (idx == exclude) continue;
            const double* p = pts_.data() + static_cast<std::size_t>(idx) * d_;
            double d2 = 0.0;
            for (int c = 0; c < d_; ++c) {
                const double diff = q[c] - p[c];
                d2 += diff * diff;
            }
            const Entry e{d2, idx};
            if (static_cast<int>(heap.size()) < k) {
                heap.push_back(e);
                std::push_heap(heap.begin(), heap.end());
            } else if (e < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = e;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        return;
    }
    const double diff = q[nd.dim] - nd.split;
    const int near = diff < 0.0 ? nd.left : nd.right;
    const int far = diff < 0.0 ? nd.right : nd.left;
    search(near, q, k, exclude, heap);
    // the far side can still hold an equal distance with a lower index, so
    // only prune when it is strictly worse than the current k-th entry
    if (static_cast<int>(heap.size()) < k || diff * diff <= heap.front().first)
        search(far, q, k, exclude, heap);
}

std::vector<Neighbor> SpatialIndex::nearest(std::span<const double> query, int k,
                                            int exclude_index) const {
    const int avail = n_ - (exclude_index >= 0 ? 1 : 0);
    if (k < 1 || k > avail)
        throw std::invalid_argument("k must be at most N-1");
    std::vector<Entry> heap;
    heap.reserve(k);
    search(root_, query, k, exclude_index, heap);
    std::sort(heap.begin(), heap.end());
    std::vector<Neighbor> out;
    out.reserve(heap.size());
    for (const auto& [d2, idx] : heap) out.push_back(Neighbor{std::sqrt(d2), idx});
    return out;
}

std::vector<Neighbor> SpatialIndex::nearest(int point_index, int k) const {
    if (point_index < 0 || point_index >= n_)
        throw std::invalid_argument("point index out of range");
    std::span<const double> q{pts_.data() + static_cast<std::size_t>(point_index) * d_,
                              static_cast<std::size_t>(d_)};
    return nearest(q, k, point_index);
}

SpatialIndex build_index(const Dataset& data) { return SpatialIndex(data); }

KnnDistances knn_distances(const SpatialIndex& index, int k) {
    const int n = index.size();
    if (k < 1 || k > n - 1) throw std::invalid_argument("k must be at most N-1");
    KnnDistances out;
    out.n = n;
    out.k = k;
    out.dist.resize(static_cast<std::size_t>(n) * k);
#pragma omp parallel for schedule(dynamic, 64)
    for (int i = 0; i < n; ++i) {
        const auto nb = index.nearest(i, k);
        for (int j = 0; j < k; ++j) out.dist[static_cast<std::size_t>(i) * k + j] = nb[j].dist;
    }
    return out;
}

} // namespace odar
