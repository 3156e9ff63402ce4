#include "odar/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace odar {

namespace {

int point_count(std::span<const double> points, int dim) {
    if (dim < 1 || points.size() % dim != 0)
        throw std::invalid_argument("points must form an M x dim matrix");
    return static_cast<int>(points.size() / dim);
}

double sq_dist(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int t = 0; t < dim; ++t) {
        const double diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

bool lex_less(const double* a, const double* b, int dim) {
    for (int t = 0; t < dim; ++t) {
        if (a[t] < b[t]) return true;
        if (a[t] > b[t]) return false;
    }
    return false;
}

ClusterLabels renumber_first_occurrence(const std::vector<int>& raw) {
    ClusterLabels out;
    out.labels.resize(raw.size());
    std::vector<int> remap(raw.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (remap[raw[i]] < 0) remap[raw[i]] = next++;
        out.labels[i] = remap[raw[i]];
    }
    out.n_clusters = next;
    return out;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

ClusterLabels kmeans(std::span<const double> points, int dim, int k_clusters) {
    const int m = point_count(points, dim);
    if (k_clusters < 1) throw std::invalid_argument("k_clusters must be >= 1");
    if (m < k_clusters)
        throw std::invalid_argument("kmeans needs at least as many points as clusters");
    const double* p = points.data();

    // farthest-first traversal from the lexicographic minimum point
    int first = 0;
    for (int i = 1; i < m; ++i)
        if (lex_less(p + static_cast<std::size_t>(i) * dim,
                     p + static_cast<std::size_t>(first) * dim, dim))
            first = i;
    std::vector<double> centers(static_cast<std::size_t>(k_clusters) * dim);
    std::vector<bool> taken(m, false);
    std::vector<double> min_d2(m);
    auto add_center = [&](int c, int point) {
        taken[point] = true;
        std::copy_n(p + static_cast<std::size_t>(point) * dim, dim,
                    centers.begin() + static_cast<std::size_t>(c) * dim);
    };
    add_center(0, first);
    for (int i = 0; i < m; ++i)
        min_d2[i] = sq_dist(p + static_cast<std::size_t>(i) * dim, centers.data(), dim);
    for (int c = 1; c < k_clusters; ++c) {
        int best = -1;
        for (int i = 0; i < m; ++i) {
            if (taken[i]) continue;
            if (best < 0 || min_d2[i] > min_d2[best]) best = i;
        }
        add_center(c, best);
        const double* cc = centers.data() + static_cast<std::size_t>(c) * dim;
        for (int i = 0; i < m; ++i)
            min_d2[i] = std::min(min_d2[i], sq_dist(p + static_cast<std::size_t>(i) * dim, cc, dim));
    }

    std::vector<int> member(m, -1), prev(m, -2);
    std::vector<int> sizes(k_clusters, 0);
    for (int iter = 0; iter < 300; ++iter) {
        std::fill(sizes.begin(), sizes.end(), 0);
#pragma omp parallel for
        for (int i = 0; i < m; ++i) {
            const double* pi = p + static_cast<std::size_t>(i) * dim;
            int best = 0;
            double best_d2 = sq_dist(pi, centers.data(), dim);
            for (int c = 1; c < k_clusters; ++c) {
                const double d2 = sq_dist(pi, centers.data() + static_cast<std::size_t>(c) * dim, dim);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = c;
                }
            }
            member[i] = best;
        }
        for (int i = 0; i < m; ++i) ++sizes[member[i]];

        // empty clusters reseed with the point farthest from its centroid
        for (int c = 0; c < k_clusters; ++c) {
            if (sizes[c] > 0) continue;
            int far = -1;
            double far_d2 = -1.0;
            for (int i = 0; i < m; ++i) {
                if (sizes[member[i]] < 2) continue;
                const double d2 = sq_dist(p + static_cast<std::size_t>(i) * dim,
                                          centers.data() + static_cast<std::size_t>(member[i]) * dim,
                                          dim);
                if (d2 > far_d2) {
                    far_d2 = d2;
                    far = i;
                }
            }
            if (far < 0) break; // fewer distinct points than clusters
            --sizes[member[far]];
            member[far] = c;
            ++sizes[c];
        }

        if (member == prev) break;
        prev = member;

        std::vector<double> acc(static_cast<std::size_t>(k_clusters) * dim, 0.0);
        for (int i = 0; i < m; ++i) {
            const double* pi = p + static_cast<std::size_t>(i) * dim;
            double* a = acc.data() + static_cast<std::size_t>(member[i]) * dim;
            for (int t = 0; t < dim; ++t) a[t] += pi[t];
        }
        for (int c = 0; c < k_clusters; ++c)
            if (sizes[c] > 0)
                for (int t = 0; t < dim; ++t)
                    centers[static_cast<std::size_t>(c) * dim + t] =
                        acc[static_cast<std::size_t>(c) * dim + t] / sizes[c];
    }
    return renumber_first_occurrence(member);
}

ClusterLabels dpc(std::span<const double> points, int dim, int k_clusters) {
    const int m = point_count(points, dim);
    if (k_clusters < 1) throw std::invalid_argument("k_clusters must be >= 1");
    if (m < k_clusters)
        throw std::invalid_argument("dpc needs at least as many points as clusters");
    const double* p = points.data();
    if (m == 1) return ClusterLabels{{0}, 1};

    // cutoff distance: 2nd percentile of all pairwise distances
    std::vector<double> pair_d;
    pair_d.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            pair_d.push_back(std::sqrt(sq_dist(p + static_cast<std::size_t>(i) * dim,
                                               p + static_cast<std::size_t>(j) * dim, dim)));
    const std::size_t rank =
        static_cast<std::size_t>(std::max(0.0, std::ceil(0.02 * pair_d.size()) - 1.0));
    std::nth_element(pair_d.begin(), pair_d.begin() + rank, pair_d.end());
    double dc = pair_d[rank];
    if (dc <= 0.0) {
        double smallest_pos = 0.0;
        for (double v : pair_d)
            if (v > 0.0 && (smallest_pos == 0.0 || v < smallest_pos)) smallest_pos = v;
        dc = smallest_pos > 0.0 ? smallest_pos : 1.0;
    }

    std::vector<double> rho(m);
    const double inv_dc2 = 1.0 / (dc * dc);
#pragma omp parallel for schedule(dynamic, 32)
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            s += std::exp(-sq_dist(p + static_cast<std::size_t>(i) * dim,
                                   p + static_cast<std::size_t>(j) * dim, dim) *
                          inv_dc2);
        }
        rho[i] = s;
    }

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return rho[a] > rho[b] || (rho[a] == rho[b] && a < b);
    });

    std::vector<double> delta(m, 0.0);
    std::vector<int> parent(m, -1);
    {
        const int peak = order[0];
        double mx = 0.0;
        for (int j = 0; j < m; ++j)
            mx = std::max(mx, sq_dist(p + static_cast<std::size_t>(peak) * dim,
                                      p + static_cast<std::size_t>(j) * dim, dim));
        delta[peak] = std::sqrt(mx);
    }
#pragma omp parallel for schedule(dynamic, 32)
    for (int t = 1; t < m; ++t) {
        const int i = order[t];
        int best = 0;
        double best_d2 = sq_dist(p + static_cast<std::size_t>(i) * dim,
                                 p + static_cast<std::size_t>(order[0]) * dim, dim);
        for (int s = 1; s < t; ++s) {
            const double d2 = sq_dist(p + static_cast<std::size_t>(i) * dim,
                                      p + static_cast<std::size_t>(order[s]) * dim, dim);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = s;
            }
        }
        delta[i] = std::sqrt(best_d2);
        parent[i] = order[best];
    }

    // automated decision graph: top gamma = rho * delta become centers
    std::vector<int> by_gamma(m);
    std::iota(by_gamma.begin(), by_gamma.end(), 0);
    std::sort(by_gamma.begin(), by_gamma.end(), [&](int a, int b) {
        const double ga = rho[a] * delta[a], gb = rho[b] * delta[b];
        return ga > gb || (ga == gb && a < b);
    });

    std::vector<int> label(m, -1);
    for (int c = 0; c < k_clusters; ++c) label[by_gamma[c]] = c;
    for (int t = 0; t < m; ++t) {
        const int i = order[t];
        if (label[i] < 0) label[i] = label[parent[i]];
    }
    return renumber_first_occurrence(label);
}

ClusterLabels delta_like(std::span<const double> points, int dim, double radius) {
    const int m = point_count(points, dim);
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    const double* p = points.data();

    if (dim == 1) {
        // in one dimension, components are maximal chains of gaps <= radius
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return p[a] < p[b] || (p[a] == p[b] && a < b); });
        std::vector<int> comp(m, 0);
        int current = order[0];
        comp[order[0]] = current;
        for (int t = 1; t < m; ++t) {
            if (p[order[t]] - p[order[t - 1]] > radius) current = order[t];
            comp[order[t]] = current;
        }
        // comp holds a representative index; collapse to smallest member
        std::vector<int> raw(m);
        for (int i = 0; i < m; ++i) raw[i] = comp[i];
        return renumber_first_occurrence(raw);
    }

    UnionFind uf(m);
    const double r2 = radius * radius;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (sq_dist(p + static_cast<std::size_t>(i) * dim,
                        p + static_cast<std::size_t>(j) * dim, dim) <= r2)
                uf.unite(i, j);
    std::vector<int> raw(m);
    for (int i = 0; i < m; ++i) raw[i] = uf.find(i);
    return renumber_first_occurrence(raw);
}

ClusterLabels run_backend(std::span<const double> points, int dim, const BackendSpec& spec) {
    switch (spec.kind) {
    case BackendKind::kmeans:
        return kmeans(points, dim, spec.k_clusters);
    case BackendKind::dpc:
        return dpc(points, dim, spec.k_clusters);
    case BackendKind::delta_like: {
        double radius = spec.radius;
        if (radius <= 0.0) {
            // default: bounding-box diagonal / 20
            const int m = point_count(points, dim);
            double diag2 = 0.0;
            for (int t = 0; t < dim; ++t) {
                double mn = points[t], mx = points[t];
                for (int i = 1; i < m; ++i) {
                    const double v = points[static_cast<std::size_t>(i) * dim + t];
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
                diag2 += (mx - mn) * (mx - mn);
            }
            radius = std::sqrt(diag2) / 20.0;
            if (radius <= 0.0) radius = 1.0;
        }
        return delta_like(points, dim, radius);
    }
    }
    throw std::invalid_argument("unknown backend");
}

std::string backend_name(BackendKind kind) {
    switch (kind) {
    case BackendKind::kmeans: return "kmeans";
    case BackendKind::dpc: return "dpc";
    case BackendKind::delta_like: return "delta-like";
    }
    return "?";
}

std::optional<BackendKind> backend_from_name(const std::string& name) {
    if (name == "kmeans") return BackendKind::kmeans;
    if (name == "dpc") return BackendKind::dpc;
    if (name == "delta" || name == "delta-like") return BackendKind::delta_like;
    return std::nullopt;
}

} // namespace odar
