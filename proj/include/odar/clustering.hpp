#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace odar {

/// Labels are contiguous integers 0..n_clusters-1, renumbered by first
/// occurrence in object order.
struct ClusterLabels {
    std::vector<int> labels;
    int n_clusters = 0;
};

enum class BackendKind { kmeans, dpc, delta_like };

struct BackendSpec {
    BackendKind kind = BackendKind::kmeans;
    int k_clusters = 2;  // kmeans / dpc
    double radius = 0.0; // delta-like; <= 0 selects a data-driven default
};

/// Lloyd iterations to a fixed assignment (or 300 rounds). Initialization is
/// deterministic: greedy farthest-first traversal from the lexicographically
/// smallest point. Empty clusters reseed with the point farthest from its
/// assigned centroid.
ClusterLabels kmeans(std::span<const double> points, int dim, int k_clusters);

/// Density peaks: Gaussian-kernel density with cutoff at the 2nd-percentile
/// pairwise distance, delta = distance to the nearest higher-density point,
/// centers = top k_clusters by rho * delta, remaining points inherit the
/// label of their nearest higher-density neighbor in decreasing-density order.
ClusterLabels dpc(std::span<const double> points, int dim, int k_clusters);

/// Connected components of the graph linking points at distance <= radius.
ClusterLabels delta_like(std::span<const double> points, int dim, double radius);

/// Dispatch on spec.kind; resolves the delta-like default radius
/// (bounding-box diagonal / 20) when spec.radius <= 0.
ClusterLabels run_backend(std::span<const double> points, int dim, const BackendSpec& spec);

std::string backend_name(BackendKind kind);
std::optional<BackendKind> backend_from_name(const std::string& name);

} // namespace odar
