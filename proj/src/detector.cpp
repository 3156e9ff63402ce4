#include "odar/detector.hpp"

#include "odar/error.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace odar {

double median(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("median of empty range");
    std::vector<double> v(values);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<int> median_split(const std::vector<double>& rho) {
    if (rho.size() < 2) throw std::invalid_argument("median split requires at least 2 objects");
    const double med = median(rho);
    std::vector<int> out;
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (rho[i] < med) out.push_back(static_cast<int>(i));
    return out;
}

namespace {

ClusterLabels cluster_with_context(std::span<const double> points, int dim,
                                   const BackendSpec& spec, const char* stage) {
    try {
        return run_backend(points, dim, spec);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(stage) + ": " + e.what());
    }
}

} // namespace

DetectionResult detect_component(const OdarSpace& space, const std::vector<double>& rho,
                                 const BackendSpec& backend) {
    const int n = space.n;
    if (static_cast<int>(rho.size()) != n)
        throw std::invalid_argument("rho length does not match the space");

    DetectionResult result;
    result.backend_used = backend;
    result.params.strategy = Strategy::component;
    result.stage_excluded.assign(n, Stage::excluded_by_median);

    const auto candidates = median_split(rho);
    if (candidates.empty()) return result; // all rho equal: nothing to flag

    std::vector<double> h(candidates.size());
    for (std::size_t t = 0; t < candidates.size(); ++t) h[t] = space.hrho_at(candidates[t]);

    // asking for more clusters than candidates would abort whole sweeps, so
    // the cluster count is clamped to the candidate count instead
    BackendSpec effective = backend;
    if (effective.kind != BackendKind::delta_like &&
        effective.k_clusters > static_cast<int>(candidates.size()))
        effective.k_clusters = static_cast<int>(candidates.size());
    result.backend_used = effective;

    const auto labels = cluster_with_context(h, 1, effective, "component clustering stage");

    std::size_t anchor = 0;
    for (std::size_t t = 1; t < h.size(); ++t)
        if (h[t] < h[anchor]) anchor = t; // ties keep the lower object index
    const int anchor_label = labels.labels[anchor];

    for (std::size_t t = 0; t < candidates.size(); ++t) {
        if (labels.labels[t] == anchor_label) {
            result.outliers.push_back(candidates[t]);
            result.stage_excluded[candidates[t]] = Stage::kept_as_outlier;
        } else {
            result.stage_excluded[candidates[t]] = Stage::excluded_by_hrho_cluster;
        }
    }
    return result;
}

DetectionResult detect_nocomp(const OdarSpace& space, const BackendSpec& backend) {
    const int n = space.n;
    DetectionResult result;
    result.backend_used = backend;
    result.params.strategy = Strategy::nocomp;
    result.stage_excluded.assign(n, Stage::excluded_by_hrho_cluster);

    const auto labels = cluster_with_context(space.coords, 2, backend, "nocomp clustering stage");

    int anchor = 0;
    for (int i = 1; i < n; ++i)
        if (space.hrho_at(i) < space.hrho_at(anchor)) anchor = i;
    const int anchor_label = labels.labels[anchor];

    for (int i = 0; i < n; ++i) {
        if (labels.labels[i] == anchor_label) {
            result.outliers.push_back(i);
            result.stage_excluded[i] = Stage::kept_as_outlier;
        }
    }
    return result;
}

PipelineOutput run_pipeline(const Dataset& data, const PipelineOptions& opt) {
    auto [space, profile] = construct_odar_space(data, opt.k, opt.shrink, opt.normalization,
                                                 opt.window);
    DetectionResult result = opt.strategy == Strategy::component
                                 ? detect_component(space, space.column(0), opt.backend)
                                 : detect_nocomp(space, opt.backend);
    result.params.k = opt.k;
    result.params.shrink = opt.shrink;
    result.params.strategy = opt.strategy;
    return PipelineOutput{std::move(space), std::move(profile), std::move(result)};
}

std::string stage_name(Stage s) {
    switch (s) {
    case Stage::kept_as_outlier: return "kept-as-outlier";
    case Stage::excluded_by_median: return "excluded-by-median";
    case Stage::excluded_by_hrho_cluster: return "excluded-by-hrho-cluster";
    }
    return "?";
}

std::string strategy_name(Strategy s) {
    return s == Strategy::component ? "component" : "nocomp";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
    if (name == "component") return Strategy::component;
    if (name == "nocomp") return Strategy::nocomp;
    return std::nullopt;
}

void write_result_csv(const DetectionResult& result, const std::string& path,
                      const std::string& preamble) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << preamble << "index,is_outlier,stage\n";
    for (std::size_t i = 0; i < result.stage_excluded.size(); ++i) {
        const bool kept = result.stage_excluded[i] == Stage::kept_as_outlier;
        out << i << "," << (kept ? 1 : 0) << "," << stage_name(result.stage_excluded[i]) << "\n";
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

} // namespace odar
