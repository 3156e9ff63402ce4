#pragma once

#include "odar/clustering.hpp"
#include "odar/dataset.hpp"
#include "odar/transform.hpp"

#include <string>
#include <vector>

namespace odar {

/// Which stage ruled an object out (or kept it).
enum class Stage : unsigned char {
    kept_as_outlier,
    excluded_by_median,
    excluded_by_hrho_cluster,
};

enum class Strategy { component, nocomp };

struct DetectionParams {
    int k = 0;
    bool shrink = false;
    Strategy strategy = Strategy::component;
};

struct DetectionResult {
    std::vector<int> outliers;         // ascending object indices
    std::vector<Stage> stage_excluded; // one entry per object
    BackendSpec backend_used;
    DetectionParams params;
};

/// Median of an even count is the mean of the two middle values.
double median(const std::vector<double>& values);

/// Indices with rho strictly below the median; empty when all rho are equal
/// ("no median-side candidates" - detection then returns an empty set).
std::vector<int> median_split(const std::vector<double>& rho);

/// Component clustering: median split on rho, backend clustering of the
/// candidates' 1-D hrho values, then the cluster of the minimum-hrho
/// candidate is the outlier set. The backend cluster count is clamped to the
/// candidate count so batch sweeps never abort.
DetectionResult detect_component(const OdarSpace& space, const std::vector<double>& rho,
                                 const BackendSpec& backend);

/// Ablation: the backend clusters the full 2-D coordinates and the cluster
/// containing the minimum-hrho object is returned (anchor rule reused).
DetectionResult detect_nocomp(const OdarSpace& space, const BackendSpec& backend);

struct PipelineOptions {
    int k = 10;
    bool shrink = true;
    Strategy strategy = Strategy::component;
    Normalization normalization = Normalization::global;
    WindowMode window = WindowMode::two_sided;
    BackendSpec backend{};
};

struct PipelineOutput {
    OdarSpace space;
    DensityProfile profile;
    DetectionResult result;
};

/// Full run: construct the (optionally shrunk) space, then detect with the
/// requested strategy. The strategy reads rho/hrho from the space columns.
PipelineOutput run_pipeline(const Dataset& data, const PipelineOptions& opt);

std::string stage_name(Stage s);
std::string strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

/// "index,is_outlier,stage" rows.
void write_result_csv(const DetectionResult& result, const std::string& path,
                      const std::string& preamble = "");

} // namespace odar
