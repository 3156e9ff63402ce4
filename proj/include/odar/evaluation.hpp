#pragma once

#include "odar/dataset.hpp"
#include "odar/detector.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace odar {

struct ConfusionCounts {
    long long tp = 0;
    long long fn = 0;
    long long tn = 0;
    long long fp = 0;
};

struct Score {
    double accuracy = 0.0;
    ConfusionCounts counts;
};

/// accuracy = (TP/(TP+FN) + TN/(FP+TN)) / 2. Requires at least one outlier
/// and one normal object in the ground truth.
Score balanced_accuracy(const std::vector<int>& predicted,
                        const std::vector<std::uint8_t>& truth);

/// The ceil(rate*N) highest-scoring indices, ties at the cut broken by lower
/// index; rate must lie in (0,1). Result is in ascending index order.
std::vector<int> top_percent(const std::vector<double>& scores, double rate);

struct SweepCell {
    std::optional<double> accuracy;
    std::string error; // set when this run failed; the sweep itself never aborts
};

struct SweepRow {
    int k = 0;
    std::vector<SweepCell> cells; // one per dataset
    std::optional<double> average;
};

struct SweepReport {
    std::vector<std::string> dataset_names;
    std::vector<SweepRow> rows; // one per k value
};

/// One detection + score per (dataset, k); errors land in the affected cell.
SweepReport parameter_sweep(std::span<const LabeledDataset> datasets,
                            std::span<const std::string> names,
                            std::span<const int> k_values,
                            const PipelineOptions& base);

SweepReport parameter_sweep(const LabeledDataset& data, std::span<const int> k_values,
                            const PipelineOptions& base);

/// Datasets as rows, k values as columns, plus an average row.
void write_sweep_csv(const SweepReport& report, const std::string& path,
                     const std::string& preamble = "");

} // namespace odar
