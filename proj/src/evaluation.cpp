#include "odar/evaluation.hpp"

#include "odar/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace odar {

Score balanced_accuracy(const std::vector<int>& predicted, const std::vector<std::uint8_t>& truth) {
    const int n = static_cast<int>(truth.size());
    std::vector<std::uint8_t> flagged(n, 0);
    for (int idx : predicted) {
        if (idx < 0 || idx >= n)
            throw std::invalid_argument("predicted index out of range");
        flagged[idx] = 1;
    }
    ConfusionCounts c;
    for (int i = 0; i < n; ++i) {
        if (truth[i])
            flagged[i] ? ++c.tp : ++c.fn;
        else
            flagged[i] ? ++c.fp : ++c.tn;
    }
    if (c.tp + c.fn == 0)
        throw std::invalid_argument("evaluation error: ground truth has no outlier objects");
    if (c.fp + c.tn == 0)
        throw std::invalid_argument("evaluation error: ground truth has no normal objects");
    const double acc = 0.5 * (static_cast<double>(c.tp) / (c.tp + c.fn) +
                              static_cast<double>(c.tn) / (c.fp + c.tn));
    return Score{acc, c};
}

std::vector<int> top_percent(const std::vector<double>& scores, double rate) {
    if (!(rate > 0.0 && rate < 1.0))
        throw std::invalid_argument("rate must lie in (0,1)");
    for (double s : scores)
        if (!std::isfinite(s)) throw std::invalid_argument("scores must be finite");
    const int n = static_cast<int>(scores.size());
    const int m = static_cast<int>(std::ceil(rate * n));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    });
    std::vector<int> out(order.begin(), order.begin() + m);
    std::sort(out.begin(), out.end());
    return out;
}

SweepReport parameter_sweep(std::span<const LabeledDataset> datasets,
                            std::span<const std::string> names, std::span<const int> k_values,
                            const PipelineOptions& base) {
    SweepReport report;
    report.dataset_names.assign(names.begin(), names.end());
    for (int k : k_values) {
        SweepRow row;
        row.k = k;
        double total = 0.0;
        int present = 0;
        for (const auto& ds : datasets) {
            SweepCell cell;
            try {
                PipelineOptions opt = base;
                opt.k = k;
                const auto out = run_pipeline(ds.data, opt);
                cell.accuracy = balanced_accuracy(out.result.outliers, ds.labels).accuracy;
                total += *cell.accuracy;
                ++present;
            } catch (const std::exception& e) {
                cell.error = e.what(); // failed rows are data, not process failures
            }
            row.cells.push_back(std::move(cell));
        }
        if (present > 0) row.average = total / present;
        report.rows.push_back(std::move(row));
    }
    return report;
}

SweepReport parameter_sweep(const LabeledDataset& data, std::span<const int> k_values,
                            const PipelineOptions& base) {
    const std::string name = "dataset";
    return parameter_sweep(std::span<const LabeledDataset>{&data, 1},
                           std::span<const std::string>{&name, 1}, k_values, base);
}

void write_sweep_csv(const SweepReport& report, const std::string& path,
                     const std::string& preamble) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << preamble << "dataset";
    for (const auto& row : report.rows) out << ",k=" << row.k;
    out << "\n";
    char buf[40];
    for (std::size_t d = 0; d < report.dataset_names.size(); ++d) {
        out << report.dataset_names[d];
        for (const auto& row : report.rows) {
            if (row.cells[d].accuracy) {
                std::snprintf(buf, sizeof buf, ",%.6f", *row.cells[d].accuracy);
                out << buf;
            } else {
                out << ",error";
            }
        }
        out << "\n";
    }
    out << "average";
    for (const auto& row : report.rows) {
        if (row.average) {
            std::snprintf(buf, sizeof buf, ",%.6f", *row.average);
            out << buf;
        } else {
            out << ",error";
        }
    }
    out << "\n";
    if (!out) throw DataError("write failed for '" + path + "'");
}

} // namespace odar
