#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace odar {

/// Immutable set of N objects in d-dimensional space, row-major storage.
/// Row index i refers to the same object throughout the whole pipeline.
class Dataset {
public:
    Dataset(std::vector<double> points, int n, int d);

    int size() const { return n_; }
    int dim() const { return d_; }
    double at(int i, int j) const { return pts_[static_cast<std::size_t>(i) * d_ + j]; }
    std::span<const double> row(int i) const {
        return {pts_.data() + static_cast<std::size_t>(i) * d_, static_cast<std::size_t>(d_)};
    }
    std::span<const double> raw() const { return pts_; }

private:
    std::vector<double> pts_;
    int n_ = 0;
    int d_ = 0;
};

struct LabeledDataset {
    Dataset data;
    std::vector<std::uint8_t> labels; // 1 = ground-truth outlier

    int outlier_count() const;
    double outlier_rate() const; // outlier_count() / N
};

enum class Scenario {
    gauss_blobs_with_uniform_noise,
    unbalanced_two_cluster,
    worm_like,
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct SyntheticSpec {
    Scenario scenario = Scenario::gauss_blobs_with_uniform_noise;
    std::vector<int> cluster_sizes;
    int outlier_count = 0;
    std::vector<Interval> bounding_box; // one interval per dimension
    std::uint64_t seed = 0;
    double cluster_stddev = 0.0; // <= 0 selects a default relative to the box extent
};

/// Deterministic synthetic data: isotropic Gaussian clusters (normal) plus
/// uniform outliers rejected within 3 cluster stddevs of every cluster
/// center. worm-like replaces the blobs with random-walk tubes.
LabeledDataset generate(const SyntheticSpec& spec);

/// Center layout used by generate(); for worm-like these are the walk starts.
std::vector<std::vector<double>> cluster_centers(const SyntheticSpec& spec);
double cluster_stddev(const SyntheticSpec& spec);

/// CSV ingestion. Comma separated, optional single header line, '.' decimal
/// separator; lines starting with '#' are skipped. label_column names a
/// header column, or gives a 1-based column number for headerless files.
LabeledDataset load_csv(const std::string& path,
                        const std::optional<std::string>& label_column = std::nullopt);

/// Writes x0..x{d-1}[,label] rows with full double precision. `preamble`
/// lines (if any) are emitted verbatim before the header.
void write_csv(const LabeledDataset& data, const std::string& path,
               bool with_labels = true, const std::string& preamble = "");

std::string scenario_name(Scenario s);
std::optional<Scenario> scenario_from_name(const std::string& name);

/// "# odar-gen ..." header line recording spec, seed and prng id.
std::string gen_preamble(const SyntheticSpec& spec);

} // namespace odar
