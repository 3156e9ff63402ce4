#include "odar/dataset.hpp"

#include "odar/error.hpp"
#include "odar/prng.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace odar {

Dataset::Dataset(std::vector<double> points, int n, int d) : pts_(std::move(points)), n_(n), d_(d) {
    if (n_ < 1 || d_ < 1)
        throw std::invalid_argument("dataset requires N >= 1 and d >= 1");
    if (pts_.size() != static_cast<std::size_t>(n_) * d_)
        throw std::invalid_argument("dataset storage does not match N x d");
    for (double v : pts_)
        if (!std::isfinite(v))
            throw std::invalid_argument("dataset coordinates must be finite");
}

int LabeledDataset::outlier_count() const {
    int c = 0;
    for (auto b : labels) c += b ? 1 : 0;
    return c;
}

double LabeledDataset::outlier_rate() const {
    return labels.empty() ? 0.0 : static_cast<double>(outlier_count()) / labels.size();
}

std::string scenario_name(Scenario s) {
    switch (s) {
    case Scenario::gauss_blobs_with_uniform_noise: return "gauss-blobs-with-uniform-noise";
    case Scenario::unbalanced_two_cluster: return "unbalanced-two-cluster";
    case Scenario::worm_like: return "worm-like";
    }
    return "?";
}

std::optional<Scenario> scenario_from_name(const std::string& name) {
    if (name == "gauss-blobs-with-uniform-noise") return Scenario::gauss_blobs_with_uniform_noise;
    if (name == "unbalanced-two-cluster") return Scenario::unbalanced_two_cluster;
    if (name == "worm-like") return Scenario::worm_like;
    return std::nullopt;
}

namespace {

void validate_spec(const SyntheticSpec& spec) {
    if (spec.cluster_sizes.empty())
        throw std::invalid_argument("at least one cluster size is required");
    for (int s : spec.cluster_sizes)
        if (s < 1)
            throw std::invalid_argument("cluster sizes must be >= 1");
    if (spec.outlier_count < 0)
        throw std::invalid_argument("outlier count must be >= 0");
    if (spec.bounding_box.empty())
        throw std::invalid_argument("bounding box must have at least one dimension");
    for (const auto& iv : spec.bounding_box)
        if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw std::invalid_argument("bounding box intervals must satisfy lo < hi");
    if (spec.scenario == Scenario::unbalanced_two_cluster && spec.cluster_sizes.size() != 2)
        throw std::invalid_argument("unbalanced-two-cluster requires exactly two cluster sizes");
    if (spec.scenario == Scenario::worm_like && spec.bounding_box.size() != 2)
        throw std::invalid_argument("worm-like generation is 2-D only");
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

void fill_gaussian(SplitMix64& rng, std::span<double> out) {
    std::size_t t = 0;
    while (t < out.size()) {
        double a, b;
        rng.gaussian_pair(a, b);
        out[t++] = a;
        if (t < out.size()) out[t++] = b;
        // a leftover half-pair is discarded so draws per point stay aligned
    }
}

} // namespace

double cluster_stddev(const SyntheticSpec& spec) {
    if (spec.cluster_stddev > 0.0) return spec.cluster_stddev;
    double min_ext = spec.bounding_box.front().hi - spec.bounding_box.front().lo;
    for (const auto& iv : spec.bounding_box) min_ext = std::min(min_ext, iv.hi - iv.lo);
    return 0.004 * min_ext;
}

std::vector<std::vector<double>> cluster_centers(const SyntheticSpec& spec) {
    validate_spec(spec);
    const int c = static_cast<int>(spec.cluster_sizes.size());
    const int d = static_cast<int>(spec.bounding_box.size());
    std::vector<std::vector<double>> centers(c, std::vector<double>(d));
    for (int j = 0; j < c; ++j) {
        const double frac = static_cast<double>(j + 1) / (c + 1);
        for (int t = 0; t < d; ++t) {
            const auto& iv = spec.bounding_box[t];
            centers[j][t] = iv.lo + (iv.hi - iv.lo) * frac;
        }
    }
    return centers;
}

LabeledDataset generate(const SyntheticSpec& spec) {
    validate_spec(spec);
    const int d = static_cast<int>(spec.bounding_box.size());
    const double sc = cluster_stddev(spec);
    const auto centers = cluster_centers(spec);
    SplitMix64 rng(spec.seed);

    std::vector<double> pts;
    std::vector<std::uint8_t> labels;
    // rejection targets: the static centers, or every walk position for worms
    std::vector<double> reject_centers;

    if (spec.scenario == Scenario::worm_like) {
        const double step = 0.5 * sc;
        const double cross = 0.5 * sc;
        for (std::size_t j = 0; j < spec.cluster_sizes.size(); ++j) {
            double x = centers[j][0];
            double y = centers[j][1];
            double angle = rng.uniform(0.0, 6.283185307179586);
            for (int i = 0; i < spec.cluster_sizes[j]; ++i) {
                angle += 0.35 * (2.0 * rng.uniform01() - 1.0);
                x += step * std::cos(angle);
                y += step * std::sin(angle);
                // reflect off a 3-stddev inset so the tube stays inside the box
                const auto& bx = spec.bounding_box[0];
                const auto& by = spec.bounding_box[1];
                if (x < bx.lo + 3 * sc || x > bx.hi - 3 * sc) {
                    angle = 3.141592653589793 - angle;
                    x = std::clamp(x, bx.lo + 3 * sc, bx.hi - 3 * sc);
                }
                if (y < by.lo + 3 * sc || y > by.hi - 3 * sc) {
                    angle = -angle;
                    y = std::clamp(y, by.lo + 3 * sc, by.hi - 3 * sc);
                }
                reject_centers.push_back(x);
                reject_centers.push_back(y);
                double g[2];
                fill_gaussian(rng, g);
                pts.push_back(x + cross * g[0]);
                pts.push_back(y + cross * g[1]);
                labels.push_back(0);
            }
        }
    } else {
        std::vector<double> g(d);
        for (std::size_t j = 0; j < spec.cluster_sizes.size(); ++j) {
            for (int i = 0; i < spec.cluster_sizes[j]; ++i) {
                fill_gaussian(rng, g);
                for (int t = 0; t < d; ++t) pts.push_back(centers[j][t] + sc * g[t]);
                labels.push_back(0);
            }
        }
        for (const auto& c : centers)
            reject_centers.insert(reject_centers.end(), c.begin(), c.end());
    }

    const std::size_t n_reject = reject_centers.size() / d;
    const double min_sq = 9.0 * sc * sc;
    std::vector<double> cand(d);
    for (int i = 0; i < spec.outlier_count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            for (int t = 0; t < d; ++t)
                cand[t] = rng.uniform(spec.bounding_box[t].lo, spec.bounding_box[t].hi);
            bool clear = true;
            for (std::size_t c = 0; c < n_reject && clear; ++c) {
                std::span<const double> cc{reject_centers.data() + c * d,
                                           static_cast<std::size_t>(d)};
                if (sq_dist(cand, cc) < min_sq) clear = false;
            }
            if (clear) {
                pts.insert(pts.end(), cand.begin(), cand.end());
                labels.push_back(1);
                placed = true;
            }
        }
        if (!placed)
            throw DataError("generation error: could not place outlier " + std::to_string(i) +
                            " outside 3 stddev of all cluster centers after 10000 attempts");
    }

    const int n = static_cast<int>(labels.size());
    return LabeledDataset{Dataset(std::move(pts), n, d), std::move(labels)};
}

std::string gen_preamble(const SyntheticSpec& spec) {
    std::ostringstream os;
    os << "# odar-gen scenario=" << scenario_name(spec.scenario) << " sizes=";
    for (std::size_t j = 0; j < spec.cluster_sizes.size(); ++j)
        os << (j ? "," : "") << spec.cluster_sizes[j];
    os << " outliers=" << spec.outlier_count << " box=";
    char buf[64];
    for (std::size_t t = 0; t < spec.bounding_box.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%s%.17g:%.17g", t ? "," : "", spec.bounding_box[t].lo,
                      spec.bounding_box[t].hi);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, " stddev=%.17g", cluster_stddev(spec));
    os << buf << " seed=" << spec.seed << " prng=" << SplitMix64::id << "\n";
    return os.str();
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        std::string f = line.substr(start, comma == std::string::npos ? comma : comma - start);
        // trim surrounding blanks
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.pop_back();
        out.push_back(std::move(f));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_double(const std::string& field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (first != last && *first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && p == last && first != last && std::isfinite(out);
}

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

LabeledDataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::vector<std::string> raw_lines;
    std::vector<int> line_numbers;
    std::string line;
    int physical = 0;
    while (std::getline(in, line)) {
        ++physical;
        std::string trimmed = line;
        while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) trimmed.pop_back();
        if (trimmed.empty() || trimmed.front() == '#') continue;
        raw_lines.push_back(std::move(trimmed));
        line_numbers.push_back(physical);
    }
    if (raw_lines.empty()) throw DataError("structural error: '" + path + "' has no data rows");

    std::vector<std::string> header;
    std::size_t first_row = 0;
    {
        auto fields = split_fields(raw_lines[0]);
        double tmp;
        bool all_numeric = true;
        for (const auto& f : fields)
            if (!parse_double(f, tmp)) { all_numeric = false; break; }
        if (!all_numeric) {
            header = fields;
            first_row = 1;
        }
    }
    if (first_row >= raw_lines.size())
        throw DataError("structural error: '" + path + "' has a header but no data rows");

    const int ncols = static_cast<int>(split_fields(raw_lines[first_row]).size());

    int label_idx = -1;
    if (label_column) {
        if (!header.empty()) {
            for (int c = 0; c < static_cast<int>(header.size()); ++c)
                if (header[c] == *label_column) { label_idx = c; break; }
        }
        if (label_idx < 0 && is_integer(*label_column)) {
            const int one_based = std::stoi(*label_column);
            if (one_based >= 1 && one_based <= ncols) label_idx = one_based - 1;
        }
        if (label_idx < 0)
            throw DataError("label column '" + *label_column + "' not found in '" + path + "'");
    }

    const int d = ncols - (label_idx >= 0 ? 1 : 0);
    if (d < 1) throw DataError("structural error: '" + path + "' has no feature columns");

    std::vector<double> pts;
    std::vector<std::uint8_t> labels;
    pts.reserve((raw_lines.size() - first_row) * d);
    for (std::size_t r = first_row; r < raw_lines.size(); ++r) {
        const auto fields = split_fields(raw_lines[r]);
        const int lineno = line_numbers[r];
        if (static_cast<int>(fields.size()) != ncols)
            throw DataError("structural error: line " + std::to_string(lineno) + ": expected " +
                            std::to_string(ncols) + " fields, got " + std::to_string(fields.size()));
        for (int c = 0; c < ncols; ++c) {
            double v;
            if (!parse_double(fields[c], v))
                throw DataError("parse error: line " + std::to_string(lineno) + ", column " +
                                std::to_string(c + 1) + ": '" + fields[c] + "'");
            if (c == label_idx) {
                if (v != 0.0 && v != 1.0)
                    throw DataError("validation error: line " + std::to_string(lineno) +
                                    ": label must be 0 or 1, got '" + fields[c] + "'");
                labels.push_back(v == 1.0 ? 1 : 0);
            } else {
                pts.push_back(v);
            }
        }
        if (label_idx < 0) labels.push_back(0);
    }

    const int n = static_cast<int>(labels.size());
    return LabeledDataset{Dataset(std::move(pts), n, d), std::move(labels)};
}

void write_csv(const LabeledDataset& data, const std::string& path, bool with_labels,
               const std::string& preamble) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << preamble;
    const int d = data.data.dim();
    for (int c = 0; c < d; ++c) out << (c ? "," : "") << "x" << c;
    if (with_labels) out << ",label";
    out << "\n";
    char buf[40];
    for (int i = 0; i < data.data.size(); ++i) {
        for (int c = 0; c < d; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", data.data.at(i, c));
            out << (c ? "," : "") << buf;
        }
        if (with_labels) out << "," << (data.labels[i] ? 1 : 0);
        out << "\n";
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

} // namespace odar
