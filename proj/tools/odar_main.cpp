// odar: construct the density embedding, detect outliers with a pluggable
// clustering backend, and evaluate against ground-truth labels.
//
// Results go to files; diagnostics go to stderr. Exit codes: 0 success,
// 2 usage error, 3 data error, 4 internal error.

#include "odar/dataset.hpp"
#include "odar/detector.hpp"
#include "odar/error.hpp"
#include "odar/evaluation.hpp"
#include "odar/svg_plot.hpp"
#include "odar/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

struct CommonOpts {
    std::string input;
    std::string output;
    int k = 10;
    std::string backend = "kmeans";
    int clusters = 2;
    double radius = 0.0;
    bool no_shrink = false;
    std::string strategy = "component";
    std::string normalization = "global";
    std::string window = "two-sided";
    std::uint64_t seed = 0;
    std::string label_column;
};

void add_pipeline_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--k", o.k, "neighbor count (default 10)");
    cmd->add_option("--backend", o.backend, "clustering backend")
        ->check(CLI::IsMember({"kmeans", "dpc", "delta"}));
    cmd->add_option("--clusters", o.clusters, "cluster count for kmeans/dpc (default 2)");
    cmd->add_option("--radius", o.radius, "delta-like linking radius (default: extent/20)");
    cmd->add_flag("--no-shrink", o.no_shrink, "skip the shrinking pass");
    cmd->add_option("--strategy", o.strategy, "detection strategy")
        ->check(CLI::IsMember({"component", "nocomp"}));
    cmd->add_option("--normalization", o.normalization, "distance normalization")
        ->check(CLI::IsMember({"global", "per-rank"}));
    cmd->add_option("--window", o.window, "high-order density window")
        ->check(CLI::IsMember({"two-sided", "one-sided"}));
    cmd->add_option("--seed", o.seed, "seed echoed into provenance (pipeline is deterministic)");
}

odar::PipelineOptions to_pipeline_options(const CommonOpts& o) {
    odar::PipelineOptions opt;
    opt.k = o.k;
    opt.shrink = !o.no_shrink;
    opt.strategy = *odar::strategy_from_name(o.strategy);
    opt.normalization = o.normalization == "per-rank" ? odar::Normalization::per_rank
                                                      : odar::Normalization::global;
    opt.window = o.window == "one-sided" ? odar::WindowMode::one_sided
                                         : odar::WindowMode::two_sided;
    opt.backend.kind = *odar::backend_from_name(o.backend);
    opt.backend.k_clusters = o.clusters;
    opt.backend.radius = o.radius;
    return opt;
}

json config_json(const std::string& command, const CommonOpts& o) {
    json j;
    j["command"] = command;
    j["input"] = o.input;
    j["output"] = o.output;
    j["k"] = o.k;
    j["backend"] = o.backend == "delta" ? "delta-like" : o.backend;
    j["clusters"] = o.clusters;
    j["radius"] = o.radius;
    j["shrink"] = !o.no_shrink;
    j["strategy"] = o.strategy;
    j["normalization"] = o.normalization;
    j["window"] = o.window;
    j["seed"] = o.seed;
    j["label_column"] = o.label_column;
    return j;
}

std::string config_comment(const json& cfg) { return "# config: " + cfg.dump() + "\n"; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw odar::DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw odar::DataError("write failed for '" + path + "'");
}

void write_json_file(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

odar::LabeledDataset load_input(const CommonOpts& o) {
    std::optional<std::string> label;
    if (!o.label_column.empty()) label = o.label_column;
    return odar::load_csv(o.input, label);
}

std::string strip_extension(const std::string& path, const std::string& ext) {
    if (path.size() > ext.size() && path.substr(path.size() - ext.size()) == ext)
        return path.substr(0, path.size() - ext.size());
    return path;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string f = text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!f.empty()) out.push_back(std::stoi(f));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<odar::Interval> parse_box(const std::string& text) {
    std::vector<odar::Interval> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string f = text.substr(start, comma == std::string::npos ? comma : comma - start);
        const std::size_t colon = f.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("box intervals are lo:hi, e.g. 0:1000,0:1000");
        out.push_back({std::stod(f.substr(0, colon)), std::stod(f.substr(colon + 1))});
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

json counts_json(const odar::DetectionResult& r) {
    int kept = 0, by_median = 0, by_cluster = 0;
    for (auto s : r.stage_excluded) {
        if (s == odar::Stage::kept_as_outlier) ++kept;
        else if (s == odar::Stage::excluded_by_median) ++by_median;
        else ++by_cluster;
    }
    json j;
    j["n"] = r.stage_excluded.size();
    j["outliers"] = kept;
    j["excluded_by_median"] = by_median;
    j["excluded_by_hrho_cluster"] = by_cluster;
    return j;
}

json result_summary(const odar::DetectionResult& r, const json& cfg) {
    json j;
    j["config"] = cfg;
    j["counts"] = counts_json(r);
    j["backend"] = {{"kind", odar::backend_name(r.backend_used.kind)},
                    {"clusters", r.backend_used.k_clusters},
                    {"radius", r.backend_used.radius}};
    j["parameters"] = {{"k", r.params.k},
                       {"shrink", r.params.shrink},
                       {"strategy", odar::strategy_name(r.params.strategy)}};
    return j;
}

std::vector<int> read_result_outliers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw odar::DataError("cannot open '" + path + "'");
    std::vector<int> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) { header_seen = true; continue; } // index,is_outlier,stage
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw odar::DataError("malformed result row in '" + path + "'");
        if (line.substr(c1 + 1, c2 - c1 - 1) == "1") out.push_back(std::stoi(line.substr(0, c1)));
    }
    return out;
}

int run_gen(const CommonOpts& o, const std::string& scenario, const std::string& sizes,
            int outliers, const std::string& box, double stddev) {
    odar::SyntheticSpec spec;
    const auto sc = odar::scenario_from_name(scenario);
    if (!sc) throw std::invalid_argument("unknown scenario '" + scenario + "'");
    spec.scenario = *sc;
    spec.cluster_sizes = parse_int_list(sizes);
    spec.outlier_count = outliers;
    spec.bounding_box = parse_box(box);
    spec.seed = o.seed;
    spec.cluster_stddev = stddev;
    const auto data = odar::generate(spec);
    odar::write_csv(data, o.output, true, odar::gen_preamble(spec));
    std::cerr << "wrote " << data.data.size() << " objects (" << data.outlier_count()
              << " outliers) to " << o.output << "\n";
    return 0;
}

int run_transform(const CommonOpts& o) {
    const auto data = load_input(o);
    const auto opt = to_pipeline_options(o);
    auto [space, profile] =
        odar::construct_odar_space(data.data, opt.k, opt.shrink, opt.normalization, opt.window);
    odar::write_profile_csv(profile, o.output, config_comment(config_json("transform", o)));
    std::cerr << "wrote density profile for " << data.data.size() << " objects to " << o.output
              << "\n";
    return 0;
}

int run_detect(const CommonOpts& o) {
    const auto data = load_input(o);
    const auto out = odar::run_pipeline(data.data, to_pipeline_options(o));
    const json cfg = config_json("detect", o);
    const std::string base = strip_extension(strip_extension(o.output, ".csv"), ".json");
    odar::write_result_csv(out.result, base + ".csv", config_comment(cfg));
    write_json_file(base + ".json", result_summary(out.result, cfg));
    std::cerr << "flagged " << out.result.outliers.size() << " of " << data.data.size()
              << " objects; wrote " << base << ".csv and " << base << ".json\n";
    return 0;
}

int run_eval(const CommonOpts& o) {
    if (o.label_column.empty())
        throw std::invalid_argument("eval requires --label-column");
    const auto data = load_input(o);
    const auto out = odar::run_pipeline(data.data, to_pipeline_options(o));
    const auto score = odar::balanced_accuracy(out.result.outliers, data.labels);
    json j = result_summary(out.result, config_json("eval", o));
    j["accuracy"] = score.accuracy;
    j["confusion"] = {{"tp", score.counts.tp},
                      {"fn", score.counts.fn},
                      {"tn", score.counts.tn},
                      {"fp", score.counts.fp}};
    write_json_file(o.output, j);
    std::cerr << "balanced accuracy " << score.accuracy << "; wrote " << o.output << "\n";
    return 0;
}

int run_sweep(const CommonOpts& o, int k_min, int k_max, int k_step) {
    if (k_min < 1 || k_max < k_min || k_step < 1)
        throw std::invalid_argument("sweep requires 1 <= k-min <= k-max and k-step >= 1");
    if (o.label_column.empty())
        throw std::invalid_argument("sweep requires --label-column");
    const auto data = load_input(o);
    std::vector<int> ks;
    for (int k = k_min; k <= k_max; k += k_step) ks.push_back(k);
    const auto report = odar::parameter_sweep(data, ks, to_pipeline_options(o));
    const json cfg = config_json("sweep", o);
    const std::string base = strip_extension(strip_extension(o.output, ".csv"), ".json");
    odar::write_sweep_csv(report, base + ".csv", config_comment(cfg));
    json j;
    j["config"] = cfg;
    j["datasets"] = report.dataset_names;
    j["rows"] = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["k"] = row.k;
        r["accuracy"] = json::array();
        r["errors"] = json::array();
        for (const auto& cell : row.cells) {
            r["accuracy"].push_back(cell.accuracy ? json(*cell.accuracy) : json());
            r["errors"].push_back(cell.error.empty() ? json() : json(cell.error));
        }
        r["average"] = row.average ? json(*row.average) : json();
        j["rows"].push_back(std::move(r));
    }
    write_json_file(base + ".json", j);
    std::cerr << "swept k=" << k_min << ".." << k_max << "; wrote " << base << ".csv and "
              << base << ".json\n";
    return 0;
}

int run_plot(const CommonOpts& o, const std::string& result_path, bool odar_space) {
    const auto data = load_input(o);
    std::vector<int> outliers;
    if (!result_path.empty()) outliers = read_result_outliers(result_path);
    const json cfg = config_json("plot", o);
    std::string svg;
    if (odar_space) {
        const auto opt = to_pipeline_options(o);
        auto [space, profile] =
            odar::construct_odar_space(data.data, opt.k, opt.shrink, opt.normalization, opt.window);
        svg = odar::plot_svg(space.coords, space.n, outliers, "config=" + cfg.dump());
    } else {
        if (data.data.dim() != 2)
            throw std::invalid_argument(
                "input is not 2-D; pass --odar-space to plot the 2-D embedding instead");
        std::vector<double> pts(data.data.raw().begin(), data.data.raw().end());
        svg = odar::plot_svg(pts, data.data.size(), outliers, "config=" + cfg.dump());
    }
    write_text(o.output, svg);
    std::cerr << "wrote " << o.output << "\n";
    return 0;
}

int run_bench(const CommonOpts& o, int n, int d) {
    using clock = std::chrono::steady_clock;
    auto secs = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };

    std::optional<odar::LabeledDataset> data;
    if (!o.input.empty()) {
        data = load_input(o);
    } else {
        odar::SyntheticSpec spec;
        spec.scenario = odar::Scenario::gauss_blobs_with_uniform_noise;
        const int per = n * 9 / 20;
        spec.cluster_sizes = {per, per};
        spec.outlier_count = n - 2 * per;
        spec.bounding_box.assign(d, {0.0, 1000.0});
        spec.seed = o.seed;
        data = odar::generate(spec);
    }
    const auto opt = to_pipeline_options(o);
    const auto& ds = data->data;

    const auto t0 = clock::now();
    const auto index = odar::build_index(ds);
    const auto knn = odar::knn_distances(index, opt.k);
    const auto t1 = clock::now();
    const auto rho = odar::local_density(knn, opt.normalization);
    const auto t2 = clock::now();
    const auto [hrho, sigma] = odar::high_order_density(rho, opt.window);
    const auto t3 = clock::now();
    auto space = odar::assemble(rho, hrho);
    if (opt.shrink) space = odar::shrink(space, odar::default_beta(ds.size()));
    const auto t4 = clock::now();
    const auto result = opt.strategy == odar::Strategy::component
                            ? odar::detect_component(space, space.column(0), opt.backend)
                            : odar::detect_nocomp(space, opt.backend);
    const auto t5 = clock::now();

    json j;
    j["config"] = config_json("bench", o);
    j["n"] = ds.size();
    j["d"] = ds.dim();
    j["k"] = opt.k;
    j["outliers_flagged"] = result.outliers.size();
    j["seconds"] = {{"knn", secs(t0, t1)},
                    {"local_density", secs(t1, t2)},
                    {"high_order_density", secs(t2, t3)},
                    {"shrink", secs(t3, t4)},
                    {"detect", secs(t4, t5)},
                    {"total", secs(t0, t5)}};
    write_json_file(o.output, j);
    std::cerr << "pipeline on n=" << ds.size() << " d=" << ds.dim() << " took " << secs(t0, t5)
              << " s; wrote " << o.output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"outlier detection via density-space cluster recognition"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* gen = app.add_subcommand("gen", "generate a labeled synthetic dataset");
    std::string scenario = "gauss-blobs-with-uniform-noise";
    std::string sizes = "500,500";
    std::string box = "0:1000,0:1000";
    int gen_outliers = 50;
    double stddev = 0.0;
    gen->add_option("--scenario", scenario, "scenario name")
        ->check(CLI::IsMember(
            {"gauss-blobs-with-uniform-noise", "unbalanced-two-cluster", "worm-like"}));
    gen->add_option("--sizes", sizes, "comma-separated cluster sizes");
    gen->add_option("--outliers", gen_outliers, "outlier count");
    gen->add_option("--box", box, "bounding box lo:hi per dimension");
    gen->add_option("--stddev", stddev, "cluster stddev (default: box extent / 250)");
    gen->add_option("--seed", o.seed, "generator seed");
    gen->add_option("--output", o.output, "output CSV")->required();

    auto* transform = app.add_subcommand("transform", "write the (rho, hrho) profile as CSV");
    transform->add_option("--input", o.input, "input CSV")->required();
    transform->add_option("--output", o.output, "output CSV")->required();
    transform->add_option("--label-column", o.label_column, "label column to strip");
    add_pipeline_flags(transform, o);

    auto* detect = app.add_subcommand("detect", "detect outliers; writes CSV + JSON summary");
    detect->add_option("--input", o.input, "input CSV")->required();
    detect->add_option("--output", o.output, "output base path")->required();
    detect->add_option("--label-column", o.label_column, "label column to strip");
    add_pipeline_flags(detect, o);

    auto* eval = app.add_subcommand("eval", "detect and score against ground-truth labels");
    eval->add_option("--input", o.input, "input CSV with labels")->required();
    eval->add_option("--output", o.output, "output JSON")->required();
    eval->add_option("--label-column", o.label_column, "label column name")->required();
    add_pipeline_flags(eval, o);

    auto* sweep = app.add_subcommand("sweep", "accuracy over a range of k values");
    int k_min = 2, k_max = 20, k_step = 1;
    sweep->add_option("--input", o.input, "input CSV with labels")->required();
    sweep->add_option("--output", o.output, "output base path")->required();
    sweep->add_option("--label-column", o.label_column, "label column name")->required();
    sweep->add_option("--k-min", k_min, "first k (default 2)");
    sweep->add_option("--k-max", k_max, "last k (default 20)");
    sweep->add_option("--k-step", k_step, "k increment (default 1)");
    add_pipeline_flags(sweep, o);

    auto* plot = app.add_subcommand("plot", "SVG scatter with detected outliers in orange");
    std::string result_path;
    bool odar_space = false;
    plot->add_option("--input", o.input, "input CSV")->required();
    plot->add_option("--output", o.output, "output SVG")->required();
    plot->add_option("--result", result_path, "detection result CSV to mark outliers");
    plot->add_flag("--odar-space", odar_space, "plot the 2-D embedding instead of the raw data");
    plot->add_option("--label-column", o.label_column, "label column to strip");
    add_pipeline_flags(plot, o);

    auto* bench = app.add_subcommand("bench", "time the pipeline stages; writes JSON");
    int bench_n = 10000, bench_d = 2;
    bench->add_option("--input", o.input, "input CSV (otherwise synthetic)");
    bench->add_option("--output", o.output, "output JSON")->required();
    bench->add_option("--n", bench_n, "synthetic object count (default 10000)");
    bench->add_option("--d", bench_d, "synthetic dimensionality (default 2)");
    bench->add_option("--label-column", o.label_column, "label column to strip");
    add_pipeline_flags(bench, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return run_gen(o, scenario, sizes, gen_outliers, box, stddev);
        if (transform->parsed()) return run_transform(o);
        if (detect->parsed()) return run_detect(o);
        if (eval->parsed()) return run_eval(o);
        if (sweep->parsed()) return run_sweep(o, k_min, k_max, k_step);
        if (plot->parsed()) return run_plot(o, result_path, odar_space);
        if (bench->parsed()) return run_bench(o, bench_n, bench_d);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const odar::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
