// Acceptance suite: one line per criterion, nonzero exit if any required
// criterion fails. The final criterion needs externally supplied datasets and
// reports SKIP when they are absent.

#include "odar/dataset.hpp"
#include "odar/detector.hpp"
#include "odar/evaluation.hpp"
#include "odar/prng.hpp"
#include "odar/reference.hpp"
#include "odar/transform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace odar;
using clock_type = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    bool skipped = false;
    std::string details;
};

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

SyntheticSpec blob_spec(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.scenario = Scenario::gauss_blobs_with_uniform_noise;
    spec.cluster_sizes = {500, 500};
    spec.outlier_count = 60;
    spec.bounding_box = {{0.0, 1000.0}, {0.0, 1000.0}};
    spec.seed = seed;
    return spec;
}

SyntheticSpec unbalanced_spec(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.scenario = Scenario::unbalanced_two_cluster;
    spec.cluster_sizes = {961, 100};
    spec.outlier_count = 8;
    spec.bounding_box = {{0.0, 1000.0}, {0.0, 1000.0}};
    spec.seed = seed;
    return spec;
}

// criterion 3 and criterion 8 aggregate over every pipeline run below
struct LawTracker {
    long long runs = 0;
    long long subset_violations = 0;
    long long anchor_violations = 0;
    long long mean_checks = 0;
    double worst_mean_deviation = 0.0;

    void record_mean(const std::vector<double>& rho) {
        double mean = 0.0;
        for (double r : rho) mean += r;
        mean /= static_cast<double>(rho.size());
        worst_mean_deviation = std::max(worst_mean_deviation, std::fabs(mean + 1.0));
        ++mean_checks;
    }

    void record_component(const PipelineOutput& out) {
        ++runs;
        record_mean(out.profile.rho);
        const auto rho = out.space.column(0);
        const double med = median(rho);
        int anchor = -1;
        for (int i = 0; i < out.space.n; ++i) {
            if (rho[i] >= med) continue;
            if (anchor < 0 || out.space.hrho_at(i) < out.space.hrho_at(anchor)) anchor = i;
        }
        const std::set<int> flagged(out.result.outliers.begin(), out.result.outliers.end());
        for (int idx : out.result.outliers)
            if (rho[idx] >= med) ++subset_violations;
        if (anchor >= 0 && !out.result.outliers.empty() && flagged.count(anchor) == 0)
            ++anchor_violations;
    }
};

LawTracker laws;

PipelineOutput run_tracked(const Dataset& data, const PipelineOptions& opt) {
    auto out = run_pipeline(data, opt);
    if (opt.strategy == Strategy::component) laws.record_component(out);
    return out;
}

Outcome criterion1_high_order_oracle() {
    const auto t0 = clock_type::now();
    SplitMix64 rng(101);
    double worst = 0.0;
    int done = 0;
    const int plan[][2] = {{10, 20}, {100, 20}, {2000, 10}};
    for (const auto& [n, reps] : plan) {
        for (int r = 0; r < reps; ++r) {
            std::vector<double> rho(n);
            for (auto& v : rho) v = -0.5 - 2.5 * rng.uniform01();
            const auto [got, sigma] = high_order_density(rho);
            const auto [want, sref] = ref::high_order_density_bruteforce(rho);
            if (sigma != sref) return {false, false, "sigma mismatch"};
            worst = std::max(worst, max_abs_diff(got, want));
            ++done;
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 10.0 && done == 50, false,
            fmt("50 vectors, max |diff| %.3g, %.2f s", worst, secs)};
}

Outcome criterion2_knn_oracle() {
    SplitMix64 rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 50 + static_cast<int>(rng.next() % 951);
        const int d = 1 + static_cast<int>(rng.next() % 10);
        const int k = 1 + static_cast<int>(rng.next() % std::min(20, n - 1));
        std::vector<double> pts(static_cast<std::size_t>(n) * d);
        for (auto& v : pts) v = rng.uniform(-100, 100);
        const Dataset data(pts, n, d);
        const auto got = knn_distances(build_index(data), k);
        const auto want = ref::knn_bruteforce(data, k);
        for (std::size_t i = 0; i < got.dist.size(); ++i)
            if (got.dist[i] != want.dist[i])
                worst = std::max(worst, std::fabs(got.dist[i] - want.dist[i]));
    }
    return {worst == 0.0, false, fmt("20 datasets, exact match (max |diff| %.3g)", worst)};
}

Outcome criterion3_mean_normalization() {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 20 + static_cast<int>(rng.next() % 500);
        const int d = 1 + static_cast<int>(rng.next() % 4);
        std::vector<double> pts(static_cast<std::size_t>(n) * d);
        for (auto& v : pts) v = rng.uniform(-50, 50);
        const auto knn = knn_distances(build_index(Dataset(pts, n, d)), std::min(8, n - 1));
        laws.record_mean(local_density(knn));
    }
    return {laws.worst_mean_deviation <= 1e-9 && laws.mean_checks > 0, false,
            fmt("%lld inputs, worst |mean(rho)+1| = %.3g", laws.mean_checks,
                laws.worst_mean_deviation)};
}

Outcome criterion4_exp_gap() {
    SplitMix64 rng(404);
    int violations = 0, checked = 0;
    while (checked < 10000) {
        double v[4];
        for (double& x : v) x = rng.uniform(-20.0, 20.0);
        std::sort(v, v + 4);
        if (!(v[0] < v[1] && v[1] < v[2] && v[2] < v[3])) continue;
        if (!(v[1] - v[0] < v[3] - v[2])) continue;
        ++checked;
        if (!(std::exp(v[1]) - std::exp(v[0]) < std::exp(v[3]) - std::exp(v[2]))) ++violations;
    }
    return {violations == 0, false, fmt("10000 tuples, %d violations", violations)};
}

Outcome criterion5_density_gaps() {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ds = generate(blob_spec(seed));
        const auto knn = knn_distances(build_index(ds.data), 10);
        const auto rho = local_density(knn);
        laws.record_mean(rho);
        std::vector<double> out, norm;
        for (int i = 0; i < ds.data.size(); ++i) (ds.labels[i] ? out : norm).push_back(rho[i]);
        auto mean_gap = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            double total = 0.0;
            for (std::size_t i = 1; i < v.size(); ++i) total += v[i] - v[i - 1];
            return total / (v.size() - 1);
        };
        if (mean_gap(out) > mean_gap(norm)) ++wins;
    }
    return {wins >= 9, false, fmt("outlier rho gaps larger in %d/10 seeds", wins)};
}

Outcome criterion6_end_to_end() {
    const auto t0 = clock_type::now();
    const BackendSpec backends[] = {{BackendKind::kmeans, 2, 0.0},
                                    {BackendKind::dpc, 2, 0.0},
                                    {BackendKind::delta_like, 0, 0.0}};
    const double thresholds[] = {0.95, 0.90, 0.90};
    std::ostringstream detail;
    bool pass = true;
    for (int b = 0; b < 3; ++b) {
        std::vector<double> accs;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto ds = generate(unbalanced_spec(seed));
            PipelineOptions opt;
            opt.k = 6;
            opt.backend = backends[b];
            const auto out = run_tracked(ds.data, opt);
            accs.push_back(balanced_accuracy(out.result.outliers, ds.labels).accuracy);
        }
        std::sort(accs.begin(), accs.end());
        const double med = 0.5 * (accs[4] + accs[5]);
        if (med < thresholds[b]) pass = false;
        detail << (b ? ", " : "") << backend_name(backends[b].kind) << " median "
               << fmt("%.4f (need %.2f)", med, thresholds[b]);
    }
    const double secs = seconds_since(t0);
    if (secs >= 30.0) pass = false;
    detail << fmt(", %.1f s", secs);
    return {pass, false, detail.str()};
}

Outcome criterion7_parameter_insensitivity() {
    const auto ds = generate(blob_spec(3));
    double lo = 2.0, hi = 0.0;
    for (int k = 2; k <= 20; ++k) {
        PipelineOptions opt;
        opt.k = k;
        const auto out = run_tracked(ds.data, opt);
        const double acc = balanced_accuracy(out.result.outliers, ds.labels).accuracy;
        lo = std::min(lo, acc);
        hi = std::max(hi, acc);
    }
    return {hi - lo <= 0.15, false,
            fmt("k=2..20 accuracy in [%.4f, %.4f], range %.4f (limit 0.15)", lo, hi, hi - lo)};
}

Outcome criterion8_component_laws() {
    // direct fixture on top of everything aggregated from the other criteria
    const std::vector<double> rho{-2.0, -1.9, -1.8, -1.0, -1.0, -1.0};
    const std::vector<double> hrho{1.0, 5.0, 2.0, 50.0, 51.0, 52.0};
    const auto r = detect_component(assemble(rho, hrho), rho, BackendSpec{});
    const std::set<int> flagged(r.outliers.begin(), r.outliers.end());
    const bool fixture_ok = flagged.count(0) == 1; // index 0 has the smallest hrho
    const bool pass = fixture_ok && laws.subset_violations == 0 && laws.anchor_violations == 0 &&
                      laws.runs > 0;
    return {pass, false,
            fmt("%lld tracked runs, %lld subset / %lld anchor violations", laws.runs,
                laws.subset_violations, laws.anchor_violations)};
}

Outcome criterion9_invariance() {
    const auto ds = generate(blob_spec(17));
    const int n = ds.data.size();
    PipelineOptions opt;
    opt.k = 10;
    const auto base = run_tracked(ds.data, opt);

    auto transformed = [&](double scale, double theta, double tx, double ty) {
        std::vector<double> out(static_cast<std::size_t>(n) * 2);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int i = 0; i < n; ++i) {
            const double x = ds.data.at(i, 0), y = ds.data.at(i, 1);
            out[2 * static_cast<std::size_t>(i)] = scale * (c * x - s * y) + tx;
            out[2 * static_cast<std::size_t>(i) + 1] = scale * (s * x + c * y) + ty;
        }
        return Dataset(std::move(out), n, 2);
    };

    double worst_rho = 0.0, worst_hrho = 0.0, worst_sigma = 0.0;
    bool sets_equal = true;
    for (const auto& [scale, theta, tx, ty] :
         {std::tuple{1.0, 0.0, 137.0, -55.0}, std::tuple{1.0, 0.7, 0.0, 0.0},
          std::tuple{10.0, 0.0, 0.0, 0.0}}) {
        const auto moved = run_tracked(transformed(scale, theta, tx, ty), opt);
        worst_rho = std::max(worst_rho, max_abs_diff(moved.profile.rho, base.profile.rho));
        worst_hrho = std::max(worst_hrho, max_abs_diff(moved.profile.hrho, base.profile.hrho));
        worst_sigma = std::max(worst_sigma, std::fabs(moved.profile.sigma - base.profile.sigma));
        if (moved.result.outliers != base.result.outliers) sets_equal = false;
    }
    const bool pass = worst_rho <= 1e-9 && worst_hrho <= 1e-9 && worst_sigma <= 1e-9 && sets_equal;
    return {pass, false,
            fmt("max |drho| %.3g, |dhrho| %.3g, |dsigma| %.3g, detected sets %s", worst_rho,
                worst_hrho, worst_sigma, sets_equal ? "identical" : "DIFFER")};
}

Outcome criterion10_shrink() {
    // fixture: two blobs laid out as a synthetic embedding
    SplitMix64 rng(55);
    const int per = 250;
    std::vector<double> rho, hrho;
    std::vector<int> membership;
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < per; ++i) {
            double a, b;
            rng.gaussian_pair(a, b);
            rho.push_back((c == 0 ? -2.0 : -1.0) + 0.05 * a);
            hrho.push_back((c == 0 ? 10.0 : 100.0) + 2.0 * b);
            membership.push_back(c);
        }
    }
    const auto before = assemble(rho, hrho);
    const auto after = shrink(before, 50);
    auto mean_intra = [&](const OdarSpace& s) {
        double total = 0.0;
        long long count = 0;
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j) {
                if (membership[i] != membership[j]) continue;
                const double dx = s.rho_at(i) - s.rho_at(j);
                const double dy = s.hrho_at(i) - s.hrho_at(j);
                total += std::sqrt(dx * dx + dy * dy);
                ++count;
            }
        return total / count;
    };
    const double d_before = mean_intra(before);
    const double d_after = mean_intra(after);
    const bool compacts = d_after < d_before;

    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ds = generate(blob_spec(seed));
        PipelineOptions opt;
        opt.k = 10;
        opt.shrink = true;
        const auto with = run_tracked(ds.data, opt);
        opt.shrink = false;
        const auto without = run_tracked(ds.data, opt);
        const double a1 = balanced_accuracy(with.result.outliers, ds.labels).accuracy;
        const double a0 = balanced_accuracy(without.result.outliers, ds.labels).accuracy;
        if (a1 >= a0) ++wins;
    }
    return {compacts && wins >= 7, false,
            fmt("intra-cluster distance %.4f -> %.4f, shrink >= no-shrink in %d/10 seeds",
                d_before, d_after, wins)};
}

Outcome criterion11_performance() {
    SyntheticSpec spec = blob_spec(1);
    spec.cluster_sizes = {4500, 4500};
    spec.outlier_count = 1000;
    const auto ds = generate(spec);
    const auto t0 = clock_type::now();
    PipelineOptions opt;
    opt.k = 10;
    const auto out = run_tracked(ds.data, opt);
    const double secs = seconds_since(t0);
    return {secs < 10.0 && ds.data.size() == 10000, false,
            fmt("n=10000 d=2 k=10 transform+detect in %.2f s (limit 10 s), %zu flagged", secs,
                out.result.outliers.size())};
}

Outcome criterion12_odds_datasets() {
    struct Gate {
        const char* env;
        const char* fallback;
        int k;
        double target;
    };
    const Gate gates[] = {{"ODAR_ANNTHYROID_CSV", "data/annthyroid.csv", 2, 0.70},
                          {"ODAR_WBC_CSV", "data/wbc.csv", 4, 0.85}};
    std::ostringstream detail;
    bool any = false, pass = true;
    for (const auto& g : gates) {
        const char* env = std::getenv(g.env);
        std::string path = env ? env : g.fallback;
        if (!std::filesystem::exists(path)) {
            detail << g.env << " absent; ";
            continue;
        }
        any = true;
        const auto ds = load_csv(path, std::string("label"));
        PipelineOptions opt;
        opt.k = g.k;
        const auto out = run_tracked(ds.data, opt);
        const double acc = balanced_accuracy(out.result.outliers, ds.labels).accuracy;
        if (std::fabs(acc - g.target) > 0.05) pass = false;
        detail << path << fmt(" accuracy %.3f (target %.2f +/- 0.05); ", acc, g.target);
    }
    if (!any) return {true, true, "external datasets not supplied"};
    return {pass, false, detail.str()};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "high-order density window scan equals the brute-force sum", criterion1_high_order_oracle},
        {2, "k-NN distances equal the all-pairs oracle exactly", criterion2_knn_oracle},
        {3, "rho mean is -1 within 1e-9", criterion3_mean_normalization},
        {4, "exponential gap ordering holds on random tuples", criterion4_exp_gap},
        {5, "outlier density values are sparser than normal ones", criterion5_density_gaps},
        {6, "unbalanced scenario accuracy across the three backends", criterion6_end_to_end},
        {7, "accuracy is insensitive to k from 2 to 20", criterion7_parameter_insensitivity},
        {8, "median-subset and minimum-hrho anchor laws never break", criterion8_component_laws},
        {9, "similarity transforms leave profile and detections unchanged", criterion9_invariance},
        {10, "one shrink pass compacts clusters and helps accuracy", criterion10_shrink},
        {11, "10k-object pipeline finishes inside 10 seconds", criterion11_performance},
        {12, "externally supplied datasets reach their reference accuracy", criterion12_odds_datasets},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, false, std::string("exception: ") + e.what()};
        }
        const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
        std::printf("[%s] criterion %2d: %s — %s\n", tag, c.id, c.title, o.details.c_str());
        if (!o.pass && !o.skipped) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures ? 1 : 0;
}
