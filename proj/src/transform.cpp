#include "odar/transform.hpp"

#include "odar/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace odar {

std::vector<double> OdarSpace::column(int c) const {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = coords[2 * static_cast<std::size_t>(i) + c];
    return out;
}

std::vector<double> local_density(const KnnDistances& knn, Normalization norm) {
    const int n = knn.n, k = knn.k;
    if (n < 2) throw std::invalid_argument("local density requires at least 2 objects");

    std::vector<double> sums(n);
    if (norm == Normalization::global) {
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (double v : knn.dist) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        const double range = mx - mn;
#pragma omp parallel for
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < k; ++j) {
                const double x = range > 0.0 ? (knn.at(i, j) - mn) / range : 0.0;
                s += std::exp(x);
            }
            sums[i] = s;
        }
    } else {
        // per neighbor rank: column j normalized by its own min/max
        std::vector<double> cmin(k, std::numeric_limits<double>::infinity());
        std::vector<double> cmax(k, -std::numeric_limits<double>::infinity());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) {
                const double v = knn.at(i, j);
                cmin[j] = std::min(cmin[j], v);
                cmax[j] = std::max(cmax[j], v);
            }
#pragma omp parallel for
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < k; ++j) {
                const double range = cmax[j] - cmin[j];
                const double x = range > 0.0 ? (knn.at(i, j) - cmin[j]) / range : 0.0;
                s += std::exp(x);
            }
            sums[i] = s;
        }
    }

    // serial accumulation keeps the mean (and so every rho) bit-stable
    double total = 0.0;
    for (double s : sums) total += s;
    const double mean = total / n;
    std::vector<double> rho(n);
    for (int i = 0; i < n; ++i) rho[i] = -sums[i] / mean;
    return rho;
}

std::pair<std::vector<double>, double> high_order_density(const std::vector<double>& rho,
                                                          WindowMode window) {
    const int n = static_cast<int>(rho.size());
    if (n < 1) throw std::invalid_argument("high-order density requires at least 1 value");
    double mn = rho[0], mx = rho[0];
    for (double v : rho) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    const double sigma = 10.0 * (mx - mn) / n;

    std::vector<double> hrho(n);
    if (sigma == 0.0) {
        // max == min, so every value ties with all n others
        std::fill(hrho.begin(), hrho.end(), static_cast<double>(n));
        return {hrho, sigma};
    }

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return rho[a] < rho[b] || (rho[a] == rho[b] && a < b);
    });
    std::vector<double> vals(n);
    for (int t = 0; t < n; ++t) vals[t] = rho[idx[t]];

    const double inv_s2 = 1.0 / (sigma * sigma);
    if (window == WindowMode::two_sided) {
#pragma omp parallel for schedule(dynamic, 64)
        for (int t = 0; t < n; ++t) {
            double s = 1.0; // self term
            for (int j = t - 1; j >= 0 && vals[t] - vals[j] <= sigma; --j) {
                const double d = vals[t] - vals[j];
                s += std::exp(-d * d * inv_s2);
            }
            for (int j = t + 1; j < n && vals[j] - vals[t] <= sigma; ++j) {
                const double d = vals[j] - vals[t];
                s += std::exp(-d * d * inv_s2);
            }
            hrho[idx[t]] = s;
        }
    } else {
        // upward scan only, strict bound, self term at j == t
#pragma omp parallel for schedule(dynamic, 64)
        for (int t = 0; t < n; ++t) {
            double s = 0.0;
            for (int j = t; j < n && vals[j] - vals[t] < sigma; ++j) {
                const double d = vals[j] - vals[t];
                s += std::exp(-d * d * inv_s2);
            }
            hrho[idx[t]] = s;
        }
    }
    return {hrho, sigma};
}

OdarSpace assemble(const std::vector<double>& rho, const std::vector<double>& hrho) {
    if (rho.size() != hrho.size())
        throw std::invalid_argument("rho and hrho lengths differ");
    OdarSpace space;
    space.n = static_cast<int>(rho.size());
    space.shrunk = false;
    space.coords.resize(2 * rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        space.coords[2 * i] = rho[i];
        space.coords[2 * i + 1] = hrho[i];
    }
    return space;
}

OdarSpace shrink(const OdarSpace& space, int beta) {
    const int n = space.n;
    if (beta < 1 || beta > n - 1)
        throw std::invalid_argument("beta must be in [1, N-1]");
    SpatialIndex index(space.coords, n, 2);
    OdarSpace out;
    out.n = n;
    out.shrunk = true;
    out.coords.resize(space.coords.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (int i = 0; i < n; ++i) {
        const auto nb = index.nearest(i, beta);
        double sx = 0.0, sy = 0.0;
        for (const auto& a : nb) {
            sx += space.coords[2 * static_cast<std::size_t>(a.index)];
            sy += space.coords[2 * static_cast<std::size_t>(a.index) + 1];
        }
        out.coords[2 * static_cast<std::size_t>(i)] = sx / beta;
        out.coords[2 * static_cast<std::size_t>(i) + 1] = sy / beta;
    }
    return out;
}

std::pair<OdarSpace, DensityProfile> construct_odar_space(const Dataset& data, int k,
                                                          bool do_shrink, Normalization norm,
                                                          WindowMode window) {
    const auto index = build_index(data);
    const auto knn = knn_distances(index, k);
    auto rho = local_density(knn, norm);
    auto [hrho, sigma] = high_order_density(rho, window);
    DensityProfile profile{rho, hrho, sigma};
    auto space = assemble(rho, hrho);
    if (do_shrink) space = shrink(space, default_beta(data.size()));
    return {std::move(space), std::move(profile)};
}

void write_profile_csv(const DensityProfile& profile, const std::string& path,
                       const std::string& preamble) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << preamble << "index,rho,hrho\n";
    char buf[96];
    for (std::size_t i = 0; i < profile.rho.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, profile.rho[i], profile.hrho[i]);
        out << buf;
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

} // namespace odar
