#include "odar/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace odar::ref {

namespace {

double euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double diff = a[t] - b[t];
        s += diff * diff;
    }
    return std::sqrt(s);
}

} // namespace

KnnDistances knn_bruteforce(const Dataset& data, int k) {
    const int n = data.size();
    if (k < 1 || k > n - 1) throw std::invalid_argument("k must be at most N-1");
    KnnDistances out;
    out.n = n;
    out.k = k;
    out.dist.resize(static_cast<std::size_t>(n) * k);
    std::vector<std::pair<double, int>> all;
    for (int i = 0; i < n; ++i) {
        all.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            all.emplace_back(euclid(data.row(i), data.row(j)), j);
        }
        std::sort(all.begin(), all.end());
        for (int j = 0; j < k; ++j) out.dist[static_cast<std::size_t>(i) * k + j] = all[j].first;
    }
    return out;
}

std::vector<Neighbor> nearest_bruteforce(std::span<const double> points, int n, int d,
                                         std::span<const double> query, int k,
                                         int exclude_index) {
    std::vector<std::pair<double, int>> all;
    for (int j = 0; j < n; ++j) {
        if (j == exclude_index) continue;
        std::span<const double> row{points.data() + static_cast<std::size_t>(j) * d,
                                    static_cast<std::size_t>(d)};
        all.emplace_back(euclid(query, row), j);
    }
    if (k < 1 || k > static_cast<int>(all.size()))
        throw std::invalid_argument("k must be at most N-1");
    std::sort(all.begin(), all.end());
    std::vector<Neighbor> out;
    for (int j = 0; j < k; ++j) out.push_back(Neighbor{all[j].first, all[j].second});
    return out;
}

std::vector<double> local_density_literal(const KnnDistances& knn, Normalization norm) {
    const int n = knn.n, k = knn.k;
    std::vector<double> sums(n, 0.0);
    if (norm == Normalization::global) {
        double mn = knn.at(0, 0), mx = knn.at(0, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) {
                if (knn.at(i, j) < mn) mn = knn.at(i, j);
                if (knn.at(i, j) > mx) mx = knn.at(i, j);
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) {
                double x = 0.0;
                if (mx > mn) x = (knn.at(i, j) - mn) / (mx - mn);
                sums[i] += std::exp(x);
            }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                double mn = knn.at(0, j), mx = knn.at(0, j);
                for (int s = 0; s < n; ++s) {
                    if (knn.at(s, j) < mn) mn = knn.at(s, j);
                    if (knn.at(s, j) > mx) mx = knn.at(s, j);
                }
                double x = 0.0;
                if (mx > mn) x = (knn.at(i, j) - mn) / (mx - mn);
                sums[i] += std::exp(x);
            }
        }
    }
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += sums[i];
    mean /= n;
    std::vector<double> rho(n);
    for (int i = 0; i < n; ++i) rho[i] = -sums[i] / mean;
    return rho;
}

std::pair<std::vector<double>, double>
high_order_density_bruteforce(const std::vector<double>& rho) {
    const int n = static_cast<int>(rho.size());
    double mn = rho[0], mx = rho[0];
    for (double v : rho) {
        if (v < mn) mn = v;
        if (v > mx) mx = v;
    }
    const double sigma = 10.0 * (mx - mn) / n;
    std::vector<double> hrho(n, 0.0);
    if (sigma == 0.0) {
        for (int i = 0; i < n; ++i) {
            int count = 0;
            for (int j = 0; j < n; ++j)
                if (rho[j] == rho[i]) ++count;
            hrho[i] = count;
        }
        return {hrho, sigma};
    }
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = std::fabs(rho[i] - rho[j]);
            if (d / sigma <= 1.0) s += std::exp(-(rho[i] - rho[j]) * (rho[i] - rho[j]) / (sigma * sigma));
        }
        hrho[i] = s;
    }
    return {hrho, sigma};
}

OdarSpace shrink_bruteforce(const OdarSpace& space, int beta) {
    const int n = space.n;
    if (beta < 1 || beta > n - 1) throw std::invalid_argument("beta must be in [1, N-1]");
    OdarSpace out;
    out.n = n;
    out.shrunk = true;
    out.coords.resize(space.coords.size());
    std::vector<std::pair<double, int>> all;
    for (int i = 0; i < n; ++i) {
        all.clear();
        std::span<const double> qi{space.coords.data() + 2 * static_cast<std::size_t>(i), 2};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            std::span<const double> qj{space.coords.data() + 2 * static_cast<std::size_t>(j), 2};
            all.emplace_back(euclid(qi, qj), j);
        }
        std::sort(all.begin(), all.end());
        double sx = 0.0, sy = 0.0;
        for (int t = 0; t < beta; ++t) {
            sx += space.coords[2 * static_cast<std::size_t>(all[t].second)];
            sy += space.coords[2 * static_cast<std::size_t>(all[t].second) + 1];
        }
        out.coords[2 * static_cast<std::size_t>(i)] = sx / beta;
        out.coords[2 * static_cast<std::size_t>(i) + 1] = sy / beta;
    }
    return out;
}

} // namespace odar::ref
