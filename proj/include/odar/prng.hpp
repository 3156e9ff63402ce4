#pragma once

#include <cmath>
#include <cstdint>

namespace odar {

// splitmix64: small portable generator with a fixed algorithm; generated
// files record the algorithm id in their header.
class SplitMix64 {
public:
    static constexpr const char* id = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Marsaglia polar method; avoids trig so only sqrt/log enter the stream.
    void gaussian_pair(double& z0, double& z1) {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                const double m = std::sqrt(-2.0 * std::log(s) / s);
                z0 = u * m;
                z1 = v * m;
                return;
            }
        }
    }

private:
    std::uint64_t state_;
};

} // namespace odar
