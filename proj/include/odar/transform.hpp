#pragma once

#include "odar/dataset.hpp"
#include "odar/neighbors.hpp"

#include <string>
#include <utility>
#include <vector>

namespace odar {

/// Distance normalization inside the local-density transform. `global` uses
/// one min/max over the whole n x k distance matrix (canonical); `per_rank`
/// normalizes each neighbor rank j by its own column min/max.
enum class Normalization { global, per_rank };

/// Neighborhood shape of the high-order density sum. `two_sided` is the
/// canonical symmetric window |rho_i - rho_j| <= sigma; `one_sided` scans
/// upward in sorted order only, with a strict < sigma bound.
enum class WindowMode { two_sided, one_sided };

struct DensityProfile {
    std::vector<double> rho;  // negative, mean exactly -1 up to rounding
    std::vector<double> hrho; // >= 1 whenever sigma > 0 (self term included)
    double sigma = 0.0;       // 10 * (max(rho) - min(rho)) / N
};

/// The 2-D embedding: column 0 = rho, column 1 = hrho. Row i corresponds to
/// dataset object i before and after shrinking.
struct OdarSpace {
    std::vector<double> coords; // row-major n x 2
    int n = 0;
    bool shrunk = false;

    double rho_at(int i) const { return coords[2 * static_cast<std::size_t>(i)]; }
    double hrho_at(int i) const { return coords[2 * static_cast<std::size_t>(i) + 1]; }
    std::vector<double> column(int c) const;
};

/// Local density per object: normalize every k-NN distance, exponentiate,
/// row-sum, then negate and divide by the mean so the output mean is -1.
/// If all distances are equal the normalized value is defined as 0 and every
/// object gets rho = -1.
std::vector<double> local_density(const KnnDistances& knn,
                                  Normalization norm = Normalization::global);

/// Density of the local-density values: for each i sums
/// exp(-(rho_i - rho_j)^2 / sigma^2) over the j with |rho_i - rho_j| <= sigma
/// (j = i included), using a sort plus window scan. sigma == 0 (all rho
/// equal) degenerates to the multiplicity of each exact value.
std::pair<std::vector<double>, double>
high_order_density(const std::vector<double>& rho, WindowMode window = WindowMode::two_sided);

/// Column-stacks (rho, hrho); shrunk = false.
OdarSpace assemble(const std::vector<double>& rho, const std::vector<double>& hrho);

/// One simultaneous pass moving every point to the centroid of its beta
/// nearest neighbors (self excluded) in the snapshot of the space.
OdarSpace shrink(const OdarSpace& space, int beta);

inline int default_beta(int n) { return n / 10 > 1 ? n / 10 : 1; }

/// knn -> local density -> high-order density -> assemble -> optional shrink.
/// do_shrink = false is the NoShrink ablation.
std::pair<OdarSpace, DensityProfile>
construct_odar_space(const Dataset& data, int k, bool do_shrink,
                     Normalization norm = Normalization::global,
                     WindowMode window = WindowMode::two_sided);

/// "index,rho,hrho" rows for external plotting.
void write_profile_csv(const DensityProfile& profile, const std::string& path,
                       const std::string& preamble = "");

} // namespace odar
