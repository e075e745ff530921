#pragma once

#include <vector>

namespace progtr {

struct MiConfig {
    int bins = 32;              // equal-mass bins per continuous coordinate
    bool miller_madow = true;   // small-sample bias correction
    long min_samples = 10000;   // below this the result carries a warning
    long max_joint_cells = 65536; // beyond this, fall back to the pairwise sum
};

struct MiResult {
    double bits = 0.0;
    bool approximate = false; // pairwise-truncated chain-rule sum was used
    bool low_samples = false;
};

/// Equal-mass bin index per value (quantile binning); continuous side of the
/// plug-in estimator. Returns indices in [0, bins).
std::vector<int> quantile_bins(const std::vector<double>& values, int bins);

/// Plug-in MI (bits) between two pre-discretized columns.
double mi_discrete(const std::vector<int>& x, const std::vector<int>& y, bool miller_madow);

/// MI between one x column and one y column; discrete columns are used as
/// exact symbols, continuous ones are quantile-binned.
double mi_pair(const std::vector<double>& x, bool x_discrete, const std::vector<double>& y,
               bool y_discrete, const MiConfig& cfg = {});

/// MI between the full x vector and the full y vector. Joint plug-in when
/// the product alphabet is small enough, otherwise the pairwise-truncated
/// chain-rule approximation sum_i max_j MI(x_i; y_j) (plots only; flagged).
MiResult mutual_information(const std::vector<std::vector<double>>& x_cols, bool x_discrete,
                            const std::vector<std::vector<double>>& y_cols, bool y_discrete,
                            const MiConfig& cfg = {});

/// b x b matrix, entry (i,j) = MI(bit i; estimate j), row-major.
std::vector<double> bmi_matrix(const std::vector<std::vector<double>>& bit_cols,
                               const std::vector<std::vector<double>>& est_cols,
                               const MiConfig& cfg = {});

} // namespace progtr
