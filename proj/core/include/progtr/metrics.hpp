#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "progtr/histogram_mi.hpp"
#include "progtr/system.hpp"

namespace progtr {

struct MetricPoint {
    double snr_db;
    int t; // 1-based channel use
    std::string metric;
    double value;
    double stderr_; // 0 when the value is not a Monte-Carlo mean
    long n;
};

struct EvalOptions {
    std::vector<double> snr_grid;
    long n_samples = 100000;
    std::uint64_t seed = 1;
    int user = 0; // whose payload/estimates to score (MAC models)
    MiConfig mi;
};

/// Hard-decision bit error rate per channel use; bits a baseline has not
/// sent yet count half an error each.
std::vector<MetricPoint> ber_curve(System& sys, const EvalOptions& opt);

/// Total per-use MSE ("mse") plus the per-variable decomposition
/// ("mse_var<i>").
std::vector<MetricPoint> mse_curve(System& sys, const EvalOptions& opt);

/// Vector mutual information between payload and soft estimate per use.
std::vector<MetricPoint> mi_curve(System& sys, const EvalOptions& opt);

struct BmiPoint {
    double snr_db;
    int t;
    int i, j;
    double mi_bits;
};

/// Bit-wise MI matrix at every (snr, t).
std::vector<BmiPoint> bmi_curve(System& sys, const EvalOptions& opt);

/// Batch-mean transmit power per use at 10^6 samples (or opt.n_samples),
/// for power-constraint audits. Metric name "mean_power".
std::vector<MetricPoint> power_curve(System& sys, const EvalOptions& opt);

/// Evaluation batching constants; every system consumes noise at this
/// granularity so paired-noise comparisons line up.
inline constexpr int kEvalBatch = 1024;
inline constexpr long kEvalShard = 8192;

} // namespace progtr
