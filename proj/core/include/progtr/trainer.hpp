#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "progtr/checkpoint.hpp"
#include "progtr/objective.hpp"
#include "progtr/transceiver.hpp"

namespace progtr {

struct TrainConfig {
    TransceiverConfig net;
    ChannelSpec channel;
    LossWeights loss; // alpha must carry net.T entries
    double snr_lo_db = 0.0;
    double snr_hi_db = 30.0;
    int batch_size = 512; // >= 256 so batch-mean power estimates are tight
    long iterations = 200000;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    int num_users = 1;
    // Multi-user fairness schedule (ignored when num_users == 1).
    double psi = 1.1;
    int fairness_window = 50;       // loss smoothing; 1 disables smoothing
    bool fairness_scope_all = true; // per-user optimizers step all weights, not just their pair
    long history_every = 100;
    std::string scenario = "custom";
    // Optional warm start: initial weights come from this checkpoint instead
    // of fresh initialization (net/channel/user structure must match). Lets a
    // caller continue a run at a lower learning rate. Not owned.
    const Checkpoint* resume = nullptr;
};

/// One logged (user, use) entry; rows come in groups of num_users * T per
/// logged iteration.
struct HistoryRow {
    long iter;
    int optimizer_index; // 0 = joint objective, i >= 1 = user i's optimizer
    int user;            // 0-based
    int t;               // 1-based channel use
    double loss;         // unweighted per-use loss for this user
    double mean_power;   // batch-mean |x|^2 at this use
    double snr_db;
};

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<HistoryRow> history;
    std::vector<long> optimizer_steps; // size num_users + 1, [0] = joint
    long iterations_run = 0;
    bool aborted = false;
    long abort_iteration = -1;
    std::string abort_reason;
};

/// Returns i (1-based) when user i's loss exceeds psi times every other
/// user's, else 0 (joint optimizer). At most one user can dominate when
/// psi > 1.
int fairness_select_optimizer(const std::vector<double>& losses, double psi);

/// End-to-end training; num_users == 1 is the plain single-user loop, more
/// users adds the per-user optimizers with the dominance schedule. A
/// numeric failure aborts and returns the last good weights with the abort
/// iteration recorded.
TrainResult train(const TrainConfig& cfg);

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows);

} // namespace progtr
