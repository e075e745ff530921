#include "progtr/trainer.hpp"

#include <deque>
#include <numeric>
#include <utility>

#include "progtr/adam.hpp"
#include "progtr/csv.hpp"
#include "progtr/errors.hpp"
#include "progtr/source.hpp"

namespace progtr {

using ad::Tensor;
using ad::Var;

int fairness_select_optimizer(const std::vector<double>& losses, double psi) {
    if (losses.size() < 2) {
        throw ConfigError("fairness_select_optimizer: needs at least two users");
    }
    if (psi <= 1.0) throw ConfigError("fairness_select_optimizer: psi must exceed 1");
    for (double l : losses) {
        if (!(l > 0.0)) throw NumericError("fairness_select_optimizer: losses must be positive");
    }
    for (std::size_t i = 0; i < losses.size(); ++i) {
        bool dominates = true;
        for (std::size_t j = 0; j < losses.size(); ++j) {
            if (j == i) continue;
            if (!(losses[i] > psi * losses[j])) {
                dominates = false;
                break;
            }
        }
        if (dominates) return static_cast<int>(i) + 1;
    }
    return 0;
}

namespace {

void validate(const TrainConfig& cfg) {
    if (cfg.net.b < 1) throw ConfigError("train: b must be positive");
    if (cfg.net.T < 1) throw ConfigError("train: T must be positive");
    if (cfg.net.layers < 1) throw ConfigError("train: layers must be positive");
    if (cfg.net.state_size < 1) throw ConfigError("train: state_size must be positive");
    if (cfg.batch_size < 256) {
        throw ConfigError("train: batch_size must be at least 256 (power-estimate fidelity)");
    }
    if (cfg.iterations < 0) throw ConfigError("train: iterations must be non-negative");
    if (cfg.lr <= 0.0) throw ConfigError("train: lr must be positive");
    if (cfg.snr_lo_db > cfg.snr_hi_db) throw ConfigError("train: snr range is inverted");
    if (cfg.loss.alpha.size() != static_cast<std::size_t>(cfg.net.T)) {
        throw ConfigError("train: need one alpha per channel use");
    }
    if (cfg.loss.p_max <= 0.0) throw ConfigError("train: p_max must be positive");
    if (cfg.num_users < 1) throw ConfigError("train: num_users must be positive");
    if (cfg.channel.num_users() != cfg.num_users) {
        throw IncompatibilityError("train: channel gain count does not match num_users");
    }
    if (cfg.num_users > 1 && cfg.channel.variant != ChannelVariant::mac_awgn) {
        throw IncompatibilityError("train: multi-user training needs a mac_awgn channel");
    }
    if (cfg.num_users > 1) {
        if (cfg.psi <= 1.0) throw ConfigError("train: psi must exceed 1");
        if (cfg.fairness_window < 1) throw ConfigError("train: fairness_window must be positive");
    }
    if (cfg.history_every < 1) throw ConfigError("train: history_every must be positive");
}

} // namespace

TrainResult train(const TrainConfig& cfg) {
    validate(cfg);
    const int M = cfg.num_users;
    const int T = cfg.net.T;
    const SourceKind src = source_for(cfg.net.input_kind);

    std::vector<Transceiver> pairs;
    pairs.reserve(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        RngStream init_rng(cfg.seed, "init", static_cast<std::uint64_t>(m));
        pairs.push_back(Transceiver::create(cfg.net, init_rng));
    }
    if (cfg.resume != nullptr) {
        if (cfg.resume->num_users() != M) {
            throw IncompatibilityError("train: resume checkpoint has " +
                                       std::to_string(cfg.resume->num_users()) + " users, expected " +
                                       std::to_string(M));
        }
        for (int m = 0; m < M; ++m) {
            // assign_values reports any name/shape mismatch with the network.
            pairs[static_cast<std::size_t>(m)].params().assign_values(
                cfg.resume->users[static_cast<std::size_t>(m)]);
        }
    }
    std::vector<const Transceiver*> pair_ptrs;
    std::vector<ad::ParameterSet*> sets;
    for (auto& p : pairs) {
        pair_ptrs.push_back(&p);
        sets.push_back(&p.params());
    }
    std::vector<ad::Parameter*> all_params = ad::collect(sets);

    // O_0 steps everything on the joint objective; O_i steps either
    // everything or only pair i, minimizing L_i alone.
    std::vector<ad::Adam> optimizers;
    std::vector<std::vector<ad::Parameter*>> groups;
    optimizers.emplace_back(cfg.lr);
    groups.push_back(all_params);
    if (M > 1) {
        for (int m = 0; m < M; ++m) {
            optimizers.emplace_back(cfg.lr);
            groups.push_back(cfg.fairness_scope_all ? all_params : ad::collect(pairs[static_cast<std::size_t>(m)].params()));
        }
    }

    TrainResult result;
    result.optimizer_steps.assign(optimizers.size(), 0);
    std::vector<std::deque<double>> loss_window(static_cast<std::size_t>(M));

    for (long iter = 0; iter < cfg.iterations; ++iter) {
        RngStream payload_rng(cfg.seed, "payload", static_cast<std::uint64_t>(iter));
        RngStream snr_rng(cfg.seed, "snr", static_cast<std::uint64_t>(iter));
        RngStream noise_rng(cfg.seed, "noise", static_cast<std::uint64_t>(iter));

        std::vector<Tensor> payloads;
        payloads.reserve(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) {
            payloads.push_back(sample_batch(src, cfg.net.b, cfg.batch_size, payload_rng));
        }
        double snr_db = snr_rng.uniform(cfg.snr_lo_db, cfg.snr_hi_db);
        double noise_var = snr_to_noise_var(snr_db, cfg.loss.p_max);

        try {
            ad::Tape tape;
            Rollout roll = run_link(tape, pair_ptrs, payloads, snr_db, cfg.channel, noise_var, noise_rng);

            std::vector<Var> per_user_loss;
            std::vector<std::vector<Var>> step_losses(static_cast<std::size_t>(M));
            for (int m = 0; m < M; ++m) {
                Var d = tape.constant(payloads[static_cast<std::size_t>(m)], "payload");
                auto& sl = step_losses[static_cast<std::size_t>(m)];
                for (int t = 0; t < T; ++t) {
                    Var est = roll.estimates[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
                    sl.push_back(cfg.net.input_kind == InputKind::bits ? bce_step_loss(tape, d, est)
                                                                       : mse_step_loss(tape, d, est));
                }
                per_user_loss.push_back(
                    progtr_loss(tape, sl, roll.mean_powers[static_cast<std::size_t>(m)], cfg.loss));
            }
            Var total = M == 1 ? per_user_loss[0] : multiuser_loss(tape, per_user_loss);

            int sel = 0;
            if (M > 1) {
                std::vector<double> smoothed(static_cast<std::size_t>(M));
                bool positive = true;
                for (int m = 0; m < M; ++m) {
                    auto& win = loss_window[static_cast<std::size_t>(m)];
                    win.push_back(per_user_loss[static_cast<std::size_t>(m)].value()[0]);
                    while (static_cast<int>(win.size()) > cfg.fairness_window) win.pop_front();
                    double s = std::accumulate(win.begin(), win.end(), 0.0) / static_cast<double>(win.size());
                    smoothed[static_cast<std::size_t>(m)] = s;
                    positive = positive && s > 0.0;
                }
                if (positive) sel = fairness_select_optimizer(smoothed, cfg.psi);
            }

            tape.backward(sel == 0 ? total : per_user_loss[static_cast<std::size_t>(sel - 1)]);
            optimizers[static_cast<std::size_t>(sel)].step(groups[static_cast<std::size_t>(sel)]);
            ++result.optimizer_steps[static_cast<std::size_t>(sel)];
            // step() only clears its own group's grads; backward touched them all.
            for (auto* p : all_params) p->grad.fill(0.0);

            if (iter % cfg.history_every == 0 || iter + 1 == cfg.iterations) {
                for (int m = 0; m < M; ++m) {
                    for (int t = 0; t < T; ++t) {
                        result.history.push_back(
                            {iter, sel, m, t + 1,
                             step_losses[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)].value()[0],
                             roll.mean_powers[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)].value()[0],
                             snr_db});
                    }
                }
            }
            result.iterations_run = iter + 1;
        } catch (const NumericError& e) {
            // The failing iteration never stepped, so the current weights
            // are the last good state.
            result.aborted = true;
            result.abort_iteration = iter;
            result.abort_reason = e.what();
            break;
        }
    }

    result.checkpoint.scenario = cfg.scenario;
    result.checkpoint.config = cfg.net;
    result.checkpoint.channel = cfg.channel;
    result.checkpoint.p_max = cfg.loss.p_max;
    for (auto& p : pairs) result.checkpoint.users.push_back(p.params().clone());
    return result;
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows) {
    CsvWriter csv(path, {"iter", "optimizer_index", "user", "t", "loss", "mean_power", "snr_db"});
    for (const auto& r : rows) {
        csv.row({csv_num(r.iter), csv_num(r.optimizer_index), csv_num(r.user), csv_num(r.t),
                 csv_num(r.loss), csv_num(r.mean_power), csv_num(r.snr_db)});
    }
}

} // namespace progtr
