#include "progtr/transceiver.hpp"

#include "progtr/errors.hpp"
#include "progtr/objective.hpp"

namespace progtr {

using ad::Tape;
using ad::Tensor;
using ad::Var;

Transceiver Transceiver::create(const TransceiverConfig& cfg, RngStream& init_rng) {
    if (cfg.b < 1 || cfg.T < 1 || cfg.layers < 1 || cfg.state_size < 1) {
        throw ConfigError("transceiver config: b, T, layers, state_size must all be >= 1");
    }
    Transceiver tr;
    tr.cfg_ = cfg;
    int tx_in = cfg.b + 1; // payload + snr feature
    int rx_in = 2 + 1;     // received pair + snr feature
    tr.tx_rnn_ = nn::GruStack::create(tr.params_, "tx", tx_in, cfg.state_size, cfg.layers, init_rng);
    tr.tx_head_ = nn::Dense::create(tr.params_, "tx.head", cfg.state_size, 2, init_rng);
    tr.rx_rnn_ = nn::GruStack::create(tr.params_, "rx", rx_in, cfg.state_size, cfg.layers, init_rng);
    tr.rx_head_ = nn::Dense::create(tr.params_, "rx.head", cfg.state_size, cfg.b, init_rng);
    return tr;
}

std::vector<Var> Transceiver::tx_initial_state(Tape& t, int batch) const {
    return tx_rnn_.initial_state(t, batch);
}

std::vector<Var> Transceiver::rx_initial_state(Tape& t, int batch) const {
    return rx_rnn_.initial_state(t, batch);
}

Var Transceiver::zero_accumulator(Tape& t, int batch) const {
    return t.constant(Tensor({batch, cfg_.b}), "acc0");
}

Var Transceiver::tx_step(Tape& t, Var d, Var snr_feat, std::vector<Var>& states) const {
    if (d.value().cols() != cfg_.b) {
        throw DimensionError("tx_step: payload width " + d.value().shape_str() + " != b");
    }
    Var in = t.concat_cols({d, snr_feat});
    Var top = tx_rnn_.forward(t, in, states);
    return tx_head_.forward(t, top);
}

Var Transceiver::rx_step(Tape& t, Var y, Var snr_feat, std::vector<Var>& states, Var acc) const {
    Var in = t.concat_cols({y, snr_feat});
    Var top = rx_rnn_.forward(t, in, states);
    Var o = rx_head_.forward(t, top);
    return t.add(acc, o);
}

Var Transceiver::estimate_from_accumulator(Tape& t, Var acc) const {
    return cfg_.input_kind == InputKind::bits ? t.sigmoid(acc) : acc;
}

Rollout run_link(Tape& t, const std::vector<const Transceiver*>& pairs,
                 const std::vector<Tensor>& payloads, double snr_db, const ChannelSpec& channel,
                 double noise_var, RngStream& noise_rng) {
    std::size_t M = pairs.size();
    if (M == 0 || payloads.size() != M) {
        throw DimensionError("run_link: need one payload batch per pair");
    }
    if (static_cast<int>(M) != channel.num_users()) {
        throw IncompatibilityError("run_link: channel expects " + std::to_string(channel.num_users()) +
                                   " users, got " + std::to_string(M));
    }
    int batch = payloads[0].rows();
    int T = pairs[0]->config().T;

    Rollout out;
    out.symbols.resize(M);
    out.accumulators.resize(M);
    out.estimates.resize(M);
    out.mean_powers.resize(M);

    Tensor snr_col({batch, 1});
    snr_col.fill(snr_feature(snr_db));
    Var snr_feat = t.constant(std::move(snr_col), "snr");

    std::vector<Var> d_vars;
    std::vector<std::vector<Var>> tx_states(M), rx_states(M);
    std::vector<Var> accs;
    d_vars.reserve(M);
    accs.reserve(M);
    for (std::size_t m = 0; m < M; ++m) {
        const Transceiver& tr = *pairs[m];
        if (tr.config().T != T) throw IncompatibilityError("run_link: mismatched T across pairs");
        d_vars.push_back(t.constant(payloads[m], "payload"));
        tx_states[m] = tr.tx_initial_state(t, batch);
        rx_states[m] = tr.rx_initial_state(t, batch);
        accs.push_back(tr.zero_accumulator(t, batch));
    }

    for (int step = 0; step < T; ++step) {
        std::vector<Var> xs;
        xs.reserve(M);
        for (std::size_t m = 0; m < M; ++m) {
            Var x = pairs[m]->tx_step(t, d_vars[m], snr_feat, tx_states[m]);
            out.symbols[m].push_back(x);
            out.mean_powers[m].push_back(mean_power(t, x));
            xs.push_back(x);
        }
        Var y = channel_apply(t, channel, xs, noise_var, noise_rng);
        for (std::size_t m = 0; m < M; ++m) {
            const Transceiver& tr = *pairs[m];
            accs[m] = tr.rx_step(t, y, snr_feat, rx_states[m], accs[m]);
            out.accumulators[m].push_back(accs[m]);
            out.estimates[m].push_back(tr.estimate_from_accumulator(t, accs[m]));
        }
    }
    return out;
}

Rollout run_link(Tape& t, const Transceiver& pair, const Tensor& payload, double snr_db,
                 const ChannelSpec& channel, double noise_var, RngStream& noise_rng) {
    return run_link(t, std::vector<const Transceiver*>{&pair}, std::vector<Tensor>{payload}, snr_db,
                    channel, noise_var, noise_rng);
}

} // namespace progtr
