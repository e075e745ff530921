#pragma once

#include <string>
#include <vector>

#include "progtr/channel.hpp"
#include "progtr/nn.hpp"

namespace progtr {

enum class InputKind { bits, reals };

struct TransceiverConfig {
    int b = 8;
    int T = 2;
    InputKind input_kind = InputKind::bits;
    int layers = 3;
    int state_size = 64;
};

/// Normalized SNR feature fed to both networks.
inline double snr_feature(double snr_db) { return snr_db / 30.0; }

/// One Tx/Rx pair. Owns its parameters; the layer structs hold stable
/// pointers into the set (ParameterSet stores parameters behind unique_ptr,
/// so moving a Transceiver keeps them valid).
class Transceiver {
public:
    static Transceiver create(const TransceiverConfig& cfg, RngStream& init_rng);

    const TransceiverConfig& config() const { return cfg_; }
    ad::ParameterSet& params() { return params_; }
    const ad::ParameterSet& params() const { return params_; }

    /// Fresh per-payload recurrent states (zeros).
    std::vector<ad::Var> tx_initial_state(ad::Tape& t, int batch) const;
    std::vector<ad::Var> rx_initial_state(ad::Tape& t, int batch) const;
    ad::Var zero_accumulator(ad::Tape& t, int batch) const;

    /// One Tx step: d is [batch,b], snr_feat is [batch,1]; states updated in
    /// place; returns the symbol batch [batch,2].
    ad::Var tx_step(ad::Tape& t, ad::Var d, ad::Var snr_feat, std::vector<ad::Var>& states) const;

    /// One Rx step: y is [batch,2]; returns the updated accumulator
    /// (pre-activation running sum); states updated in place.
    ad::Var rx_step(ad::Tape& t, ad::Var y, ad::Var snr_feat, std::vector<ad::Var>& states,
                    ad::Var acc) const;

    /// sigmoid(acc) in bits mode, acc itself in reals mode.
    ad::Var estimate_from_accumulator(ad::Tape& t, ad::Var acc) const;

private:
    TransceiverConfig cfg_;
    ad::ParameterSet params_;
    nn::GruStack tx_rnn_, rx_rnn_;
    nn::Dense tx_head_, rx_head_;
};

/// Unrolled forward pass of M pairs over one shared channel; M=1 is the
/// single-user link. Everything lives on one tape, trainable end-to-end.
struct Rollout {
    // indexed [user][t]
    std::vector<std::vector<ad::Var>> symbols;
    std::vector<std::vector<ad::Var>> accumulators;
    std::vector<std::vector<ad::Var>> estimates;
    std::vector<std::vector<ad::Var>> mean_powers; // scalars
};

Rollout run_link(ad::Tape& t, const std::vector<const Transceiver*>& pairs,
                 const std::vector<ad::Tensor>& payloads, double snr_db, const ChannelSpec& channel,
                 double noise_var, RngStream& noise_rng);

/// Single-user convenience wrapper.
Rollout run_link(ad::Tape& t, const Transceiver& pair, const ad::Tensor& payload, double snr_db,
                 const ChannelSpec& channel, double noise_var, RngStream& noise_rng);

} // namespace progtr
