#pragma once

#include <string>
#include <vector>

#include "progtr/transceiver.hpp"

namespace progtr {

/// Everything needed to reconstruct and evaluate a trained model: the
/// scenario name, network/channel configuration, and one parameter block per
/// user. Serialized little-endian; round-trips byte-exactly.
struct Checkpoint {
    std::string scenario = "custom";
    TransceiverConfig config;
    ChannelSpec channel;
    double p_max = 1.0;
    std::vector<ad::ParameterSet> users;

    int num_users() const { return static_cast<int>(users.size()); }
};

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Rebuild runnable pairs from a checkpoint (one Transceiver per user with
/// the stored weights).
std::vector<Transceiver> instantiate(const Checkpoint& ck);

} // namespace progtr
