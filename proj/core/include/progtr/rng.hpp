#pragma once

#include <cstdint>
#include <string_view>

namespace progtr {

/// Counter-based random stream (Philox4x32-10, Salmon et al. 2011).
///
/// A stream is addressed by (master seed, purpose tag, shard index); draws
/// within a stream advance a 128-bit counter. Streams never overlap, do not
/// depend on call interleaving elsewhere, and produce identical sequences on
/// every platform, which is what makes sharded Monte-Carlo runs and training
/// reruns byte-reproducible.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view purpose, std::uint64_t shard = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (fully specified, no library variance).
    double normal();
    /// Fair coin as 0.0 / 1.0.
    double coin();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    void refill();

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t block_[4];
    int avail_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// FNV-1a of the purpose tag; exposed for tests that pin stream identities.
std::uint64_t hash_purpose(std::string_view tag);

} // namespace progtr
