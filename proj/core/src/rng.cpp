#include "progtr/rng.hpp"

#include <cmath>

namespace progtr {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    const std::uint32_t c0 = hi1 ^ ctr[1] ^ key[0];
    const std::uint32_t c1 = lo1;
    const std::uint32_t c2 = hi0 ^ ctr[3] ^ key[1];
    const std::uint32_t c3 = lo0;
    ctr[0] = c0;
    ctr[1] = c1;
    ctr[2] = c2;
    ctr[3] = c3;
}

} // namespace

std::uint64_t hash_purpose(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view purpose, std::uint64_t shard) {
    const std::uint64_t ph = hash_purpose(purpose);
    // Key from the seed, stream identity in the upper counter half.
    key_[0] = static_cast<std::uint32_t>(master_seed);
    key_[1] = static_cast<std::uint32_t>(master_seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<std::uint32_t>(ph ^ shard);
    ctr_[3] = static_cast<std::uint32_t>((ph >> 32) ^ (shard >> 32));
}

void RngStream::refill() {
    std::uint32_t work[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
    std::uint32_t key[2] = {key_[0], key_[1]};
    for (int round = 0; round < 10; ++round) {
        philox_round(work, key);
        key[0] += kPhiloxW32A;
        key[1] += kPhiloxW32B;
    }
    block_[0] = work[0];
    block_[1] = work[1];
    block_[2] = work[2];
    block_[3] = work[3];
    avail_ = 4;
    if (++ctr_[0] == 0) ++ctr_[1]; // 64-bit draw counter within the stream
}

std::uint32_t RngStream::next_u32() {
    if (avail_ == 0) refill();
    return block_[4 - avail_--];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    // Box-Muller; u1 is kept away from 0 so log() stays finite.
    double u1 = uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_normal_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

double RngStream::coin() {
    return (next_u32() & 1u) ? 1.0 : 0.0;
}

std::uint64_t RngStream::below(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = n * ((~0ull) / n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
}

} // namespace progtr
