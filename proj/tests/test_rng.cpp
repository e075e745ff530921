#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "progtr/rng.hpp"

using namespace progtr;

namespace {

// Independent Philox4x32-10 written straight from the algorithm definition,
// used to pin RngStream to the published generator rather than to itself.
void ref_philox(const std::uint32_t ctr_in[4], const std::uint32_t key_in[2], std::uint32_t out[4]) {
    std::uint32_t c[4] = {ctr_in[0], ctr_in[1], ctr_in[2], ctr_in[3]};
    std::uint32_t k[2] = {key_in[0], key_in[1]};
    for (int r = 0; r < 10; ++r) {
        std::uint64_t p0 = 0xD2511F53ull * c[0];
        std::uint64_t p1 = 0xCD9E8D57ull * c[2];
        std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0];
        std::uint32_t n1 = static_cast<std::uint32_t>(p1);
        std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1];
        std::uint32_t n3 = static_cast<std::uint32_t>(p0);
        c[0] = n0;
        c[1] = n1;
        c[2] = n2;
        c[3] = n3;
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
    }
    out[0] = c[0];
    out[1] = c[1];
    out[2] = c[2];
    out[3] = c[3];
}

std::uint64_t ref_fnv1a(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

TEST_CASE("reference philox reproduces the published known-answer vectors") {
    // Known-answer vectors for philox4x32-10 (Salmon et al. 2011 reference
    // implementation's test set).
    std::uint32_t out[4];
    const std::uint32_t zero_ctr[4] = {0, 0, 0, 0};
    const std::uint32_t zero_key[2] = {0, 0};
    ref_philox(zero_ctr, zero_key, out);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    const std::uint32_t ones_ctr[4] = {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
    const std::uint32_t ones_key[2] = {0xffffffffu, 0xffffffffu};
    ref_philox(ones_ctr, ones_key, out);
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    const std::uint32_t pi_ctr[4] = {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
    const std::uint32_t pi_key[2] = {0xa4093822u, 0x299f31d0u};
    ref_philox(pi_ctr, pi_key, out);
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("RngStream output equals reference philox under the stream addressing rule") {
    const std::uint64_t seed = 0x0123456789abcdefull;
    const std::uint64_t shard = 42;
    const std::string_view purpose = "noise";
    RngStream rng(seed, purpose, shard);

    const std::uint64_t ph = ref_fnv1a(purpose);
    std::uint32_t key[2] = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (std::uint64_t block = 0; block < 3; ++block) {
        std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block), 0,
                                static_cast<std::uint32_t>(ph ^ shard),
                                static_cast<std::uint32_t>((ph >> 32) ^ (shard >> 32))};
        std::uint32_t out[4];
        ref_philox(ctr, key, out);
        for (int i = 0; i < 4; ++i) CHECK(rng.next_u32() == out[i]);
    }
}

TEST_CASE("hash_purpose is FNV-1a") {
    CHECK(hash_purpose("") == 0xcbf29ce484222325ull);
    CHECK(hash_purpose("noise") == ref_fnv1a("noise"));
    CHECK(hash_purpose("payload") != hash_purpose("noise"));
}

TEST_CASE("same identity gives the same sequence; any coordinate change gives a different one") {
    RngStream a(7, "eval", 3), b(7, "eval", 3);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u32() == b.next_u32());

    RngStream base(7, "eval", 3), other_seed(8, "eval", 3), other_tag(7, "eval2", 3),
        other_shard(7, "eval", 4);
    bool differ_seed = false, differ_tag = false, differ_shard = false;
    for (int i = 0; i < 16; ++i) {
        std::uint32_t v = base.next_u32();
        differ_seed |= v != other_seed.next_u32();
        differ_tag |= v != other_tag.next_u32();
        differ_shard |= v != other_shard.next_u32();
    }
    CHECK(differ_seed);
    CHECK(differ_tag);
    CHECK(differ_shard);
}

TEST_CASE("uniform lies in [0,1) with the right moments") {
    RngStream rng(11, "test.uniform");
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal has unit variance and zero mean") {
    RngStream rng(11, "test.normal");
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0, sum_cu = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        sum += x;
        sum_sq += x * x;
        sum_cu += x * x * x;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(1.0));
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(sum_cu / n) < 0.05); // symmetry
}

TEST_CASE("coin is a fair 0/1 draw") {
    RngStream rng(11, "test.coin");
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double c = rng.coin();
        CHECK((c == 0.0 || c == 1.0));
        sum += c;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("below(n) stays in range and is unbiased") {
    RngStream rng(11, "test.below");
    std::vector<int> counts(7, 0);
    const int n = 140000;
    for (int i = 0; i < n; ++i) {
        std::uint64_t v = rng.below(7);
        REQUIRE(v < 7);
        ++counts[static_cast<std::size_t>(v)];
    }
    for (int c : counts) CHECK(c == doctest::Approx(n / 7.0).epsilon(0.05));
}

TEST_CASE("uniform(lo,hi) covers the interval") {
    RngStream rng(11, "test.range");
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 10000; ++i) {
        double v = rng.uniform(-2.0, 5.0);
        CHECK(v >= -2.0);
        CHECK(v < 5.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo < -1.9);
    CHECK(hi > 4.9);
}
