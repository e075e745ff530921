#include "progtr/scheme.hpp"

#include "progtr/errors.hpp"

namespace progtr {

namespace {

// x-axis (b3,b8,b1,b6), y-axis (b7,b4,b5,b2), as 0-based offsets into an
// 8-bit block
constexpr int kInterleave[8] = {2, 7, 0, 5, 6, 3, 4, 1};

std::vector<int> interleaved_block(int base) {
    std::vector<int> v(8);
    for (int i = 0; i < 8; ++i) v[static_cast<std::size_t>(i)] = base + kInterleave[i];
    return v;
}

std::vector<int> straight_block(int base, int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = base + i;
    return v;
}

void finish(MultiUseScheme& s) {
    s.sent_by.assign(static_cast<std::size_t>(s.T), std::vector<bool>(static_cast<std::size_t>(s.b), false));
    std::vector<bool> seen(static_cast<std::size_t>(s.b), false);
    for (int t = 0; t < s.T; ++t) {
        for (int bit : s.use_bits[static_cast<std::size_t>(t)]) seen[static_cast<std::size_t>(bit)] = true;
        s.sent_by[static_cast<std::size_t>(t)] = seen;
    }
}

} // namespace

std::vector<std::complex<double>> MultiUseScheme::encode(const int* bits) const {
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(T));
    std::vector<int> label(static_cast<std::size_t>(constellation.bits_per_symbol()));
    for (int t = 0; t < T; ++t) {
        const std::vector<int>& idx = use_bits[static_cast<std::size_t>(t)];
        for (std::size_t j = 0; j < idx.size(); ++j) label[j] = bits[idx[j]];
        out.push_back(constellation.modulate(label.data()));
    }
    return out;
}

MultiUseScheme make_scheme_t2b8(SchemeVariant v, double p_max) {
    MultiUseScheme s;
    s.T = 2;
    s.b = 8;
    switch (v) {
    case SchemeVariant::qam16_split:
        s.name = "qam16_split";
        s.constellation = make_qam(16, p_max);
        s.use_bits = {straight_block(0, 4), straight_block(4, 4)};
        break;
    case SchemeVariant::qam256_interleaved:
        s.name = "qam256_interleaved";
        s.constellation = make_qam(256, p_max);
        s.use_bits = {straight_block(0, 8), interleaved_block(0)};
        break;
    default:
        throw ConfigError("scheme_t2b8: variant must be qam16_split or qam256_interleaved");
    }
    finish(s);
    return s;
}

MultiUseScheme make_scheme_t4b16(SchemeVariant v, double p_max) {
    MultiUseScheme s;
    s.T = 4;
    s.b = 16;
    switch (v) {
    case SchemeVariant::qam16_seq:
        s.name = "qam16_seq";
        s.constellation = make_qam(16, p_max);
        s.use_bits = {straight_block(0, 4), straight_block(4, 4), straight_block(8, 4),
                      straight_block(12, 4)};
        break;
    case SchemeVariant::qam256_interleaved:
        s.name = "qam256_interleaved";
        s.constellation = make_qam(256, p_max);
        s.use_bits = {straight_block(0, 8), straight_block(8, 8), interleaved_block(0),
                      interleaved_block(8)};
        break;
    default:
        throw ConfigError("scheme_t4b16: variant must be qam16_seq or qam256_interleaved");
    }
    finish(s);
    return s;
}

} // namespace progtr
