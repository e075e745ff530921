#pragma once

#include <string>
#include <vector>

#include "progtr/qam.hpp"

namespace progtr {

enum class SchemeVariant {
    qam16_split,         // T=2, b=8: 4 bits per use on 16QAM
    qam256_interleaved,  // T=2, b=8 or T=4, b=16: all-bits uses with interleaving
    qam16_seq,           // T=4, b=16: 4 bits per use on 16QAM
};

/// Fixed bit-to-symbol assignment over T channel uses. use_bits[t] lists the
/// payload bit indices (0-based) feeding use t's symbol label, x-axis half
/// first, MSB first within each half.
struct MultiUseScheme {
    std::string name;
    int T = 0;
    int b = 0;
    QamConstellation constellation;
    std::vector<std::vector<int>> use_bits; // [T][bits_per_symbol]
    std::vector<std::vector<bool>> sent_by; // [T][b]: bit i appears in some use <= t

    /// bits: b entries in {0,1}; out: T symbols.
    std::vector<std::complex<double>> encode(const int* bits) const;
};

MultiUseScheme make_scheme_t2b8(SchemeVariant v, double p_max = 1.0);
MultiUseScheme make_scheme_t4b16(SchemeVariant v, double p_max = 1.0);

} // namespace progtr
