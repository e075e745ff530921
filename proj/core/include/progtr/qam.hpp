#pragma once

#include <complex>
#include <vector>

namespace progtr {

/// Square Gray-labeled QAM. A symbol's label is split evenly between the two
/// axes, x-axis bits first, each half read MSB-first. Axis labels follow the
/// binary-reflected Gray sequence from the most negative level upward, e.g.
/// 16QAM per-axis [00,01,11,10] -> [-3,-1,+1,+3]/sqrt(10). QPSK is the
/// special case where label 0 maps to the positive level, so bits 00 ->
/// (+1+j)/sqrt(2).
struct QamConstellation {
    int order = 0;         // 4, 16 or 256
    int bits_per_axis = 0; // 1, 2 or 4
    double scale = 0.0;    // multiplies the odd-integer levels

    std::vector<double> axis_level;             // indexed by axis label
    std::vector<std::complex<double>> points;   // indexed by full symbol label

    int bits_per_symbol() const { return 2 * bits_per_axis; }

    /// bits: bits_per_symbol() entries in {0,1}, x-axis half first, MSB first.
    std::complex<double> modulate(const int* bits) const;
    int axis_label_of(const int* bits) const; // MSB-first half-label

    /// Nearest level on one axis -> axis label.
    int demodulate_axis(double v) const;
    /// Per-symbol nearest-point demodulation; writes bits_per_symbol() bits.
    void demodulate(std::complex<double> y, int* bits_out) const;
};

QamConstellation make_qam(int order, double p_max = 1.0);

} // namespace progtr
