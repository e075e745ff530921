#include "progtr/qam.hpp"

#include <cmath>

#include "progtr/errors.hpp"

namespace progtr {

QamConstellation make_qam(int order, double p_max) {
    if (order != 4 && order != 16 && order != 256) {
        throw ConfigError("qam order must be 4, 16 or 256");
    }
    QamConstellation c;
    c.order = order;
    int k = 0;
    while ((1 << (2 * k)) != order) ++k;
    c.bits_per_axis = k;
    int levels = 1 << k;
    // odd-integer levels -(L-1)..(L-1); per-axis mean square (L^2-1)/3
    double mean_sq = 2.0 * (static_cast<double>(levels) * levels - 1.0) / 3.0;
    c.scale = std::sqrt(p_max / mean_sq);

    c.axis_level.assign(static_cast<std::size_t>(levels), 0.0);
    for (int i = 0; i < levels; ++i) {
        int gray = i ^ (i >> 1);
        double level = static_cast<double>(2 * i - (levels - 1)) * c.scale;
        if (levels == 2) level = -level; // QPSK convention: label 0 -> +
        c.axis_level[static_cast<std::size_t>(gray)] = level;
    }

    c.points.resize(static_cast<std::size_t>(order));
    for (int label = 0; label < order; ++label) {
        int x = label >> k;
        int y = label & (levels - 1);
        c.points[static_cast<std::size_t>(label)] = {c.axis_level[static_cast<std::size_t>(x)],
                                                     c.axis_level[static_cast<std::size_t>(y)]};
    }
    return c;
}

int QamConstellation::axis_label_of(const int* bits) const {
    int label = 0;
    for (int j = 0; j < bits_per_axis; ++j) label = (label << 1) | (bits[j] & 1);
    return label;
}

std::complex<double> QamConstellation::modulate(const int* bits) const {
    int x = axis_label_of(bits);
    int y = axis_label_of(bits + bits_per_axis);
    return {axis_level[static_cast<std::size_t>(x)], axis_level[static_cast<std::size_t>(y)]};
}

int QamConstellation::demodulate_axis(double v) const {
    int best = 0;
    double best_d = std::abs(v - axis_level[0]);
    for (std::size_t i = 1; i < axis_level.size(); ++i) {
        double d = std::abs(v - axis_level[i]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

void QamConstellation::demodulate(std::complex<double> y, int* bits_out) const {
    int x = demodulate_axis(y.real());
    int yl = demodulate_axis(y.imag());
    for (int j = 0; j < bits_per_axis; ++j) {
        bits_out[j] = (x >> (bits_per_axis - 1 - j)) & 1;
        bits_out[bits_per_axis + j] = (yl >> (bits_per_axis - 1 - j)) & 1;
    }
}

} // namespace progtr
