#include "progtr/reference_curves.hpp"

#include <cmath>

namespace progtr {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double capacity_bits(double snr_linear) { return std::log2(1.0 + snr_linear); }

double rd_lower_bound(double snr_linear) {
    double c = 1.0 + snr_linear;
    return 1.0 / (c * c);
}

double qpsk_ber(double snr_linear) { return q_func(std::sqrt(snr_linear)); }

double gray_qam16_ber(double snr_linear) {
    double a = std::sqrt(snr_linear / 5.0);
    return 0.25 * (3.0 * q_func(a) + 2.0 * q_func(3.0 * a) - q_func(5.0 * a));
}

} // namespace progtr
