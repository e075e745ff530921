#include "progtr/analog_baseline.hpp"

#include <cmath>

namespace progtr {

std::complex<double> uncoded_encode(double d0, double d1, double p_max) {
    double a = std::sqrt(p_max / 2.0);
    return {a * d0, a * d1};
}

void uncoded_mmse(std::complex<double> y, double noise_var, double p_max, double& d0_hat,
                  double& d1_hat) {
    double a = std::sqrt(p_max / 2.0);
    double sigma_dim = noise_var / 2.0;
    double gain = a / (a * a + sigma_dim);
    d0_hat = gain * y.real();
    d1_hat = gain * y.imag();
}

double uncoded_mse(double snr_linear) { return 1.0 / (1.0 + snr_linear); }

std::complex<double> repetition_encode(double d, double p_max) {
    double a = std::sqrt(p_max / 2.0);
    return {a * d, a * d};
}

double repetition_mmse(std::complex<double> y, double noise_var, double p_max) {
    double a = std::sqrt(p_max / 2.0);
    double sigma_dim = noise_var / 2.0;
    // two independent looks at a*d: sufficient statistic is the sum
    return a * (y.real() + y.imag()) / (2.0 * a * a + sigma_dim);
}

double repetition_mse(double snr_linear) { return 1.0 / (1.0 + 2.0 * snr_linear); }

} // namespace progtr
