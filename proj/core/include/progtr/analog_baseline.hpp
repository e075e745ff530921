#pragma once

#include <complex>

namespace progtr {

/// Uncoded transmission of two unit-variance reals on one complex use
/// (b=2, T=1): x = sqrt(p_max/2) * (d0, d1), so E|x|^2 = p_max, followed by
/// per-dimension scalar MMSE estimation.
std::complex<double> uncoded_encode(double d0, double d1, double p_max);
void uncoded_mmse(std::complex<double> y, double noise_var, double p_max, double& d0_hat,
                  double& d1_hat);
/// Closed-form per-variable MSE, snr_linear = p_max / noise_var.
double uncoded_mse(double snr_linear);

/// Repetition of one real on both dimensions (b=1, T=1):
/// x = sqrt(p_max/2) * (d, d), MMSE-combined at the receiver.
std::complex<double> repetition_encode(double d, double p_max);
double repetition_mmse(std::complex<double> y, double noise_var, double p_max);
double repetition_mse(double snr_linear);

} // namespace progtr
