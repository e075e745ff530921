#pragma once

namespace progtr {

/// Gaussian tail Q(x) = P(N(0,1) > x).
double q_func(double x);

/// Shannon capacity of the complex AWGN channel, bits per channel use.
double capacity_bits(double snr_linear);

/// Rate-distortion lower bound on per-variable MSE for one unit-variance
/// real Gaussian per complex use (b=1, T=1): (1/2) log2(1/D) = C.
double rd_lower_bound(double snr_linear);

/// Exact BER of Gray-labeled QPSK over AWGN at total-SNR convention
/// snr = p_max / sigma^2: Q(sqrt(snr)).
double qpsk_ber(double snr_linear);

/// Exact BER of Gray-labeled 16QAM over AWGN:
/// (1/4)(3 Q(a) + 2 Q(3a) - Q(5a)), a = sqrt(snr/5).
double gray_qam16_ber(double snr_linear);

} // namespace progtr
