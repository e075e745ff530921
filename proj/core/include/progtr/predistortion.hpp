#pragma once

#include <complex>

#include "progtr/channel.hpp"
#include "progtr/qam.hpp"

namespace progtr {

/// Solve A(rho) = target on the rising branch [0, 1/sqrt(beta_rho)] by
/// bisection to 1e-12. target must lie in [0, A_peak].
double twta_inverse_amplitude(double target, const TwtaParams& p);

/// g^{-1}: amplitude mapped through the inverse AM/AM curve, phase
/// pre-rotated by -Psi so that twta_apply(predistort(x)) == x.
std::complex<double> predistort(std::complex<double> x, const TwtaParams& p);

/// Factor that puts the largest constellation point exactly at the
/// amplifier's peak-gain input amplitude 1/sqrt(beta_rho).
double power_scale_factor(const QamConstellation& c, const TwtaParams& p);
QamConstellation power_scale(const QamConstellation& c, const TwtaParams& p);

} // namespace progtr
