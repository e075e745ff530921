#include "progtr/predistortion.hpp"

#include <cmath>

#include "progtr/errors.hpp"

namespace progtr {

double twta_inverse_amplitude(double target, const TwtaParams& p) {
    if (target < 0.0 || target > twta_peak_output(p)) {
        throw NumericError("predistort: amplitude outside the invertible range");
    }
    if (target == 0.0) return 0.0;
    double lo = 0.0, hi = twta_peak_input(p);
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (twta_amplitude(mid, p) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::complex<double> predistort(std::complex<double> x, const TwtaParams& p) {
    double rho = std::abs(x);
    if (rho == 0.0) return {0.0, 0.0};
    double rho_in = twta_inverse_amplitude(rho, p);
    double phi = std::arg(x) - twta_phase(rho_in, p);
    return std::polar(rho_in, phi);
}

double power_scale_factor(const QamConstellation& c, const TwtaParams& p) {
    double max_amp = 0.0;
    for (const auto& s : c.points) max_amp = std::max(max_amp, std::abs(s));
    return twta_peak_input(p) / max_amp;
}

QamConstellation power_scale(const QamConstellation& c, const TwtaParams& p) {
    double f = power_scale_factor(c, p);
    QamConstellation out = c;
    out.scale *= f;
    for (double& v : out.axis_level) v *= f;
    for (auto& s : out.points) s *= f;
    return out;
}

} // namespace progtr
