#include "mrqm/pulse.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace mrqm {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Standard deviation of the amplitude gaussian with the given power FWHM.
double gaussian_sigma(double power_fwhm) { return power_fwhm / (2.0 * std::sqrt(kLn2)); }

}  // namespace

void validate_pulse(const Pulse& pulse)
{
    std::vector<ValidationIssue> issues;
    if (!(pulse.power_fwhm > 0.0) || !std::isfinite(pulse.power_fwhm))
        issues.push_back({"pulse.power_fwhm", "must be positive"});
    if (!(pulse.amplitude > 0.0) || !std::isfinite(pulse.amplitude))
        issues.push_back({"pulse.amplitude", "must be positive"});
    if (!std::isfinite(pulse.center_time))
        issues.push_back({"pulse.center_time", "must be finite"});
    if (!std::isfinite(pulse.carrier_offset_mhz))
        issues.push_back({"pulse.carrier_offset_mhz", "must be finite"});
    if (!issues.empty())
        throw ValidationError(std::move(issues));
}

cplx pulse_envelope(const Pulse& pulse, double t)
{
    const double x = t - pulse.center_time;
    double magnitude = 0.0;
    switch (pulse.shape) {
    case PulseShape::gaussian:
        magnitude = pulse.amplitude * std::exp(-2.0 * kLn2 * x * x / (pulse.power_fwhm * pulse.power_fwhm));
        break;
    case PulseShape::rectangular:
        magnitude = std::abs(x) <= 0.5 * pulse.power_fwhm ? pulse.amplitude : 0.0;
        break;
    }
    if (magnitude == 0.0)
        return {0.0, 0.0};
    return magnitude * std::polar(1.0, -angular(pulse.carrier_offset_mhz) * t);
}

cplx pulse_spectrum(const Pulse& pulse, double omega)
{
    const double x = omega - angular(pulse.carrier_offset_mhz);
    const cplx shift = std::polar(1.0, x * pulse.center_time);
    switch (pulse.shape) {
    case PulseShape::gaussian: {
        const double sigma = gaussian_sigma(pulse.power_fwhm);
        return pulse.amplitude * sigma * std::exp(-0.5 * sigma * sigma * x * x) * shift;
    }
    case PulseShape::rectangular: {
        const double half = 0.5 * pulse.power_fwhm;
        const double arg = x * half;
        const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
        return pulse.amplitude * pulse.power_fwhm * sinc / std::sqrt(kTwoPi) * shift;
    }
    }
    return {};
}

double pulse_energy(const Pulse& pulse)
{
    const double a2 = pulse.amplitude * pulse.amplitude;
    switch (pulse.shape) {
    case PulseShape::gaussian:
        return a2 * pulse.power_fwhm * std::sqrt(std::numbers::pi / (4.0 * kLn2));
    case PulseShape::rectangular:
        return a2 * pulse.power_fwhm;
    }
    return 0.0;
}

Pulse comb_matched_pulse(std::size_t n_teeth, double spacing_mhz, double center_time)
{
    if (n_teeth < 2 || !(spacing_mhz > 0.0))
        throw ValidationError("pulse", "comb-matched pulse needs n >= 2 and positive spacing");
    // |f|^2 of a gaussian with power FWHM tau has angular FWHM 4 ln2 / tau.
    const double bandwidth = static_cast<double>(n_teeth - 1) * std::numbers::pi * spacing_mhz;
    Pulse pulse;
    pulse.shape = PulseShape::gaussian;
    pulse.amplitude = 1.0;
    pulse.power_fwhm = 4.0 * kLn2 / bandwidth;
    pulse.center_time = center_time;
    return pulse;
}

Pulse scaled(Pulse pulse, double factor)
{
    pulse.amplitude *= factor;
    return pulse;
}

}  // namespace mrqm
