#pragma once

#include <complex>

#include "mrqm/model.hpp"

namespace mrqm {

using cplx = std::complex<double>;

enum class PulseShape { gaussian, rectangular };

// Input envelope a_in(t). The width is the full width at half maximum of
// |a_in|^2; for a rectangular pulse it is the full support length.
struct Pulse
{
    PulseShape shape = PulseShape::gaussian;
    double amplitude = 1.0;
    double center_time = 0.0;         // us
    double power_fwhm = 0.05;         // us
    double carrier_offset_mhz = 0.0;  // carrier relative to the reference frequency
};

void validate_pulse(const Pulse& pulse);

/// Time-domain envelope. The carrier enters as exp(-i * 2pi * offset * t).
cplx pulse_envelope(const Pulse& pulse, double t);

/// Spectral profile f(omega) under a_in(t) = (2pi)^{-1/2} Int dw e^{-iwt} f(w).
/// With this symmetric convention Int|a_in|^2 dt == Int|f|^2 dw.
cplx pulse_spectrum(const Pulse& pulse, double omega);

/// Exact Int |a_in|^2 dt.
double pulse_energy(const Pulse& pulse);

// Gaussian with a power FWHM whose spectral width equals (N - 1) * pi * spacing,
// i.e. half the angular span of an N-tooth comb.
Pulse comb_matched_pulse(std::size_t n_teeth, double spacing_mhz, double center_time = 0.0);

// Returns a copy with amplitude scaled by `factor`.
Pulse scaled(Pulse pulse, double factor);

}  // namespace mrqm
