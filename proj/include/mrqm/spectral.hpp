#pragma once

#include <string>
#include <vector>

#include "mrqm/model.hpp"
#include "mrqm/pulse.hpp"
#include "mrqm/trace.hpp"

namespace mrqm {

// Reflection r(omega) = kappa / D(omega) - 1 of the single-port device, with
//   D(w) = kappa/2 + gamma_r + i(2pi Delta_r - w) + sum_n g_n^2 / (gamma_n + i(2pi Delta_n - w)).
// This is the steady state of the mode equations under e^{-iwt} drive.
cplx transfer_function(const DeviceConfig& config, double omega);

struct SpectralResponse
{
    std::vector<double> omegas;  // rad/us, uniform and symmetric about zero
    std::vector<cplx> reflection;
    std::vector<std::string> warnings;
};

SpectralResponse sample_response(const DeviceConfig& config, double omega_max, std::size_t n_points);

struct SpectralOptions
{
    // FFT length is the next power of two at or above padding * grid samples.
    double padding = 4.0;
    // Fraction of input energy allowed in the last 5% of the periodic window.
    double alias_tolerance = 1e-2;
};

/// Output field for a pulse, computed as the inverse transform of f(w) r(w).
/// Only a_in and a_out are filled.
TimeTrace respond_pulse(const DeviceConfig& config, const Pulse& pulse, const Grid& grid,
                        const SpectralOptions& options = {});

}  // namespace mrqm
