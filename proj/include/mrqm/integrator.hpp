#pragma once

#include <functional>

#include "mrqm/model.hpp"
#include "mrqm/pulse.hpp"
#include "mrqm/trace.hpp"

namespace mrqm {

// a(t) and the N tooth amplitudes s_n(t).
struct StateVector
{
    cplx a;
    std::vector<cplx> s;
};

using InputField = std::function<cplx(double)>;

struct IntegrateOptions
{
    bool record_internal = false;
};

// Largest step the integrator accepts: 0.1 over the fastest rate among kappa,
// every gamma, 2pi|Delta| of every mode and the collective coupling
// sqrt(sum g_n^2).
double max_stable_step(const DeviceConfig& config);

/// Fixed-step classical RK4 from the zero state:
///   ds_n/dt = -(i 2pi Delta_n + gamma_n) s_n - g_n a
///   da/dt   = -(kappa/2 + i 2pi Delta_r + gamma_r) a + sum_n g_n s_n + sqrt(kappa) a_in
/// with a_out = sqrt(kappa) a - a_in recorded at every grid point.
TimeTrace integrate(const DeviceConfig& config, const Pulse& pulse, const Grid& grid,
                    const IntegrateOptions& options = {});

// Same integration for an arbitrary input field (used for superposition checks).
TimeTrace integrate_input(const DeviceConfig& config, const InputField& input, const Grid& grid,
                          const IntegrateOptions& options = {});

// State at the final grid point, for energy bookkeeping.
StateVector final_state(const TimeTrace& trace);

}  // namespace mrqm
