#pragma once

#include <optional>
#include <vector>

#include "mrqm/model.hpp"
#include "mrqm/pulse.hpp"
#include "mrqm/trace.hpp"

namespace mrqm {

struct TimeWindow
{
    double start = 0.0;
    double end = 0.0;
};

struct EchoEvent
{
    int k = 0;                // echo order, 1 = first echo
    double peak_time = 0.0;   // us, argmax of |a_out|^2 in the window
    TimeWindow window;
    double energy = 0.0;
    double efficiency = 0.0;  // energy / input energy
};

struct EchoReport
{
    std::vector<EchoEvent> events;  // ordered by peak time
    double input_energy = 0.0;
    double reflected_energy = 0.0;  // output energy inside the input window
    double reference_time = 0.0;    // input pulse centre the echo windows are laid out from
    double period = 0.0;

    double reflected_fraction() const;
    const EchoEvent* event(int k) const;
    // Efficiency of echo k, zero when that echo was not detected.
    double efficiency(int k) const;
};

// Events below this fraction of the input energy are not reported.
inline constexpr double kEchoThreshold = 1e-4;

/// Scores the output of `trace`. Energy inside `input_window` is the prompt
/// reflection; echo k is scored in a window of width `expected_period` centred
/// at (input_window.end - expected_period / 2) + k * expected_period.
EchoReport detect_echoes(const TimeTrace& trace, TimeWindow input_window, double expected_period);

enum class Pathway { time_domain, spectral };

// Overrides for the automatically chosen grid. Defaults: the grid starts
// 5 FWHM before the pulse centre, ends 2.5 comb periods after it (rounded up to a whole step), and
// dt = min(0.05/kappa, FWHM/50, 0.02/(2pi max|Delta_n|), 0.05/sqrt(sum g^2), 0.05/max gamma).
struct GridOverrides
{
    std::optional<double> lead_fwhms;
    std::optional<double> periods_after;
    std::optional<double> dt;
};

struct StorageRun
{
    Grid grid;
    TimeWindow input_window;
    TimeTrace trace;
    EchoReport report;
};

Grid auto_grid(const DeviceConfig& config, const Pulse& pulse, double period,
               const GridOverrides& overrides = {});

// Input window [t0 - P/2, t0 + P/2], clipped at the grid start.
TimeWindow default_input_window(const Grid& grid, const Pulse& pulse, double period);

/// Simulate one pulse and score the echoes. The period is 1/Delta with Delta the
/// median adjacent tooth spacing.
StorageRun run_storage(const DeviceConfig& config, const Pulse& pulse,
                       const GridOverrides& overrides = {}, Pathway pathway = Pathway::time_domain,
                       bool record_internal = false);

double first_echo_efficiency(const DeviceConfig& config, const Pulse& pulse,
                             const GridOverrides& overrides = {});

}  // namespace mrqm
