#include "mrqm/echo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrqm/integrator.hpp"
#include "mrqm/spectral.hpp"

namespace mrqm {

namespace {

// First sample index with time >= t.
std::size_t first_index_at(const Grid& grid, double t)
{
    const double x = std::ceil((t - grid.t_start) / grid.dt - 1e-9);
    return x <= 0.0 ? 0 : static_cast<std::size_t>(x);
}

}  // namespace

double EchoReport::reflected_fraction() const
{
    return input_energy > 0.0 ? reflected_energy / input_energy : 0.0;
}

const EchoEvent* EchoReport::event(int k) const
{
    for (const auto& e : events)
        if (e.k == k)
            return &e;
    return nullptr;
}

double EchoReport::efficiency(int k) const
{
    const EchoEvent* e = event(k);
    return e != nullptr ? e->efficiency : 0.0;
}

EchoReport detect_echoes(const TimeTrace& trace, TimeWindow input_window, double expected_period)
{
    const Grid& grid = trace.grid;
    const std::size_t n = trace.size();
    if (n == 0)
        throw ValidationError("trace", "trace has no output samples");
    if (!(expected_period > 0.0))
        throw ValidationError("expected_period", "must be positive");
    const double t_last = grid.time(n - 1);
    if (!(input_window.end > input_window.start) || input_window.end <= grid.t_start
        || input_window.start >= t_last)
        throw ValidationError("input_window", "input window lies outside the trace grid");
    input_window.start = std::max(input_window.start, grid.t_start);

    // Plain Riemann sums over half-open index ranges so that windows tile.
    auto window_energy = [&](std::size_t first, std::size_t last) {
        double sum = 0.0;
        for (std::size_t i = first; i < last && i < n; ++i)
            sum += std::norm(trace.a_out[i]);
        return sum * grid.dt;
    };

    EchoReport report;
    report.period = expected_period;
    report.reference_time = input_window.end - 0.5 * expected_period;
    double input_sum = 0.0;
    for (const cplx& v : trace.a_in)
        input_sum += std::norm(v);
    report.input_energy = input_sum * grid.dt;
    report.reflected_energy = window_energy(first_index_at(grid, input_window.start),
                                            first_index_at(grid, input_window.end));

    for (int k = 1;; ++k) {
        const double centre = report.reference_time + k * expected_period;
        const TimeWindow w{centre - 0.5 * expected_period, centre + 0.5 * expected_period};
        if (w.end > t_last + 0.5 * grid.dt)
            break;
        const std::size_t first = first_index_at(grid, w.start);
        const std::size_t last = std::min(first_index_at(grid, w.end), n);
        if (first >= last)
            break;
        const double e = window_energy(first, last);
        if (report.input_energy <= 0.0 || e <= kEchoThreshold * report.input_energy)
            continue;
        std::size_t peak = first;
        for (std::size_t i = first; i < last; ++i)
            if (std::norm(trace.a_out[i]) > std::norm(trace.a_out[peak]))
                peak = i;
        report.events.push_back({k, grid.time(peak), w, e, e / report.input_energy});
    }
    return report;
}

Grid auto_grid(const DeviceConfig& config, const Pulse& pulse, double period,
               const GridOverrides& overrides)
{
    double dt = std::min(0.05 / config.common.kappa, pulse.power_fwhm / 50.0);
    double max_detuning = 0.0;
    double g2 = 0.0;
    double max_gamma = config.common.decay_rate;
    for (const auto& m : config.minis) {
        max_detuning = std::max(max_detuning, std::abs(m.detuning_mhz));
        g2 += m.coupling * m.coupling;
        max_gamma = std::max(max_gamma, m.decay_rate);
    }
    max_detuning = std::max(max_detuning, std::abs(config.common.detuning_mhz));
    if (max_detuning > 0.0)
        dt = std::min(dt, 0.02 / angular(max_detuning));
    if (g2 > 0.0)
        dt = std::min(dt, 0.05 / std::sqrt(g2));
    if (max_gamma > 0.0)
        dt = std::min(dt, 0.05 / max_gamma);
    if (overrides.dt)
        dt = *overrides.dt;

    Grid grid;
    grid.t_start = pulse.center_time - overrides.lead_fwhms.value_or(5.0) * pulse.power_fwhm;
    grid.dt = dt;
    // Round up to a whole number of steps so the last echo window is fully sampled.
    const double span = pulse.center_time + overrides.periods_after.value_or(2.5) * period - grid.t_start;
    grid.t_end = grid.t_start + std::ceil(span / dt - 1e-9) * dt;
    return grid;
}

TimeWindow default_input_window(const Grid& grid, const Pulse& pulse, double period)
{
    return {std::max(grid.t_start, pulse.center_time - 0.5 * period),
            pulse.center_time + 0.5 * period};
}

StorageRun run_storage(const DeviceConfig& config, const Pulse& pulse, const GridOverrides& overrides,
                       Pathway pathway, bool record_internal)
{
    validate_config(config);
    validate_pulse(pulse);
    const double period = 1.0 / comb_spacing_mhz(config);

    StorageRun run;
    run.grid = auto_grid(config, pulse, period, overrides);
    run.input_window = default_input_window(run.grid, pulse, period);
    if (pathway == Pathway::spectral)
        run.trace = respond_pulse(config, pulse, run.grid);
    else
        run.trace = integrate(config, pulse, run.grid, {.record_internal = record_internal});
    run.report = detect_echoes(run.trace, run.input_window, period);
    return run;
}

double first_echo_efficiency(const DeviceConfig& config, const Pulse& pulse,
                             const GridOverrides& overrides)
{
    return run_storage(config, pulse, overrides).report.efficiency(1);
}

}  // namespace mrqm
