#include "mrqm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace mrqm {

namespace {

struct FftwDeleter
{
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer fftw_buffer(std::size_t n)
{
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (p == nullptr)
        throw std::bad_alloc();
    return FftwBuffer(p);
}

std::size_t next_pow2(std::size_t n)
{
    std::size_t m = 1;
    while (m < n)
        m <<= 1;
    return m;
}

}  // namespace

cplx transfer_function(const DeviceConfig& config, double omega)
{
    const auto& c = config.common;
    cplx d{0.5 * c.kappa + c.decay_rate, angular(c.detuning_mhz) - omega};
    for (const auto& m : config.minis) {
        const cplx pole{m.decay_rate, angular(m.detuning_mhz) - omega};
        if (m.coupling == 0.0)
            continue;
        // Lossless tooth exactly on resonance: D is infinite and r -> -1.
        if (pole == cplx{0.0, 0.0})
            return {-1.0, 0.0};
        d += m.coupling * m.coupling / pole;
    }
    // (kappa - D)/D keeps |r| = 1 to rounding when every rate is zero.
    return (c.kappa - d) / d;
}

SpectralResponse sample_response(const DeviceConfig& config, double omega_max, std::size_t n_points)
{
    validate_config(config);
    if (n_points < 2)
        throw ValidationError("n_points", "need at least two frequency points");
    if (!(omega_max > 0.0) || !std::isfinite(omega_max))
        throw ValidationError("omega_max", "must be positive");

    SpectralResponse out;
    out.omegas.resize(n_points);
    out.reflection.resize(n_points);
    const double step = 2.0 * omega_max / static_cast<double>(n_points - 1);
    const std::size_t half = (n_points - 1) / 2;
    for (std::size_t i = 0; i < n_points; ++i) {
        // Index from the centre so the grid is exactly antisymmetric.
        const double omega = n_points % 2 == 1
            ? (static_cast<double>(i) - static_cast<double>(half)) * step
            : -omega_max + static_cast<double>(i) * step;
        out.omegas[i] = omega;
        out.reflection[i] = transfer_function(config, omega);
    }

    double finest = config.common.kappa;
    for (const auto& m : config.minis)
        if (m.decay_rate > 0.0)
            finest = std::min(finest, m.decay_rate);
    if (step > finest) {
        std::ostringstream msg;
        msg << "frequency step " << step << " rad/us exceeds the narrowest linewidth " << finest
            << " rad/us; features may be unresolved";
        out.warnings.push_back(msg.str());
    }
    return out;
}

TimeTrace respond_pulse(const DeviceConfig& config, const Pulse& pulse, const Grid& grid,
                        const SpectralOptions& options)
{
    validate_config(config);
    validate_pulse(pulse);
    validate_grid(grid);

    const std::size_t n = grid.sample_count();
    const auto target = static_cast<std::size_t>(std::ceil(options.padding * static_cast<double>(n)));
    const std::size_t m = next_pow2(std::max(target, n));
    const double d_omega = kTwoPi / (static_cast<double>(m) * grid.dt);
    const double norm = d_omega / std::sqrt(kTwoPi);

    auto buffer = fftw_buffer(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double index = j < m / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(m);
        const double omega = index * d_omega;
        const cplx c = norm * pulse_spectrum(pulse, omega) * transfer_function(config, omega)
            * std::polar(1.0, -omega * grid.t_start);
        buffer[j][0] = c.real();
        buffer[j][1] = c.imag();
    }

    // Sum_k c_k e^{-2pi i jk/m} evaluates Int dw e^{-iw t_j} (...) on the grid.
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m), buffer.get(), buffer.get(), FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    TimeTrace trace;
    trace.grid = grid;
    trace.a_in.resize(n);
    trace.a_out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        trace.a_in[i] = pulse_envelope(pulse, grid.time(i));
        trace.a_out[i] = {buffer[i][0], buffer[i][1]};
    }

    std::vector<cplx> tail;
    const auto tail_start = static_cast<std::size_t>(0.95 * static_cast<double>(m));
    for (std::size_t j = tail_start; j < m; ++j)
        tail.emplace_back(buffer[j][0], buffer[j][1]);
    const double tail_energy = energy(tail, grid.dt);
    const double input_energy = pulse_energy(pulse);
    if (tail_energy > options.alias_tolerance * input_energy) {
        std::ostringstream msg;
        msg << "spectral pathway aliasing: " << tail_energy / input_energy
            << " of the input energy remains at the end of the periodic window; use a longer grid";
        throw NumericalError(msg.str());
    }
    return trace;
}

}  // namespace mrqm
