#include "mrqm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mrqm {

namespace {

struct Scale
{
    const char* name;
    double rate;
};

Scale fastest_scale(const DeviceConfig& config)
{
    Scale best{"kappa", config.common.kappa};
    auto consider = [&best](const char* name, double rate) {
        if (rate > best.rate)
            best = {name, rate};
    };
    consider("gamma_r", config.common.decay_rate);
    consider("2pi|Delta_r|", std::abs(angular(config.common.detuning_mhz)));
    double g2 = 0.0;
    for (const auto& m : config.minis) {
        consider("gamma_n", m.decay_rate);
        consider("2pi|Delta_n|", std::abs(angular(m.detuning_mhz)));
        g2 += m.coupling * m.coupling;
    }
    consider("sqrt(sum g_n^2)", std::sqrt(g2));
    return best;
}

// Right-hand side of the mode equations, laid out as y = [a, s_1..s_N].
class ModeEquations
{
public:
    explicit ModeEquations(const DeviceConfig& config)
        : sqrt_kappa_(std::sqrt(config.common.kappa))
    {
        const auto& c = config.common;
        a_rate_ = {0.5 * c.kappa + c.decay_rate, angular(c.detuning_mhz)};
        for (const auto& m : config.minis) {
            tooth_rate_.emplace_back(m.decay_rate, angular(m.detuning_mhz));
            coupling_.push_back(m.coupling);
        }
    }

    std::size_t dimension() const { return tooth_rate_.size() + 1; }
    double sqrt_kappa() const { return sqrt_kappa_; }

    void operator()(const std::vector<cplx>& y, cplx input, std::vector<cplx>& dy) const
    {
        const cplx a = y[0];
        cplx da = -a_rate_ * a + sqrt_kappa_ * input;
        for (std::size_t n = 0; n < tooth_rate_.size(); ++n) {
            const cplx s = y[n + 1];
            da += coupling_[n] * s;
            dy[n + 1] = -tooth_rate_[n] * s - coupling_[n] * a;
        }
        dy[0] = da;
    }

private:
    double sqrt_kappa_;
    cplx a_rate_;
    std::vector<cplx> tooth_rate_;
    std::vector<double> coupling_;
};

}  // namespace

double max_stable_step(const DeviceConfig& config)
{
    return 0.1 / fastest_scale(config).rate;
}

TimeTrace integrate(const DeviceConfig& config, const Pulse& pulse, const Grid& grid,
                    const IntegrateOptions& options)
{
    validate_pulse(pulse);
    return integrate_input(config, [&pulse](double t) { return pulse_envelope(pulse, t); }, grid,
                           options);
}

TimeTrace integrate_input(const DeviceConfig& config, const InputField& input, const Grid& grid,
                          const IntegrateOptions& options)
{
    validate_config(config);
    validate_grid(grid);

    const Scale scale = fastest_scale(config);
    if (grid.dt > 0.1 / scale.rate * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "time step " << grid.dt << " us does not resolve " << scale.name << " = " << scale.rate
            << " /us (need dt <= " << 0.1 / scale.rate << " us)";
        throw NumericalError(msg.str());
    }

    const ModeEquations rhs(config);
    const std::size_t dim = rhs.dimension();
    const std::size_t n = grid.sample_count();
    const double dt = grid.dt;

    TimeTrace trace;
    trace.grid = grid;
    trace.a_in.resize(n);
    trace.a_out.resize(n);
    if (options.record_internal) {
        trace.a.resize(n);
        trace.s.assign(dim - 1, std::vector<cplx>(n));
    }

    std::vector<cplx> y(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    auto record = [&](std::size_t i, cplx in) {
        trace.a_in[i] = in;
        trace.a_out[i] = rhs.sqrt_kappa() * y[0] - in;
        if (options.record_internal) {
            trace.a[i] = y[0];
            for (std::size_t k = 1; k < dim; ++k)
                trace.s[k - 1][i] = y[k];
        }
    };

    cplx in_now = input(grid.time(0));
    record(0, in_now);
    for (std::size_t i = 1; i < n; ++i) {
        const double t = grid.time(i - 1);
        const cplx in_mid = input(t + 0.5 * dt);
        const cplx in_next = input(grid.time(i));

        rhs(y, in_now, k1);
        for (std::size_t k = 0; k < dim; ++k)
            tmp[k] = y[k] + 0.5 * dt * k1[k];
        rhs(tmp, in_mid, k2);
        for (std::size_t k = 0; k < dim; ++k)
            tmp[k] = y[k] + 0.5 * dt * k2[k];
        rhs(tmp, in_mid, k3);
        for (std::size_t k = 0; k < dim; ++k)
            tmp[k] = y[k] + dt * k3[k];
        rhs(tmp, in_next, k4);
        for (std::size_t k = 0; k < dim; ++k)
            y[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);

        for (const cplx& v : y) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                std::ostringstream msg;
                msg << "non-finite state at t = " << grid.time(i) << " us";
                throw NumericalError(msg.str());
            }
        }
        in_now = in_next;
        record(i, in_now);
    }
    return trace;
}

StateVector final_state(const TimeTrace& trace)
{
    if (!trace.has_internal_modes())
        throw std::logic_error("trace was recorded without internal modes");
    StateVector state;
    state.a = trace.a.back();
    for (const auto& tooth : trace.s)
        state.s.push_back(tooth.back());
    return state;
}

}  // namespace mrqm
