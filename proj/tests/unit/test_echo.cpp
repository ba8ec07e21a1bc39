#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mrqm/analytics.hpp"
#include "mrqm/echo.hpp"
#include "mrqm/integrator.hpp"

using namespace mrqm;

namespace {

constexpr double pi = std::numbers::pi;

DeviceConfig comb(double spacing, double g, double gamma, double gamma_r = 1e-3, double kappa_scale = 1.0)
{
    DeviceConfig c;
    c.minis = build_uniform_comb(5, spacing, g, gamma);
    c.common.decay_rate = gamma_r;
    c.common.kappa = kappa_scale * kappa_matched(summarize_comb(c), gamma_r);
    return c;
}

// Hand-built trace: two gaussian bumps of known energy on a flat grid.
TimeTrace synthetic(double dt)
{
    TimeTrace t;
    t.grid = {0.0, 1.0, dt};
    const std::size_t n = t.grid.sample_count();
    const Pulse in{PulseShape::gaussian, 1.0, 0.1, 0.01, 0.0};
    const Pulse e1{PulseShape::gaussian, 0.5, 0.3, 0.01, 0.0};
    const Pulse e2{PulseShape::gaussian, 0.1, 0.5, 0.01, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double x = t.grid.time(i);
        t.a_in.push_back(pulse_envelope(in, x));
        t.a_out.push_back(0.2 * pulse_envelope(in, x) + pulse_envelope(e1, x) + pulse_envelope(e2, x));
    }
    return t;
}

}  // namespace

TEST_CASE("windowed scoring of a synthetic trace")
{
    const double dt = 1e-4;
    const TimeTrace t = synthetic(dt);
    const EchoReport r = detect_echoes(t, {0.0, 0.2}, 0.2);
    const double e_in = pulse_energy({PulseShape::gaussian, 1.0, 0.1, 0.01, 0.0});
    CHECK(r.input_energy == doctest::Approx(e_in).epsilon(1e-9));
    CHECK(r.reflected_fraction() == doctest::Approx(0.04).epsilon(1e-9));
    CHECK(r.reference_time == doctest::Approx(0.1));
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].k == 1);
    CHECK(r.events[1].k == 2);
    CHECK(r.events[0].peak_time == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.events[1].peak_time == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.efficiency(1) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.efficiency(2) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(r.efficiency(3) == 0.0);
    CHECK(r.event(3) == nullptr);
    // The last full window ends at 0.9; [0.9, 1.1] runs past the grid and is not scored.
    CHECK(r.events.back().window.end <= 1.0);
}

TEST_CASE("zero input gives no events and no reflection")
{
    TimeTrace t;
    t.grid = {0.0, 1.0, 1e-3};
    t.a_in.assign(t.grid.sample_count(), cplx{});
    t.a_out.assign(t.grid.sample_count(), cplx{});
    const EchoReport r = detect_echoes(t, {0.0, 0.2}, 0.2);
    CHECK(r.events.empty());
    CHECK(r.reflected_energy == 0.0);
    CHECK(r.reflected_fraction() == 0.0);
}

TEST_CASE("input window outside the grid is an error")
{
    const TimeTrace t = synthetic(1e-3);
    CHECK_THROWS_AS(detect_echoes(t, {2.0, 3.0}, 0.2), ValidationError);
    CHECK_THROWS_AS(detect_echoes(t, {-3.0, -1.0}, 0.2), ValidationError);
    CHECK_THROWS_AS(detect_echoes(t, {0.0, 0.2}, 0.0), ValidationError);
}

TEST_CASE("matched paper-like comb: strong first echo, second echo almost absent")
{
    const DeviceConfig c = comb(13.0, 2 * pi * 13.0, 1e-3);
    const StorageRun run = run_storage(c, comb_matched_pulse(5, 13.0));
    const EchoReport& r = run.report;
    REQUIRE(r.event(1) != nullptr);
    CHECK(r.efficiency(1) > 0.95);
    CHECK(r.efficiency(2) < 0.01 * r.efficiency(1));
    CHECK(r.reflected_fraction() < 0.02);
    for (std::size_t i = 1; i < r.events.size(); ++i)
        CHECK(r.events[i].peak_time > r.events[i - 1].peak_time);
    for (const auto& e : r.events) {
        CHECK(e.efficiency >= 0.0);
        CHECK(e.efficiency <= 1.0 + 1e-9);
    }
}

TEST_CASE("first echo leaves 1/Delta after the input peak")
{
    // The common cavity adds a dwell of order 1/kappa_0 (well under one percent
    // of 1/Delta here), so the bound is 1% of the storage time rather than one step.
    for (double spacing : {4.0, 13.0, 15.0}) {
        const DeviceConfig c = comb(spacing, 2 * pi * spacing, 1e-3);
        const Pulse p = comb_matched_pulse(5, spacing);
        const StorageRun run = run_storage(c, p);
        REQUIRE(run.report.event(1) != nullptr);
        const double delay = run.report.event(1)->peak_time - p.center_time;
        CHECK(delay == doctest::Approx(1.0 / spacing).epsilon(0.01));
    }
}

TEST_CASE("open configuration returns a train of comparable echoes")
{
    const DeviceConfig c = comb(12.0, 2 * pi * 12.0, 1e-3, 1e-3, 10.0);
    const StorageRun run = run_storage(c, comb_matched_pulse(5, 12.0));
    REQUIRE(run.report.events.size() >= 2);
    const double ratio = run.report.efficiency(2) / run.report.efficiency(1);
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
    CHECK(run.report.reflected_fraction() > 0.3);
}

TEST_CASE("first-echo efficiency examples")
{
    const DeviceConfig none = comb(13.0, 0.0, 1e-3);
    CHECK(first_echo_efficiency(none, comb_matched_pulse(5, 13.0)) == 0.0);

    // Helium-temperature set with the coupling read on the same MHz scale as Delta.
    const DeviceConfig helium = comb(4.0, 2 * pi * 4.0, 1e-3);
    const double expected = eta_matched(summarize_comb(comb(4.0, 4.0, 1e-3)), 1e-3);
    const double eta = first_echo_efficiency(helium, comb_matched_pulse(5, 4.0));
    CHECK(std::abs(eta - expected) < 0.05);

    const DeviceConfig c = comb(13.0, 2 * pi * 13.0, 0.5);
    const Pulse p = comb_matched_pulse(5, 13.0);
    const double one = first_echo_efficiency(c, p);
    const double two = first_echo_efficiency(c, scaled(p, 2.0));
    CHECK(std::abs(one - two) < 1e-9);

    DeviceConfig single;
    single.minis = {{0.0, 0.0, 1.0}};
    single.common.kappa = 1.0;
    CHECK_THROWS_AS(first_echo_efficiency(single, p), ValidationError);
}

TEST_CASE("automatic grid resolves every scale and honours overrides")
{
    const DeviceConfig c = comb(13.0, 2 * pi * 13.0, 0.5);
    const Pulse p = comb_matched_pulse(5, 13.0, 0.2);
    const Grid g = auto_grid(c, p, 1.0 / 13.0);
    CHECK(g.dt <= max_stable_step(c));
    CHECK(g.t_start == doctest::Approx(0.2 - 5 * p.power_fwhm));
    CHECK(g.t_end >= 0.2 + 2.5 / 13.0);
    CHECK(g.t_end < 0.2 + 2.5 / 13.0 + g.dt);

    const Grid o = auto_grid(c, p, 1.0 / 13.0, {2.0, 4.0, 1e-5});
    CHECK(o.dt == 1e-5);
    CHECK(o.t_start == doctest::Approx(0.2 - 2 * p.power_fwhm));
    CHECK(o.t_end >= 0.2 + 4.0 / 13.0);
    CHECK(o.t_end < 0.2 + 4.0 / 13.0 + o.dt);

    const TimeWindow w = default_input_window(g, p, 1.0 / 13.0);
    CHECK(w.start == doctest::Approx(std::max(g.t_start, 0.2 - 0.5 / 13.0)));
    CHECK(w.end == doctest::Approx(0.2 + 0.5 / 13.0));
}

TEST_CASE("spectral pathway scores the same echoes")
{
    const DeviceConfig c = comb(13.0, 2 * pi * 13.0, 0.5);
    const Pulse p = comb_matched_pulse(5, 13.0);
    const StorageRun time = run_storage(c, p);
    const StorageRun spec = run_storage(c, p, {}, Pathway::spectral);
    CHECK(spec.report.efficiency(1) == doctest::Approx(time.report.efficiency(1)).epsilon(1e-3));
    CHECK(relative_l2(spec.trace.a_out, time.trace.a_out) < 1e-3);
}
