#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mrqm/analytics.hpp"
#include "mrqm/integrator.hpp"
#include "mrqm/spectral.hpp"

using namespace mrqm;

namespace {

constexpr double pi = std::numbers::pi;

// Steady state of the linear mode equations under e^{-iwt} drive, solved by
// dense Gaussian elimination; r = sqrt(kappa) A - 1.
cplx linear_solve_reflection(const DeviceConfig& c, double w)
{
    const std::size_t n = c.size() + 1;
    std::vector<std::vector<cplx>> m(n, std::vector<cplx>(n + 1));
    m[0][0] = cplx{c.common.kappa / 2 + c.common.decay_rate, 2 * pi * c.common.detuning_mhz - w};
    m[0][n] = std::sqrt(c.common.kappa);
    for (std::size_t k = 1; k < n; ++k) {
        const auto& t = c.minis[k - 1];
        m[0][k] = -t.coupling;
        m[k][0] = t.coupling;
        m[k][k] = cplx{t.decay_rate, 2 * pi * t.detuning_mhz - w};
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col]))
                piv = r;
        std::swap(m[col], m[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const cplx f = m[r][col] / m[col][col];
            for (std::size_t k = col; k <= n; ++k)
                m[r][k] -= f * m[col][k];
        }
    }
    return std::sqrt(c.common.kappa) * m[0][n] / m[0][0] - 1.0;
}

DeviceConfig random_config(std::mt19937& rng, bool lossless)
{
    std::uniform_int_distribution<std::size_t> n_dist(0, 7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DeviceConfig c;
    const std::size_t n = n_dist(rng);
    for (std::size_t k = 0; k < n; ++k)
        c.minis.push_back({-30.0 + 60.0 * u(rng) + 1e-3 * static_cast<double>(k), lossless ? 0.0 : 2.0 * u(rng),
                           50.0 * u(rng)});
    c.common = {1.0 + 300.0 * u(rng), -2.0 + 4.0 * u(rng), lossless ? 0.0 : 3.0 * u(rng)};
    return c;
}

DeviceConfig paper_comb(double spacing, double g, double gamma)
{
    DeviceConfig c;
    c.minis = build_uniform_comb(5, spacing, g, gamma);
    c.common.decay_rate = 1e-3;
    c.common.kappa = kappa_matched(summarize_comb(c), 1e-3);
    return c;
}

}  // namespace

TEST_CASE("transfer function examples")
{
    DeviceConfig empty;
    empty.common = {2.0, 0.0, 0.0};
    CHECK(std::abs(transfer_function(empty, 0.0) - cplx{1.0, 0.0}) < 1e-15);
    // Empty lossless cavity: r = (kappa/2 + iw)/(kappa/2 - iw).
    const cplx expected = cplx{1.0, 3.0} / cplx{1.0, -3.0};
    CHECK(std::abs(transfer_function(empty, 3.0) - expected) < 1e-15);

    DeviceConfig one;
    one.minis = {{0.0, 0.0, 5.0}};
    one.common = {4.0, 0.0, 0.0};
    CHECK(std::abs(transfer_function(one, 0.0) - cplx{-1.0, 0.0}) < 1e-15);
    one.minis[0].decay_rate = 1e-9;
    CHECK(std::abs(transfer_function(one, 0.0) - cplx{-1.0, 0.0}) < 1e-8);
}

TEST_CASE("oracle: transfer function equals the linear steady-state solve")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> w_dist(-400.0, 400.0);
    for (int trial = 0; trial < 200; ++trial) {
        const DeviceConfig c = random_config(rng, trial % 3 == 0);
        for (int k = 0; k < 8; ++k) {
            const double w = w_dist(rng);
            const cplx a = transfer_function(c, w);
            const cplx b = linear_solve_reflection(c, w);
            CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("property: lossless devices are unitary, lossy ones passive")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const DeviceConfig lossless = random_config(rng, true);
        const auto rl = sample_response(lossless, 500.0, 801);
        double worst = 0.0;
        for (const cplx r : rl.reflection)
            worst = std::max(worst, std::abs(std::abs(r) - 1.0));
        CHECK(worst < 1e-12);

        const DeviceConfig lossy = random_config(rng, false);
        for (const cplx r : sample_response(lossy, 500.0, 801).reflection)
            CHECK(std::abs(r) <= 1.0 + 1e-12);
    }
}

TEST_CASE("property: mirror symmetry for combs symmetric about the cavity")
{
    const DeviceConfig c = paper_comb(13.0, 2 * pi * 13.0, 0.3);
    const auto resp = sample_response(c, 600.0, 1201);
    const std::size_t n = resp.omegas.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(resp.omegas[i] == doctest::Approx(-resp.omegas[n - 1 - i]).epsilon(1e-14));
        CHECK(std::abs(resp.reflection[i] - std::conj(resp.reflection[n - 1 - i])) < 1e-12);
    }
}

TEST_CASE("reflection dips sit at the tooth frequencies")
{
    // Weakly coupled lossy teeth in a broad cavity: each tooth carves a dip at 2pi Delta_n.
    DeviceConfig c;
    c.minis = build_uniform_comb(3, 20.0, 3.0, 1.0);
    c.common = {2000.0, 0.0, 0.0};
    const double w_max = 200.0;
    const std::size_t n_points = 4001;
    const auto resp = sample_response(c, w_max, n_points);
    const double step = 2 * w_max / static_cast<double>(n_points - 1);
    std::vector<double> minima;
    for (std::size_t i = 1; i + 1 < n_points; ++i) {
        const double m = std::abs(resp.reflection[i]);
        if (m < std::abs(resp.reflection[i - 1]) && m < std::abs(resp.reflection[i + 1]) && m < 0.99)
            minima.push_back(resp.omegas[i]);
    }
    REQUIRE(minima.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(minima[k] - 2 * pi * c.minis[k].detuning_mhz) <= step);
}

TEST_CASE("spectral sampling warns when the grid cannot resolve the narrowest line")
{
    DeviceConfig c;
    c.minis = {{0.0, 0.01, 2.0}};
    c.common = {50.0, 0.0, 0.0};
    CHECK(sample_response(c, 100.0, 40001).warnings.empty());
    CHECK_FALSE(sample_response(c, 100.0, 101).warnings.empty());
    CHECK_THROWS_AS(sample_response(c, 100.0, 1), ValidationError);
    CHECK_THROWS_AS(sample_response(c, -1.0, 11), ValidationError);
}

TEST_CASE("broadband empty cavity reflects the pulse back")
{
    DeviceConfig c;
    c.common = {5000.0, 0.0, 0.0};
    const Pulse p{PulseShape::gaussian, 1.0, 0.0, 0.05, 0.0};
    const Grid grid{-0.5, 0.5, 0.001};
    const TimeTrace t = respond_pulse(c, p, grid);
    CHECK(energy(t.a_out, grid.dt) == doctest::Approx(energy(t.a_in, grid.dt)).epsilon(1e-9));
    // To first order the cavity only delays the pulse by its group delay 4/kappa.
    std::vector<cplx> delayed(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        delayed[i] = pulse_envelope(p, grid.time(i) - 4.0 / c.common.kappa);
    CHECK(relative_l2(t.a_out, delayed) < 1e-4);
}

TEST_CASE("spectral and time-domain pathways agree")
{
    const DeviceConfig c = paper_comb(13.0, 2 * pi * 13.0, 0.5);
    const Pulse p = comb_matched_pulse(5, 13.0, 0.0);
    const double dt = max_stable_step(c) * 0.5;
    const Grid grid{-0.1, 0.2, dt};
    const TimeTrace time = integrate(c, p, grid);
    const TimeTrace spec = respond_pulse(c, p, grid);
    CHECK(relative_l2(spec.a_out, time.a_out) < 1e-3);
}

TEST_CASE("spectral pathway refuses a window the response wraps around")
{
    // Lossless teeth ring forever, so energy reaches the end of any finite window.
    DeviceConfig c;
    c.minis = build_uniform_comb(5, 13.0, 2 * pi * 6.0, 0.0);
    c.common = {2 * pi * 6.0 * 2 * pi * 6.0 / 13.0 * 10.0, 0.0, 0.0};
    const Pulse p = comb_matched_pulse(5, 13.0, 0.0);
    const Grid grid{-0.05, 0.3, 2e-4};
    CHECK_THROWS_AS(respond_pulse(c, p, grid, SpectralOptions{1.0, 1e-3}), NumericalError);
}
