#include <cmath>
#include <vector>

#include "doctest.h"
#include "mrqm/analytics.hpp"
#include "mrqm/matcher.hpp"

using namespace mrqm;

namespace {

CombSummary uniform(double g, double delta, double gamma, std::size_t n = 5)
{
    return {g, gamma, delta, n};
}

}  // namespace

TEST_CASE("comb summary")
{
    DeviceConfig c;
    c.common.kappa = 1.0;
    c.minis = build_uniform_comb(5, 13.0, 4.0, 1e-3);
    const CombSummary s = summarize_comb(c);
    CHECK(s.g_bar() == doctest::Approx(4.0));
    CHECK(s.gamma_bar() == doctest::Approx(1e-3));
    CHECK(s.delta_bar() == doctest::Approx(13.0));
    CHECK(s.t1() == doctest::Approx(0.0769230769).epsilon(1e-9));
    CHECK(s.t1() * s.delta_bar() == doctest::Approx(1.0));
    CHECK(s.n_teeth() == 5);

    c.minis = {{0.0, 0, 1}, {10.0, 0, 1}, {22.0, 0, 1}};
    CHECK(summarize_comb(c).delta_bar() == doctest::Approx(11.0));
    // Unsorted input gives the same answer.
    c.minis = {{22.0, 0, 1}, {0.0, 0, 1}, {10.0, 0, 1}};
    CHECK(summarize_comb(c).delta_bar() == doctest::Approx(11.0));

    c.minis = {{0.0, 0.2, 3.0}};
    const CombSummary one = summarize_comb(c);
    CHECK_FALSE(one.has_spacing());
    CHECK(one.g_bar() == 3.0);
    CHECK_THROWS_AS(one.delta_bar(), ValidationError);
    CHECK_THROWS_AS(echo_time(one), ValidationError);
}

TEST_CASE("matched efficiency examples")
{
    const double expected = std::exp(-2e-3 / 4.0) / std::pow(1.0 + 2e-3 * 4.0 / 16.0, 2);
    CHECK(eta_matched(uniform(4.0, 4.0, 1e-3), 1e-3) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(eta_matched(uniform(4.0, 4.0, 1e-3), 1e-3) - 0.9985) < 1e-3);
    CHECK(eta_matched(uniform(4.0, 13.0, 0.0), 0.0) == 1.0);
    CHECK(eta_matched(uniform(4.0, 1.0, 1e3), 1e-3) < 1e-300);
}

TEST_CASE("general efficiency examples")
{
    const CombSummary lossless_gamma = uniform(4.0, 13.0, 0.2);
    const double k0 = kappa_matched(lossless_gamma, 0.0);
    CHECK(eta_general(lossless_gamma, k0).value == eta_matched(lossless_gamma, 0.0));
    CHECK(eta_general(lossless_gamma, 2 * k0).value
          == doctest::Approx(eta_general(lossless_gamma, k0).value / 4).epsilon(1e-14));
    CHECK_FALSE(eta_general(lossless_gamma, k0).exceeds_unity);
    CHECK(eta_general(uniform(4.0, 13.0, 0.0), k0 / 2).exceeds_unity);

    const CombSummary helium = uniform(4.0, 4.0, 1e-3);
    CHECK(std::abs(eta_general(helium, kappa_matched(helium, 1e-3)).value - eta_matched(helium, 1e-3)) < 1e-3);
}

TEST_CASE("matched coupling examples")
{
    CHECK(kappa_matched(uniform(4.0, 13.0, 0.0), 0.0) == doctest::Approx(16.0 / 13.0));
    CHECK(kappa_matched(uniform(0.0, 13.0, 0.0), 0.3) == doctest::Approx(0.6));
    CHECK(kappa_matched(uniform(4.0, 4.0, 1e-3), 1e-3) == doctest::Approx(4.002));
}

TEST_CASE("band-centre reflection examples")
{
    const CombSummary s = uniform(4.0, 13.0, 0.0);
    const double k0 = kappa_matched(s, 0.0);
    CHECK(reflection_center(s, k0, 0.0) == 0.0);
    CHECK(reflection_center(s, 2 * k0, 0.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(reflection_center(s, 1e12, 0.0) == doctest::Approx(1.0).epsilon(1e-9));

    const CombSummary h = uniform(4.0, 4.0, 1e-3);
    CHECK(reflection_center(h, kappa_matched(h, 1e-3), 1e-3) == 0.0);
}

TEST_CASE("echo time examples")
{
    CHECK(echo_time(uniform(1.0, 13.0, 0.0)) * 1e3 == doctest::Approx(76.923).epsilon(1e-4));
    CHECK(echo_time(uniform(1.0, 15.0, 0.0)) * 1e3 == doctest::Approx(66.667).epsilon(1e-4));
    CHECK(echo_time(uniform(1.0, 4.0, 0.0)) * 1e3 == doctest::Approx(250.0));
    CHECK(echo_time(uniform(1.0, 1.0, 0.0)) == 1.0);
}

TEST_CASE("property: efficiency falls with either loss rate")
{
    for (double g : {1.0, 4.0, 20.0}) {
        for (double delta : {2.0, 8.0, 13.0}) {
            double last = 2.0;
            for (double gamma = 0.0; gamma <= 5.0; gamma += 0.25) {
                const double eta = eta_matched(uniform(g, delta, gamma), 0.1);
                CHECK(eta < last);
                last = eta;
            }
            last = 2.0;
            for (double gamma_r = 0.0; gamma_r <= 5.0; gamma_r += 0.25) {
                const double eta = eta_matched(uniform(g, delta, 0.1), gamma_r);
                CHECK(eta < last);
                last = eta;
            }
        }
    }
}

TEST_CASE("property: efficiency has a single interior maximum in Delta")
{
    for (double gamma : {1e-3, 0.1, 1.0}) {
        for (double gamma_r : {1e-3, 0.1, 1.0}) {
            std::vector<double> eta;
            for (double delta = 1e-3; delta < 1e5; delta *= 1.05)
                eta.push_back(eta_matched(uniform(4.0, delta, gamma), gamma_r));
            CHECK(sign_changes(eta) == 1);
        }
    }
}

TEST_CASE("property: reflection grows with the coupling mismatch")
{
    const CombSummary s = uniform(25.0, 13.0, 0.0);
    const double k0 = kappa_matched(s, 0.05);
    double last_above = 0.0;
    double last_below = 0.0;
    for (double f = 1.01; f < 50.0; f *= 1.1) {
        const double above = reflection_center(s, k0 * f, 0.05);
        const double below = reflection_center(s, k0 / f, 0.05);
        CHECK(above > last_above);
        CHECK(below > last_below);
        CHECK(above <= 1.0);
        last_above = above;
        last_below = below;
    }
}
