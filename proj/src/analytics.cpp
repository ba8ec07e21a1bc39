#include "mrqm/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mrqm {

CombSummary::CombSummary(double g_bar, double gamma_bar, std::optional<double> delta_bar,
                         std::size_t n_teeth)
    : g_bar_(g_bar), gamma_bar_(gamma_bar), delta_bar_(delta_bar), n_teeth_(n_teeth)
{
}

double CombSummary::delta_bar() const
{
    if (!delta_bar_)
        throw ValidationError("minis", "mean spacing needs at least two teeth");
    return *delta_bar_;
}

CombSummary summarize_comb(const DeviceConfig& config)
{
    const std::size_t n = config.minis.size();
    if (n == 0)
        throw ValidationError("minis", "comb summary needs at least one tooth");

    double g = 0.0;
    double gamma = 0.0;
    std::vector<double> detunings;
    for (const auto& m : config.minis) {
        g += m.coupling;
        gamma += m.decay_rate;
        detunings.push_back(m.detuning_mhz);
    }
    std::optional<double> delta;
    if (n >= 2) {
        // The mean of adjacent gaps telescopes to the span over (n - 1).
        std::sort(detunings.begin(), detunings.end());
        delta = (detunings.back() - detunings.front()) / static_cast<double>(n - 1);
    }
    return {g / static_cast<double>(n), gamma / static_cast<double>(n), delta, n};
}

double eta_matched(const CombSummary& summary, double gamma_r)
{
    const double delta = summary.delta_bar();
    const double g2 = summary.g_bar() * summary.g_bar();
    const double loading = 1.0 + 2.0 * gamma_r * delta / g2;
    return std::exp(-2.0 * summary.gamma_bar() / delta) / (loading * loading);
}

EtaEstimate eta_general(const CombSummary& summary, double kappa)
{
    const double delta = summary.delta_bar();
    const double ratio = summary.g_bar() * summary.g_bar() / (delta * kappa);
    const double value = ratio * ratio * std::exp(-2.0 * summary.gamma_bar() * summary.t1());
    return {value, value > 1.0};
}

double kappa_matched(const CombSummary& summary, double gamma_r)
{
    return 2.0 * gamma_r + summary.g_bar() * summary.g_bar() / summary.delta_bar();
}

double reflection_center(const CombSummary& summary, double kappa, double gamma_r)
{
    // kappa - 2 gamma_r - g^2/Delta written through kappa_0 so that kappa == kappa_0
    // gives exactly zero.
    const double k0 = kappa_matched(summary, gamma_r);
    const double num = kappa - k0;
    const double den = kappa + k0;
    return num * num / (den * den);
}

double echo_time(const CombSummary& summary)
{
    return summary.t1();
}

}  // namespace mrqm
