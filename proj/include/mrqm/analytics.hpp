#pragma once

// Closed-form estimates for an impedance-matched comb memory. All formulas
// take raw numbers in the library's units (Delta in MHz, rates in 1/us) with
// no extra 2*pi factors.

#include <cstddef>
#include <optional>

#include "mrqm/model.hpp"

namespace mrqm {

class CombSummary
{
public:
    CombSummary(double g_bar, double gamma_bar, std::optional<double> delta_bar, std::size_t n_teeth);

    double g_bar() const { return g_bar_; }
    double gamma_bar() const { return gamma_bar_; }
    std::size_t n_teeth() const { return n_teeth_; }
    bool has_spacing() const { return delta_bar_.has_value(); }
    // Mean adjacent spacing, MHz. Throws ValidationError for fewer than two teeth.
    double delta_bar() const;
    // Storage time 1/Delta, us.
    double t1() const { return 1.0 / delta_bar(); }

private:
    double g_bar_;
    double gamma_bar_;
    std::optional<double> delta_bar_;
    std::size_t n_teeth_;
};

CombSummary summarize_comb(const DeviceConfig& config);

/// eta = [1 + 2 gamma_r Delta / g^2]^-2 exp(-2 gamma / Delta) at kappa = kappa_0.
double eta_matched(const CombSummary& summary, double gamma_r);

struct EtaEstimate
{
    double value = 0.0;
    bool exceeds_unity = false;  // the estimate is outside its range of validity
};

/// eta = g^4 / (Delta^2 kappa^2) exp(-2 gamma T1), not clamped.
EtaEstimate eta_general(const CombSummary& summary, double kappa);

/// kappa_0 = 2 gamma_r + g^2 / Delta.
double kappa_matched(const CombSummary& summary, double gamma_r);

/// Band-centre reflection R = (kappa - kappa_0)^2 / (kappa + kappa_0)^2.
double reflection_center(const CombSummary& summary, double kappa, double gamma_r);

// 1/Delta in us.
double echo_time(const CombSummary& summary);

}  // namespace mrqm
