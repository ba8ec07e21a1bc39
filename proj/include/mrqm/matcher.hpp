#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrqm/echo.hpp"
#include "mrqm/model.hpp"
#include "mrqm/pulse.hpp"

namespace mrqm {

struct KappaBounds
{
    double lower = 0.0;
    double upper = 0.0;
};

struct MatchOptions
{
    std::optional<KappaBounds> bounds;  // default [kappa_0/10, 10 kappa_0]
    double relative_tolerance = 1e-3;
    GridOverrides grid;
    unsigned threads = 1;
};

struct MatchResult
{
    double kappa_opt = 0.0;
    double eta_opt = 0.0;
    double kappa_analytic = 0.0;
    double reflected_fraction = 0.0;
    int evaluations = 0;
    bool unimodal = true;          // false when the fallback scan was needed
    bool at_boundary = false;      // optimum sits on a search bound
    bool brackets_analytic = true; // bounds contain kappa_0
    KappaBounds bounds;
};

/// Maximises first-echo efficiency over kappa. An 8-point log-spaced scan
/// checks unimodality and brackets the peak, golden-section search refines it
/// in log kappa. A non-unimodal scan falls back to 64 points before refining.
MatchResult optimize_kappa(const DeviceConfig& config, const Pulse& pulse, const MatchOptions& options = {});

// Number of sign changes in the discrete differences of `values`; exact zeros are skipped.
int sign_changes(std::span<const double> values);

enum class PulsePolicy { fixed, comb_matched };

struct SweepOptions
{
    bool reoptimize_kappa = false;
    PulsePolicy pulse_policy = PulsePolicy::fixed;
    GridOverrides grid;
    unsigned threads = 1;
};

struct SweepRecord
{
    double delta_mhz = 0.0;
    double kappa = 0.0;
    double eta_first = 0.0;
    double echo_time = 0.0;  // us after the input centre; NaN without a first echo
    double reflected_fraction = 0.0;
    double eta_analytic = 0.0;
};

struct SweepResult
{
    std::string parameter = "delta_mhz";
    std::vector<double> values;
    std::vector<SweepRecord> records;
};

/// Rebuilds a uniform comb with the template's tooth count, mean coupling and
/// mean decay at each spacing. Kappa is re-optimised per point, or else the
/// template's kappa/kappa_0 ratio is kept.
SweepResult sweep_detuning(const DeviceConfig& tmpl, const Pulse& pulse, std::span<const double> deltas,
                           const SweepOptions& options = {});

// Comb of the template's shape rebuilt at a new spacing with new tooth parameters.
DeviceConfig rebuild_comb(const DeviceConfig& tmpl, double spacing_mhz, double coupling, double decay);

enum class FitParameter { coupling, decay, common_decay, kappa };

std::string to_string(FitParameter p);
std::optional<FitParameter> parse_fit_parameter(const std::string& name);

struct FitOptions
{
    int budget = 500;
    double stop_residual = 1e-10;
    PulsePolicy pulse_policy = PulsePolicy::fixed;
    GridOverrides grid;
    unsigned threads = 1;
};

struct FitResult
{
    DeviceConfig config;
    double residual = 0.0;  // (eta - target)^2
    double eta = 0.0;
    double echo_time = 0.0;
    int evaluations = 0;
    bool converged = false;  // residual <= 1e-3
};

/// Coordinate descent on (eta_sim - target_eta)^2 with the comb spacing pinned to
/// 1/target_echo_time. When kappa is not free it follows the matched value
/// kappa_0 = 2 gamma_r + g^2/Delta.
FitResult fit_device(double target_eta, double target_echo_time, std::span<const FitParameter> free,
                     const DeviceConfig& fixed, const Pulse& pulse, const FitOptions& options = {});

struct VariantSummary
{
    double kappa = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double reflected_fraction = 0.0;
    StorageRun run;
};

struct MatchedOpenComparison
{
    VariantSummary matched;
    VariantSummary open;
    MatchResult match;
    bool second_echo_suppressed = false;  // matched eta2/eta1 < open eta2/eta1
    bool reflection_suppressed = false;   // matched reflection < open reflection
};

struct CompareOptions
{
    double open_multiplier = 10.0;
    bool optimize_matched = true;  // otherwise kappa_0 is used
    MatchOptions match;
};

MatchedOpenComparison compare_matched_open(const DeviceConfig& config, const Pulse& pulse,
                                           const CompareOptions& options = {});

}  // namespace mrqm
