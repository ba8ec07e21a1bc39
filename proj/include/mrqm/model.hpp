#pragma once

// Domain types for a comb of mini-resonators coupled to one common cavity.
//
// Units: time in microseconds. Detunings are conventional frequencies in MHz
// and enter the dynamics as 2*pi*detuning (rad/us). Decay rates, couplings
// and the waveguide coupling kappa are amplitude rates in 1/us and enter
// without a 2*pi factor.

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrqm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angular frequency (rad/us) of a conventional frequency in MHz.
constexpr double angular(double mhz) { return kTwoPi * mhz; }

struct MiniResonator
{
    double detuning_mhz = 0.0;
    double decay_rate = 0.0;  // gamma_n, 1/us
    double coupling = 0.0;    // g_n, 1/us
};

struct CommonResonator
{
    double kappa = 0.0;         // waveguide coupling, 1/us
    double detuning_mhz = 0.0;  // Delta_r
    double decay_rate = 0.0;    // gamma_r, 1/us
};

struct DeviceConfig
{
    std::vector<MiniResonator> minis;
    CommonResonator common;

    std::size_t size() const { return minis.size(); }
};

enum class CombCentering { tooth_at_center, midpoint_at_center };

struct Grid
{
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 0.0;

    std::size_t sample_count() const;
    double time(std::size_t i) const { return t_start + static_cast<double>(i) * dt; }
};

void validate_grid(const Grid& grid);

struct ValidationIssue
{
    std::string field;
    std::string message;
};

// Thrown for bad user input. Carries every violation found, not just the first.
class ValidationError : public std::runtime_error
{
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    ValidationError(std::string field, std::string message);

    const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

// Thrown when a computation cannot produce a trustworthy number
// (under-resolved step, overflow, aliasing).
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Equally spaced comb centred on the reference frequency. All teeth share
/// `coupling` and `decay`.
std::vector<MiniResonator> build_uniform_comb(std::size_t n, double spacing_mhz, double coupling,
                                              double decay,
                                              CombCentering centering = CombCentering::tooth_at_center);

std::vector<ValidationIssue> check_config(const DeviceConfig& config);

// Returns the config unchanged, or throws ValidationError listing every issue.
const DeviceConfig& validate_config(const DeviceConfig& config);

// Median of adjacent gaps between sorted tooth detunings (MHz). Requires N >= 2.
double comb_spacing_mhz(const DeviceConfig& config);

DeviceConfig with_kappa(DeviceConfig config, double kappa);

}  // namespace mrqm
