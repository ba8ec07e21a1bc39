#include "mrqm/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mrqm {

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i != 0)
            out << "; ";
        out << issues[i].field << ": " << issues[i].message;
    }
    return out.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues))
{
}

ValidationError::ValidationError(std::string field, std::string message)
    : ValidationError(std::vector<ValidationIssue>{{std::move(field), std::move(message)}})
{
}

std::size_t Grid::sample_count() const
{
    // The small slack keeps t_end itself on the grid when (t_end - t_start)/dt is
    // an integer up to rounding.
    const double steps = (t_end - t_start) / dt;
    return static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
}

void validate_grid(const Grid& grid)
{
    std::vector<ValidationIssue> issues;
    if (!std::isfinite(grid.t_start) || !std::isfinite(grid.t_end))
        issues.push_back({"grid", "bounds must be finite"});
    else if (!(grid.t_end > grid.t_start))
        issues.push_back({"grid.t_end", "must exceed t_start"});
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt))
        issues.push_back({"grid.dt", "must be positive"});
    if (!issues.empty())
        throw ValidationError(std::move(issues));
}

std::vector<MiniResonator> build_uniform_comb(std::size_t n, double spacing_mhz, double coupling,
                                              double decay, CombCentering centering)
{
    std::vector<ValidationIssue> issues;
    if (n == 0)
        issues.push_back({"n", "comb needs at least one tooth"});
    if (!(spacing_mhz > 0.0) || !std::isfinite(spacing_mhz))
        issues.push_back({"spacing_mhz", "must be positive"});
    if (!issues.empty())
        throw ValidationError(std::move(issues));

    // Symmetric half-integer offsets for even n, a tooth at zero for odd n.
    double shift = 0.5 * static_cast<double>(n - 1);
    if (centering == CombCentering::midpoint_at_center && n % 2 == 1)
        shift += 0.5;

    std::vector<MiniResonator> teeth(n);
    for (std::size_t k = 0; k < n; ++k) {
        teeth[k].detuning_mhz = spacing_mhz * (static_cast<double>(k) - shift);
        teeth[k].coupling = coupling;
        teeth[k].decay_rate = decay;
    }
    return teeth;
}

std::vector<ValidationIssue> check_config(const DeviceConfig& config)
{
    std::vector<ValidationIssue> issues;
    const auto& c = config.common;
    if (!std::isfinite(c.kappa) || !(c.kappa > 0.0))
        issues.push_back({"common.kappa", "kappa must be positive"});
    if (!std::isfinite(c.decay_rate) || c.decay_rate < 0.0)
        issues.push_back({"common.decay_rate", "decay rate must be non-negative"});
    if (!std::isfinite(c.detuning_mhz))
        issues.push_back({"common.detuning_mhz", "detuning must be finite"});

    for (std::size_t i = 0; i < config.minis.size(); ++i) {
        const auto& m = config.minis[i];
        const std::string path = "minis[" + std::to_string(i) + "]";
        if (!std::isfinite(m.detuning_mhz))
            issues.push_back({path + ".detuning_mhz", "detuning must be finite"});
        if (!std::isfinite(m.decay_rate) || m.decay_rate < 0.0)
            issues.push_back({path + ".decay_rate", "decay rate must be non-negative"});
        if (!std::isfinite(m.coupling) || m.coupling < 0.0)
            issues.push_back({path + ".coupling", "coupling must be non-negative"});
        for (std::size_t j = 0; j < i; ++j) {
            if (config.minis[j].detuning_mhz == m.detuning_mhz) {
                issues.push_back({path + ".detuning_mhz",
                                  "duplicate detuning (same as minis[" + std::to_string(j) + "])"});
                break;
            }
        }
    }
    return issues;
}

const DeviceConfig& validate_config(const DeviceConfig& config)
{
    auto issues = check_config(config);
    if (!issues.empty())
        throw ValidationError(std::move(issues));
    return config;
}

double comb_spacing_mhz(const DeviceConfig& config)
{
    if (config.minis.size() < 2)
        throw ValidationError("minis", "comb spacing needs at least two teeth");
    std::vector<double> detunings;
    detunings.reserve(config.minis.size());
    for (const auto& m : config.minis)
        detunings.push_back(m.detuning_mhz);
    std::sort(detunings.begin(), detunings.end());

    std::vector<double> gaps;
    for (std::size_t i = 1; i < detunings.size(); ++i)
        gaps.push_back(detunings[i] - detunings[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    const std::size_t mid = gaps.size() / 2;
    return gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
}

DeviceConfig with_kappa(DeviceConfig config, double kappa)
{
    config.common.kappa = kappa;
    return config;
}

}  // namespace mrqm
