#pragma once

// Scenario files: one JSON document describing a device, an input pulse,
// exactly one command block and an output section. Units are part of every
// key name (spacing_mhz, g_per_us, power_fwhm_us, ...).

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mrqm/echo.hpp"
#include "mrqm/matcher.hpp"
#include "mrqm/model.hpp"
#include "mrqm/pulse.hpp"

namespace mrqm {

enum class Command { spectrum, simulate, sweep, match, fit, compare };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

struct SpectrumBlock
{
    std::optional<double> omega_max;
    std::size_t n_points = 2001;
};

struct SimulateBlock
{
    std::optional<Grid> grid;  // explicit grid; otherwise the automatic one
    Pathway pathway = Pathway::time_domain;
};

struct SweepBlock
{
    std::vector<double> deltas_mhz;
    bool reoptimize_kappa = false;
    PulsePolicy pulse_policy = PulsePolicy::fixed;
};

struct MatchBlock
{
    std::optional<KappaBounds> bounds;
};

struct FitBlock
{
    double target_eta = 0.0;
    double target_echo_time_us = 0.0;
    std::vector<FitParameter> free;
    int budget = 500;
    PulsePolicy pulse_policy = PulsePolicy::fixed;
};

struct CompareBlock
{
    double open_multiplier = 10.0;
    bool optimize_matched = true;
    std::optional<KappaBounds> bounds;
};

struct OutputBlock
{
    std::filesystem::path dir = "out";
    bool csv = true;
    bool json = true;
};

struct Scenario
{
    DeviceConfig device;
    Pulse pulse;
    GridOverrides grid;
    std::variant<SpectrumBlock, SimulateBlock, SweepBlock, MatchBlock, FitBlock, CompareBlock> block;
    OutputBlock output;

    Command command() const { return static_cast<Command>(block.index()); }
};

/// Parses and validates a scenario document. Throws ValidationError listing
/// every bad field.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& file);

struct RunOptions
{
    std::optional<std::filesystem::path> out_dir;
    unsigned threads = 1;
};

/// Runs `command` on the scenario file, writes artifacts and prints a one-line
/// summary to `log`. Returns 0 on success, 2 on validation errors, 3 on
/// numerical errors, 1 on I/O failures. Diagnostics go to `err`.
int run_scenario(Command command, const std::filesystem::path& file, const RunOptions& options,
                 std::ostream& log, std::ostream& err);

}  // namespace mrqm
