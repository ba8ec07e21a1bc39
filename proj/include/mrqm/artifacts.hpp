#pragma once

// CSV/JSON serialisation of results. Floating-point values are written with
// 12 significant digits so reruns are byte-identical.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mrqm/echo.hpp"
#include "mrqm/matcher.hpp"
#include "mrqm/spectral.hpp"
#include "mrqm/trace.hpp"

namespace mrqm {

inline constexpr const char* kGenerator = "mrqm 0.1.0";

std::string format_number(double x);
// x rounded to 12 significant digits (NaN and inf pass through).
double round12(double x);

std::string spectrum_csv(const SpectralResponse& response);
std::string trace_csv(const TimeTrace& trace);
std::string sweep_csv(const SweepResult& sweep);

nlohmann::json echoes_json(const EchoReport& report);
nlohmann::json match_json(const MatchResult& match);
nlohmann::json sweep_json(const SweepResult& sweep);
nlohmann::json fit_json(const FitResult& fit, double target_eta, double target_echo_time,
                        std::span<const FitParameter> free);
nlohmann::json comparison_json(const MatchedOpenComparison& cmp, double open_multiplier);

std::string dump(const nlohmann::json& j);

// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mrqm
