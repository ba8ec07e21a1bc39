#include "mrqm/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mrqm/analytics.hpp"
#include "mrqm/artifacts.hpp"
#include "mrqm/integrator.hpp"
#include "mrqm/spectral.hpp"

namespace mrqm {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 6> kCommandNames{"spectrum", "simulate", "sweep", "match", "fit", "compare"};

// Collects issues while reading so one pass reports every bad field.
class Reader
{
public:
    std::vector<ValidationIssue> issues;

    void fail(const std::string& path, const std::string& message) { issues.push_back({path, message}); }

    const json* object(const json& parent, const std::string& key, const std::string& path, bool required)
    {
        auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                fail(path, "missing required section");
            return nullptr;
        }
        if (!it->is_object()) {
            fail(path, "must be an object");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& parent, const std::string& key, const std::string& path,
                                 bool required)
    {
        auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                fail(path, "missing required field");
            return std::nullopt;
        }
        if (!it->is_number()) {
            fail(path, "must be a number");
            return std::nullopt;
        }
        return it->get<double>();
    }

    std::optional<std::string> string(const json& parent, const std::string& key, const std::string& path,
                                      bool required)
    {
        auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                fail(path, "missing required field");
            return std::nullopt;
        }
        if (!it->is_string()) {
            fail(path, "must be a string");
            return std::nullopt;
        }
        return it->get<std::string>();
    }

    std::optional<bool> boolean(const json& parent, const std::string& key, const std::string& path)
    {
        auto it = parent.find(key);
        if (it == parent.end())
            return std::nullopt;
        if (!it->is_boolean()) {
            fail(path, "must be true or false");
            return std::nullopt;
        }
        return it->get<bool>();
    }

    std::optional<KappaBounds> bounds(const json& parent, const std::string& key, const std::string& path)
    {
        auto it = parent.find(key);
        if (it == parent.end())
            return std::nullopt;
        if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
            fail(path, "must be [lower, upper]");
            return std::nullopt;
        }
        KappaBounds b{(*it)[0].get<double>(), (*it)[1].get<double>()};
        if (!(b.lower > 0.0) || !(b.upper > b.lower)) {
            fail(path, "bounds must satisfy 0 < lower < upper");
            return std::nullopt;
        }
        return b;
    }

    PulsePolicy pulse_policy(const json& parent, const std::string& path)
    {
        const auto s = string(parent, "pulse_policy", path, false);
        if (!s || *s == "fixed")
            return PulsePolicy::fixed;
        if (*s == "comb_matched")
            return PulsePolicy::comb_matched;
        fail(path, "must be \"fixed\" or \"comb_matched\"");
        return PulsePolicy::fixed;
    }
};

void check_unknown(Reader& r, const json& obj, const std::string& path, std::initializer_list<const char*> known)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || it.key() == k;
        if (!ok)
            r.fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
    }
}

// "kappa_per_us" may be a number or "matched" (resolved after the comb is known).
struct KappaSpec
{
    std::optional<double> value;
    bool matched = false;
};

DeviceConfig read_device(Reader& r, const json& doc)
{
    DeviceConfig device;
    const json* dev = r.object(doc, "device", "device", true);
    if (dev == nullptr)
        return device;
    check_unknown(r, *dev, "device", {"comb", "minis", "common"});

    const bool has_comb = dev->contains("comb");
    const bool has_minis = dev->contains("minis");
    if (has_comb == has_minis)
        r.fail("device", "give exactly one of \"comb\" or \"minis\"");

    if (has_comb) {
        if (const json* comb = r.object(*dev, "comb", "device.comb", true)) {
            check_unknown(r, *comb, "device.comb", {"n", "spacing_mhz", "g_per_us", "gamma_per_us", "centering"});
            const auto n = r.number(*comb, "n", "device.comb.n", true);
            const auto spacing = r.number(*comb, "spacing_mhz", "device.comb.spacing_mhz", true);
            const auto g = r.number(*comb, "g_per_us", "device.comb.g_per_us", true);
            const auto gamma = r.number(*comb, "gamma_per_us", "device.comb.gamma_per_us", false);
            const auto centering = r.string(*comb, "centering", "device.comb.centering", false);
            CombCentering c = CombCentering::tooth_at_center;
            if (centering && *centering == "midpoint_at_center")
                c = CombCentering::midpoint_at_center;
            else if (centering && *centering != "tooth_at_center")
                r.fail("device.comb.centering", "must be \"tooth_at_center\" or \"midpoint_at_center\"");
            if (n && (*n < 1 || *n != std::floor(*n)))
                r.fail("device.comb.n", "must be a positive integer");
            else if (spacing && !(*spacing > 0.0))
                r.fail("device.comb.spacing_mhz", "must be positive");
            else if (n && spacing && g)
                device.minis = build_uniform_comb(static_cast<std::size_t>(*n), *spacing, *g, gamma.value_or(0.0), c);
        }
    } else if (has_minis) {
        const json& minis = (*dev)["minis"];
        if (!minis.is_array()) {
            r.fail("device.minis", "must be an array");
        } else {
            for (std::size_t i = 0; i < minis.size(); ++i) {
                const std::string path = "device.minis[" + std::to_string(i) + "]";
                if (!minis[i].is_object()) {
                    r.fail(path, "must be an object");
                    continue;
                }
                check_unknown(r, minis[i], path, {"detuning_mhz", "g_per_us", "gamma_per_us"});
                MiniResonator m;
                m.detuning_mhz = r.number(minis[i], "detuning_mhz", path + ".detuning_mhz", true).value_or(0.0);
                m.coupling = r.number(minis[i], "g_per_us", path + ".g_per_us", true).value_or(0.0);
                m.decay_rate = r.number(minis[i], "gamma_per_us", path + ".gamma_per_us", false).value_or(0.0);
                device.minis.push_back(m);
            }
        }
    }

    KappaSpec kappa;
    if (const json* common = r.object(*dev, "common", "device.common", true)) {
        check_unknown(r, *common, "device.common", {"kappa_per_us", "detuning_mhz", "gamma_per_us"});
        device.common.detuning_mhz = r.number(*common, "detuning_mhz", "device.common.detuning_mhz", false).value_or(0.0);
        device.common.decay_rate = r.number(*common, "gamma_per_us", "device.common.gamma_per_us", false).value_or(0.0);
        auto it = common->find("kappa_per_us");
        if (it == common->end())
            r.fail("device.common.kappa_per_us", "missing required field");
        else if (it->is_number())
            kappa.value = it->get<double>();
        else if (it->is_string() && it->get<std::string>() == "matched")
            kappa.matched = true;
        else
            r.fail("device.common.kappa_per_us", "must be a number or \"matched\"");
    }

    if (kappa.value) {
        device.common.kappa = *kappa.value;
    } else if (kappa.matched) {
        if (device.minis.size() < 2)
            r.fail("device.common.kappa_per_us", "\"matched\" needs a comb of at least two teeth");
        else
            device.common.kappa = kappa_matched(summarize_comb(device), device.common.decay_rate);
    }

    if (r.issues.empty()) {
        for (auto& issue : check_config(device)) {
            issue.field = "device." + issue.field;
            r.issues.push_back(issue);
        }
    }
    return device;
}

Pulse read_pulse(Reader& r, const json& doc, const DeviceConfig& device)
{
    Pulse pulse;
    const json* p = r.object(doc, "pulse", "pulse", true);
    if (p == nullptr)
        return pulse;
    check_unknown(r, *p, "pulse", {"shape", "amplitude", "center_time_us", "power_fwhm_us", "carrier_offset_mhz"});

    const auto shape = r.string(*p, "shape", "pulse.shape", false);
    if (shape && *shape == "rectangular")
        pulse.shape = PulseShape::rectangular;
    else if (shape && *shape != "gaussian")
        r.fail("pulse.shape", "must be \"gaussian\" or \"rectangular\"");
    pulse.amplitude = r.number(*p, "amplitude", "pulse.amplitude", false).value_or(1.0);
    pulse.center_time = r.number(*p, "center_time_us", "pulse.center_time_us", false).value_or(0.0);
    pulse.carrier_offset_mhz = r.number(*p, "carrier_offset_mhz", "pulse.carrier_offset_mhz", false).value_or(0.0);

    auto it = p->find("power_fwhm_us");
    if (it == p->end()) {
        r.fail("pulse.power_fwhm_us", "missing required field");
    } else if (it->is_number()) {
        pulse.power_fwhm = it->get<double>();
    } else if (it->is_string() && it->get<std::string>() == "comb_matched") {
        if (device.minis.size() < 2) {
            r.fail("pulse.power_fwhm_us", "\"comb_matched\" needs a comb of at least two teeth");
        } else {
            const Pulse m = comb_matched_pulse(device.size(), summarize_comb(device).delta_bar());
            pulse.power_fwhm = m.power_fwhm;
        }
    } else {
        r.fail("pulse.power_fwhm_us", "must be a number or \"comb_matched\"");
    }

    try {
        validate_pulse(pulse);
    } catch (const ValidationError& e) {
        for (const auto& issue : e.issues())
            r.issues.push_back(issue);
    }
    return pulse;
}

GridOverrides read_grid_overrides(Reader& r, const json& block, const std::string& path,
                                  std::optional<Grid>* explicit_grid)
{
    GridOverrides overrides;
    const json* g = r.object(block, "grid", path + ".grid", false);
    if (g == nullptr)
        return overrides;
    check_unknown(r, *g, path + ".grid", {"t_start_us", "t_end_us", "dt_us", "lead_fwhms", "periods_after"});
    const auto t0 = r.number(*g, "t_start_us", path + ".grid.t_start_us", false);
    const auto t1 = r.number(*g, "t_end_us", path + ".grid.t_end_us", false);
    overrides.dt = r.number(*g, "dt_us", path + ".grid.dt_us", false);
    overrides.lead_fwhms = r.number(*g, "lead_fwhms", path + ".grid.lead_fwhms", false);
    overrides.periods_after = r.number(*g, "periods_after", path + ".grid.periods_after", false);
    if (overrides.dt && !(*overrides.dt > 0.0))
        r.fail(path + ".grid.dt_us", "must be positive");
    if (t0 || t1) {
        if (explicit_grid == nullptr) {
            r.fail(path + ".grid", "explicit t_start_us/t_end_us are only supported by simulate");
        } else if (!t0 || !t1 || !overrides.dt) {
            r.fail(path + ".grid", "an explicit grid needs t_start_us, t_end_us and dt_us");
        } else if (!(*t1 > *t0)) {
            r.fail(path + ".grid.t_end_us", "must exceed t_start_us");
        } else {
            *explicit_grid = Grid{*t0, *t1, *overrides.dt};
        }
    }
    return overrides;
}

}  // namespace

std::string to_string(Command c)
{
    return kCommandNames[static_cast<std::size_t>(c)];
}

std::optional<Command> parse_command(const std::string& name)
{
    for (std::size_t i = 0; i < kCommandNames.size(); ++i)
        if (name == kCommandNames[i])
            return static_cast<Command>(i);
    return std::nullopt;
}

Scenario parse_scenario(const json& doc)
{
    Reader r;
    Scenario sc;
    if (!doc.is_object())
        throw ValidationError("", "scenario must be a JSON object");

    check_unknown(r, doc, "", {"device", "pulse", "output", "version", "description", "spectrum", "simulate",
                               "sweep", "match", "fit", "compare"});
    sc.device = read_device(r, doc);
    sc.pulse = read_pulse(r, doc, sc.device);

    if (const json* out = r.object(doc, "output", "output", false)) {
        check_unknown(r, *out, "output", {"dir", "csv", "json"});
        if (auto dir = r.string(*out, "dir", "output.dir", false))
            sc.output.dir = *dir;
        sc.output.csv = r.boolean(*out, "csv", "output.csv").value_or(true);
        sc.output.json = r.boolean(*out, "json", "output.json").value_or(true);
    }

    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < kCommandNames.size(); ++i)
        if (doc.contains(kCommandNames[i]))
            present.push_back(i);
    if (present.size() != 1) {
        r.fail("", "exactly one command block (spectrum, simulate, sweep, match, fit, compare) is required");
        throw ValidationError(std::move(r.issues));
    }

    const auto command = static_cast<Command>(present.front());
    const std::string name = kCommandNames[present.front()];
    const json* block = r.object(doc, name, name, true);
    if (block == nullptr)
        throw ValidationError(std::move(r.issues));

    switch (command) {
    case Command::spectrum: {
        check_unknown(r, *block, name, {"omega_max_rad_per_us", "n_points"});
        SpectrumBlock b;
        b.omega_max = r.number(*block, "omega_max_rad_per_us", name + ".omega_max_rad_per_us", false);
        if (b.omega_max && !(*b.omega_max > 0.0))
            r.fail(name + ".omega_max_rad_per_us", "must be positive");
        if (auto n = r.number(*block, "n_points", name + ".n_points", false)) {
            if (*n < 2 || *n != std::floor(*n))
                r.fail(name + ".n_points", "must be an integer >= 2");
            else
                b.n_points = static_cast<std::size_t>(*n);
        }
        sc.block = b;
        break;
    }
    case Command::simulate: {
        check_unknown(r, *block, name, {"grid", "pathway"});
        SimulateBlock b;
        sc.grid = read_grid_overrides(r, *block, name, &b.grid);
        if (auto p = r.string(*block, "pathway", name + ".pathway", false)) {
            if (*p == "spectral")
                b.pathway = Pathway::spectral;
            else if (*p != "time_domain")
                r.fail(name + ".pathway", "must be \"time_domain\" or \"spectral\"");
        }
        sc.block = b;
        break;
    }
    case Command::sweep: {
        check_unknown(r, *block, name, {"deltas_mhz", "reoptimize_kappa", "pulse_policy", "grid"});
        SweepBlock b;
        sc.grid = read_grid_overrides(r, *block, name, nullptr);
        auto it = block->find("deltas_mhz");
        if (it == block->end() || !it->is_array() || it->empty()) {
            r.fail(name + ".deltas_mhz", "must be a non-empty array of positive numbers");
        } else {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& v = (*it)[i];
                if (!v.is_number() || !(v.get<double>() > 0.0))
                    r.fail(name + ".deltas_mhz[" + std::to_string(i) + "]", "must be a positive number");
                else
                    b.deltas_mhz.push_back(v.get<double>());
            }
        }
        b.reoptimize_kappa = r.boolean(*block, "reoptimize_kappa", name + ".reoptimize_kappa").value_or(false);
        b.pulse_policy = r.pulse_policy(*block, name + ".pulse_policy");
        sc.block = b;
        break;
    }
    case Command::match: {
        check_unknown(r, *block, name, {"kappa_bounds_per_us", "grid"});
        MatchBlock b;
        sc.grid = read_grid_overrides(r, *block, name, nullptr);
        b.bounds = r.bounds(*block, "kappa_bounds_per_us", name + ".kappa_bounds_per_us");
        sc.block = b;
        break;
    }
    case Command::fit: {
        check_unknown(r, *block, name, {"target_eta", "target_echo_time_us", "free", "budget", "pulse_policy", "grid"});
        FitBlock b;
        sc.grid = read_grid_overrides(r, *block, name, nullptr);
        const auto eta = r.number(*block, "target_eta", name + ".target_eta", true);
        const auto echo = r.number(*block, "target_echo_time_us", name + ".target_echo_time_us", true);
        if (eta && (*eta < 0.0 || *eta > 1.0))
            r.fail(name + ".target_eta", "must lie in [0, 1]");
        if (echo && !(*echo > 0.0))
            r.fail(name + ".target_echo_time_us", "must be positive");
        b.target_eta = eta.value_or(0.0);
        b.target_echo_time_us = echo.value_or(0.0);
        auto it = block->find("free");
        if (it == block->end() || !it->is_array() || it->empty()) {
            r.fail(name + ".free", "must be a non-empty array drawn from g, gamma, gamma_r, kappa");
        } else {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& v = (*it)[i];
                std::optional<FitParameter> p;
                if (v.is_string())
                    p = parse_fit_parameter(v.get<std::string>());
                if (!p)
                    r.fail(name + ".free[" + std::to_string(i) + "]", "must be one of g, gamma, gamma_r, kappa");
                else
                    b.free.push_back(*p);
            }
        }
        if (auto budget = r.number(*block, "budget", name + ".budget", false)) {
            if (*budget < 1 || *budget != std::floor(*budget))
                r.fail(name + ".budget", "must be a positive integer");
            else
                b.budget = static_cast<int>(*budget);
        }
        b.pulse_policy = r.pulse_policy(*block, name + ".pulse_policy");
        if (sc.device.minis.size() < 2)
            r.fail("device", "fit needs a comb of at least two teeth");
        sc.block = b;
        break;
    }
    case Command::compare: {
        check_unknown(r, *block, name, {"open_multiplier", "optimize_matched", "kappa_bounds_per_us", "grid"});
        CompareBlock b;
        sc.grid = read_grid_overrides(r, *block, name, nullptr);
        b.open_multiplier = r.number(*block, "open_multiplier", name + ".open_multiplier", false).value_or(10.0);
        if (!(b.open_multiplier > 0.0))
            r.fail(name + ".open_multiplier", "must be positive");
        b.optimize_matched = r.boolean(*block, "optimize_matched", name + ".optimize_matched").value_or(true);
        b.bounds = r.bounds(*block, "kappa_bounds_per_us", name + ".kappa_bounds_per_us");
        sc.block = b;
        break;
    }
    }

    if ((command == Command::simulate || command == Command::sweep || command == Command::match
         || command == Command::compare)
        && sc.device.minis.size() < 2 && r.issues.empty())
        r.fail("device", to_string(command) + " needs a comb of at least two teeth");

    if (!r.issues.empty())
        throw ValidationError(std::move(r.issues));
    return sc;
}

Scenario load_scenario(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw ValidationError("scenario", "cannot read " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario", std::string("not valid JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

namespace {

struct Artifact
{
    std::string name;
    std::string content;
};

std::string run_command(const Scenario& sc, const RunOptions& options, std::vector<Artifact>& artifacts)
{
    std::ostringstream summary;
    summary << to_string(sc.command()) << ":";
    const bool csv = sc.output.csv;
    const bool js = sc.output.json;

    switch (sc.command()) {
    case Command::spectrum: {
        const auto& b = std::get<SpectrumBlock>(sc.block);
        double omega_max = 5.0 * sc.device.common.kappa;
        if (!b.omega_max && sc.device.minis.size() >= 2) {
            double edge = 0.0;
            for (const auto& m : sc.device.minis)
                edge = std::max(edge, std::abs(m.detuning_mhz));
            omega_max = angular(edge + comb_spacing_mhz(sc.device));
        }
        const SpectralResponse resp = sample_response(sc.device, b.omega_max.value_or(omega_max), b.n_points);
        double min_r2 = 1.0;
        for (const cplx& r : resp.reflection)
            min_r2 = std::min(min_r2, std::norm(r));
        summary << " points=" << resp.omegas.size() << " min|r|^2=" << format_number(min_r2);
        for (const auto& w : resp.warnings)
            summary << " warning=\"" << w << "\"";
        if (csv)
            artifacts.push_back({"spectrum.csv", spectrum_csv(resp)});
        break;
    }
    case Command::simulate: {
        const auto& b = std::get<SimulateBlock>(sc.block);
        StorageRun run;
        if (b.grid) {
            const double period = 1.0 / comb_spacing_mhz(sc.device);
            run.grid = *b.grid;
            run.input_window = default_input_window(run.grid, sc.pulse, period);
            run.trace = b.pathway == Pathway::spectral ? respond_pulse(sc.device, sc.pulse, run.grid)
                                                       : integrate(sc.device, sc.pulse, run.grid);
            run.report = detect_echoes(run.trace, run.input_window, period);
        } else {
            run = run_storage(sc.device, sc.pulse, sc.grid, b.pathway);
        }
        summary << " eta1=" << format_number(run.report.efficiency(1))
                << " eta2=" << format_number(run.report.efficiency(2))
                << " R=" << format_number(run.report.reflected_fraction());
        if (const EchoEvent* e = run.report.event(1))
            summary << " echo_delay_ns=" << format_number((e->peak_time - run.report.reference_time) * 1e3);
        if (csv)
            artifacts.push_back({"trace.csv", trace_csv(run.trace)});
        if (js)
            artifacts.push_back({"echoes.json", dump(echoes_json(run.report))});
        break;
    }
    case Command::sweep: {
        const auto& b = std::get<SweepBlock>(sc.block);
        SweepOptions so;
        so.reoptimize_kappa = b.reoptimize_kappa;
        so.pulse_policy = b.pulse_policy;
        so.grid = sc.grid;
        so.threads = options.threads;
        const SweepResult res = sweep_detuning(sc.device, sc.pulse, b.deltas_mhz, so);
        summary << " points=" << res.records.size();
        if (csv)
            artifacts.push_back({"sweep.csv", sweep_csv(res)});
        if (js)
            artifacts.push_back({"sweep.json", dump(sweep_json(res))});
        break;
    }
    case Command::match: {
        const auto& b = std::get<MatchBlock>(sc.block);
        MatchOptions mo;
        mo.bounds = b.bounds;
        mo.grid = sc.grid;
        mo.threads = options.threads;
        const MatchResult m = optimize_kappa(sc.device, sc.pulse, mo);
        summary << " kappa_opt=" << format_number(m.kappa_opt) << " kappa_analytic=" << format_number(m.kappa_analytic)
                << " eta_opt=" << format_number(m.eta_opt) << " R=" << format_number(m.reflected_fraction);
        if (js)
            artifacts.push_back({"match.json", dump(match_json(m))});
        break;
    }
    case Command::fit: {
        const auto& b = std::get<FitBlock>(sc.block);
        FitOptions fo;
        fo.budget = b.budget;
        fo.pulse_policy = b.pulse_policy;
        fo.grid = sc.grid;
        fo.threads = options.threads;
        const FitResult f = fit_device(b.target_eta, b.target_echo_time_us, b.free, sc.device, sc.pulse, fo);
        const CombSummary s = summarize_comb(f.config);
        summary << " eta=" << format_number(f.eta) << " residual=" << format_number(f.residual)
                << " g=" << format_number(s.g_bar()) << " gamma=" << format_number(s.gamma_bar());
        if (js)
            artifacts.push_back({"fit.json", dump(fit_json(f, b.target_eta, b.target_echo_time_us, b.free))});
        break;
    }
    case Command::compare: {
        const auto& b = std::get<CompareBlock>(sc.block);
        CompareOptions co;
        co.open_multiplier = b.open_multiplier;
        co.optimize_matched = b.optimize_matched;
        co.match.bounds = b.bounds;
        co.match.grid = sc.grid;
        co.match.threads = options.threads;
        const MatchedOpenComparison cmp = compare_matched_open(sc.device, sc.pulse, co);
        summary << " matched(eta1=" << format_number(cmp.matched.eta1) << " eta2=" << format_number(cmp.matched.eta2)
                << " R=" << format_number(cmp.matched.reflected_fraction) << ") open(eta1="
                << format_number(cmp.open.eta1) << " eta2=" << format_number(cmp.open.eta2)
                << " R=" << format_number(cmp.open.reflected_fraction) << ")";
        if (csv) {
            artifacts.push_back({"trace_matched.csv", trace_csv(cmp.matched.run.trace)});
            artifacts.push_back({"trace_open.csv", trace_csv(cmp.open.run.trace)});
        }
        if (js)
            artifacts.push_back({"comparison.json", dump(comparison_json(cmp, b.open_multiplier))});
        break;
    }
    }
    return summary.str();
}

}  // namespace

int run_scenario(Command command, const std::filesystem::path& file, const RunOptions& options,
                 std::ostream& log, std::ostream& err)
{
    try {
        const Scenario sc = load_scenario(file);
        if (sc.command() != command)
            throw ValidationError("", "scenario holds a \"" + to_string(sc.command()) + "\" block but the command is \""
                                          + to_string(command) + "\"");

        std::vector<Artifact> artifacts;
        const std::string summary = run_command(sc, options, artifacts);

        const std::filesystem::path dir = options.out_dir.value_or(sc.output.dir);
        std::filesystem::create_directories(dir);
        std::ostringstream paths;
        for (const auto& a : artifacts) {
            write_atomic(dir / a.name, a.content);
            paths << ' ' << (dir / a.name).string();
        }
        log << summary << " ->" << paths.str() << '\n';
        return 0;
    } catch (const ValidationError& e) {
        err << "validation failed:\n";
        for (const auto& issue : e.issues())
            err << "  " << (issue.field.empty() ? "<scenario>" : issue.field) << ": " << issue.message << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace mrqm
