#include "mrqm/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mrqm/analytics.hpp"
#include "mrqm/parallel.hpp"

namespace mrqm {

namespace {

const double kInvPhi = 1.0 / std::numbers::phi;

struct KappaSample
{
    double kappa = 0.0;
    double eta = 0.0;
    double reflected = 0.0;
};

KappaSample evaluate_kappa(const DeviceConfig& config, const Pulse& pulse, double kappa,
                           const GridOverrides& grid)
{
    const StorageRun run = run_storage(with_kappa(config, kappa), pulse, grid);
    return {kappa, run.report.efficiency(1), run.report.reflected_fraction()};
}

std::vector<double> log_space(double lo, double hi, std::size_t n)
{
    std::vector<double> xs(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

// Golden-section maximisation of f on [lo, hi] (already in the search
// coordinate). Stops when the bracket is narrower than `width`.
template <class F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi, double width)
{
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > width) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

CombCentering infer_centering(const DeviceConfig& tmpl)
{
    const bool odd = tmpl.minis.size() % 2 == 1;
    const bool has_zero = std::any_of(tmpl.minis.begin(), tmpl.minis.end(),
                                      [](const MiniResonator& m) { return m.detuning_mhz == 0.0; });
    return odd && !has_zero ? CombCentering::midpoint_at_center : CombCentering::tooth_at_center;
}

Pulse pulse_for(const Pulse& pulse, PulsePolicy policy, std::size_t n_teeth, double spacing)
{
    if (policy == PulsePolicy::fixed)
        return pulse;
    Pulse p = comb_matched_pulse(n_teeth, spacing, pulse.center_time);
    p.amplitude = pulse.amplitude;
    p.carrier_offset_mhz = pulse.carrier_offset_mhz;
    return p;
}

}  // namespace

int sign_changes(std::span<const double> values)
{
    int changes = 0;
    int last_sign = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sign == 0)
            continue;
        if (last_sign != 0 && sign != last_sign)
            ++changes;
        last_sign = sign;
    }
    return changes;
}

MatchResult optimize_kappa(const DeviceConfig& config, const Pulse& pulse, const MatchOptions& options)
{
    validate_config(config);
    validate_pulse(pulse);
    const CombSummary summary = summarize_comb(config);

    MatchResult result;
    result.kappa_analytic = kappa_matched(summary, config.common.decay_rate);
    result.bounds = options.bounds.value_or(
        KappaBounds{result.kappa_analytic / 10.0, result.kappa_analytic * 10.0});
    const auto [lo, hi] = result.bounds;
    if (!(lo > 0.0) || !(hi > lo))
        throw ValidationError("kappa_bounds", "bounds must satisfy 0 < lower < upper");
    result.brackets_analytic = lo <= result.kappa_analytic && result.kappa_analytic <= hi;

    std::vector<KappaSample> samples;
    auto scan = [&](std::size_t n) {
        const auto kappas = log_space(lo, hi, n);
        std::vector<KappaSample> out(n);
        parallel_for(n, options.threads,
                     [&](std::size_t i) { out[i] = evaluate_kappa(config, pulse, kappas[i], options.grid); });
        result.evaluations += static_cast<int>(n);
        return out;
    };
    auto etas_of = [](const std::vector<KappaSample>& s) {
        std::vector<double> etas;
        for (const auto& x : s)
            etas.push_back(x.eta);
        return etas;
    };

    samples = scan(8);
    result.unimodal = sign_changes(etas_of(samples)) <= 1;
    if (!result.unimodal)
        samples = scan(64);

    const auto best_it = std::max_element(samples.begin(), samples.end(),
                                          [](const KappaSample& a, const KappaSample& b) { return a.eta < b.eta; });
    const std::size_t best = static_cast<std::size_t>(best_it - samples.begin());
    KappaSample optimum = *best_it;

    const std::size_t left = best == 0 ? 0 : best - 1;
    const std::size_t right = std::min(best + 1, samples.size() - 1);
    std::vector<KappaSample> refined;
    auto objective = [&](double log_kappa) {
        refined.push_back(evaluate_kappa(config, pulse, std::exp(log_kappa), options.grid));
        ++result.evaluations;
        return refined.back().eta;
    };
    golden_maximize(objective, std::log(samples[left].kappa), std::log(samples[right].kappa),
                    std::log1p(options.relative_tolerance));
    for (const auto& s : refined)
        if (s.eta > optimum.eta)
            optimum = s;

    result.kappa_opt = optimum.kappa;
    result.eta_opt = optimum.eta;
    result.reflected_fraction = optimum.reflected;
    const double edge = 1.0 + 2.0 * options.relative_tolerance;
    result.at_boundary = optimum.kappa <= lo * edge || optimum.kappa >= hi / edge;
    return result;
}

DeviceConfig rebuild_comb(const DeviceConfig& tmpl, double spacing_mhz, double coupling, double decay)
{
    DeviceConfig config;
    config.common = tmpl.common;
    config.minis = build_uniform_comb(tmpl.minis.size(), spacing_mhz, coupling, decay, infer_centering(tmpl));
    return config;
}

SweepResult sweep_detuning(const DeviceConfig& tmpl, const Pulse& pulse, std::span<const double> deltas,
                           const SweepOptions& options)
{
    validate_config(tmpl);
    validate_pulse(pulse);
    const CombSummary base = summarize_comb(tmpl);
    for (double d : deltas)
        if (!(d > 0.0))
            throw ValidationError("sweep.deltas_mhz", "every spacing must be positive");

    const double kappa_ratio = tmpl.common.kappa / kappa_matched(base, tmpl.common.decay_rate);

    SweepResult result;
    result.values.assign(deltas.begin(), deltas.end());
    result.records.resize(deltas.size());
    auto point = [&](std::size_t i) {
        const double delta = deltas[i];
        DeviceConfig config = rebuild_comb(tmpl, delta, base.g_bar(), base.gamma_bar());
        const CombSummary summary = summarize_comb(config);
        const Pulse p = pulse_for(pulse, options.pulse_policy, config.size(), delta);

        double kappa = kappa_ratio * kappa_matched(summary, config.common.decay_rate);
        if (options.reoptimize_kappa) {
            MatchOptions mo;
            mo.grid = options.grid;
            kappa = optimize_kappa(config, p, mo).kappa_opt;
        }
        config.common.kappa = kappa;
        const StorageRun run = run_storage(config, p, options.grid);

        SweepRecord& rec = result.records[i];
        rec.delta_mhz = delta;
        rec.kappa = kappa;
        rec.eta_first = run.report.efficiency(1);
        const EchoEvent* first = run.report.event(1);
        rec.echo_time = first != nullptr ? first->peak_time - run.report.reference_time
                                         : std::numeric_limits<double>::quiet_NaN();
        rec.reflected_fraction = run.report.reflected_fraction();
        rec.eta_analytic = eta_matched(summary, config.common.decay_rate);
    };
    parallel_for(deltas.size(), options.threads, point);
    return result;
}

std::string to_string(FitParameter p)
{
    switch (p) {
    case FitParameter::coupling: return "g";
    case FitParameter::decay: return "gamma";
    case FitParameter::common_decay: return "gamma_r";
    case FitParameter::kappa: return "kappa";
    }
    return "?";
}

std::optional<FitParameter> parse_fit_parameter(const std::string& name)
{
    for (FitParameter p : {FitParameter::coupling, FitParameter::decay, FitParameter::common_decay,
                           FitParameter::kappa})
        if (to_string(p) == name)
            return p;
    return std::nullopt;
}

namespace {

// Point in fit space. Kappa is carried as a multiple of the matched value.
struct FitPoint
{
    double g = 0.0;
    double gamma = 0.0;
    double gamma_r = 0.0;
    double kappa_ratio = 1.0;

    double& at(FitParameter p)
    {
        switch (p) {
        case FitParameter::coupling: return g;
        case FitParameter::decay: return gamma;
        case FitParameter::common_decay: return gamma_r;
        case FitParameter::kappa: return kappa_ratio;
        }
        return g;
    }
};

struct BudgetExhausted
{
};

}  // namespace

FitResult fit_device(double target_eta, double target_echo_time, std::span<const FitParameter> free,
                     const DeviceConfig& fixed, const Pulse& pulse, const FitOptions& options)
{
    std::vector<ValidationIssue> issues;
    if (!(target_eta >= 0.0) || target_eta > 1.0)
        issues.push_back({"fit.target_eta", "must lie in [0, 1]"});
    if (!(target_echo_time > 0.0))
        issues.push_back({"fit.target_echo_time_us", "must be positive"});
    if (free.empty())
        issues.push_back({"fit.free", "at least one free parameter is required"});
    if (fixed.minis.size() < 2)
        issues.push_back({"minis", "fit needs a comb of at least two teeth"});
    if (!issues.empty())
        throw ValidationError(std::move(issues));
    validate_pulse(pulse);

    const double delta = 1.0 / target_echo_time;
    const double rate_scale = angular(delta);
    const CombSummary start = summarize_comb(fixed);
    const Pulse p = pulse_for(pulse, options.pulse_policy, fixed.size(), delta);

    auto build = [&](const FitPoint& x) {
        DeviceConfig config = rebuild_comb(fixed, delta, x.g, x.gamma);
        config.common.decay_rate = x.gamma_r;
        const CombSummary s = summarize_comb(config);
        config.common.kappa = x.kappa_ratio * kappa_matched(s, x.gamma_r);
        return config;
    };

    int evaluations = 0;
    FitPoint best_point;
    best_point.g = start.g_bar();
    best_point.gamma = start.gamma_bar();
    best_point.gamma_r = fixed.common.decay_rate;
    best_point.kappa_ratio = fixed.common.kappa / kappa_matched(start, fixed.common.decay_rate);
    if (!std::isfinite(best_point.kappa_ratio) || best_point.kappa_ratio <= 0.0)
        best_point.kappa_ratio = 1.0;
    double best_residual = std::numeric_limits<double>::infinity();
    double best_eta = 0.0;

    auto residual_at = [&](const FitPoint& x) {
        if (evaluations >= options.budget)
            throw BudgetExhausted{};
        ++evaluations;
        const double eta = first_echo_efficiency(build(x), p, options.grid);
        const double r = (eta - target_eta) * (eta - target_eta);
        if (r < best_residual) {
            best_residual = r;
            best_point = x;
            best_eta = eta;
        }
        return r;
    };

    auto bounds_of = [&](FitParameter param) -> std::pair<double, double> {
        switch (param) {
        case FitParameter::coupling: return {1e-3 * rate_scale, 10.0 * rate_scale};
        case FitParameter::decay:
        case FitParameter::common_decay: return {0.0, 10.0 * rate_scale};
        case FitParameter::kappa: return {0.1, 10.0};
        }
        return {0.0, 1.0};
    };

    try {
        residual_at(best_point);
        for (int sweep = 0; sweep < 20 && best_residual > options.stop_residual; ++sweep) {
            const double before = best_residual;
            for (FitParameter param : free) {
                if (best_residual <= options.stop_residual)
                    break;
                const auto [lo, hi] = bounds_of(param);
                // Geometric probe from hi/1000 to hi plus the lower bound itself.
                std::vector<double> probes{lo};
                for (double v : log_space(std::max(lo, hi * 1e-3), hi, 10))
                    if (v > lo)
                        probes.push_back(v);
                std::vector<double> residuals;
                for (double v : probes) {
                    FitPoint x = best_point;
                    x.at(param) = v;
                    residuals.push_back(residual_at(x));
                    if (best_residual <= options.stop_residual)
                        break;
                }
                if (best_residual <= options.stop_residual)
                    break;
                const std::size_t k = static_cast<std::size_t>(
                    std::min_element(residuals.begin(), residuals.end()) - residuals.begin());
                const double a = probes[k == 0 ? 0 : k - 1];
                const double b = probes[std::min(k + 1, probes.size() - 1)];
                const FitPoint anchor = best_point;
                auto neg = [&](double v) {
                    FitPoint x = anchor;
                    x.at(param) = v;
                    return -residual_at(x);
                };
                golden_maximize(neg, a, b, 1e-4 * std::max(b, 1e-12));
            }
            if (best_residual >= before * (1.0 - 1e-6))
                break;
        }
    } catch (const BudgetExhausted&) {
    }

    FitResult result;
    result.config = build(best_point);
    result.residual = best_residual;
    result.eta = best_eta;
    result.evaluations = evaluations;
    result.converged = best_residual <= 1e-3;
    const StorageRun run = run_storage(result.config, p, options.grid);
    const EchoEvent* first = run.report.event(1);
    result.echo_time = first != nullptr ? first->peak_time - run.report.reference_time
                                        : std::numeric_limits<double>::quiet_NaN();
    return result;
}

MatchedOpenComparison compare_matched_open(const DeviceConfig& config, const Pulse& pulse,
                                           const CompareOptions& options)
{
    validate_config(config);
    if (!(options.open_multiplier > 0.0))
        throw ValidationError("compare.open_multiplier", "must be positive");

    MatchedOpenComparison out;
    const CombSummary summary = summarize_comb(config);
    double kappa = kappa_matched(summary, config.common.decay_rate);
    if (options.optimize_matched) {
        out.match = optimize_kappa(config, pulse, options.match);
        kappa = out.match.kappa_opt;
    } else {
        out.match.kappa_analytic = kappa;
        out.match.kappa_opt = kappa;
    }

    auto variant = [&](double k) {
        VariantSummary v;
        v.kappa = k;
        v.run = run_storage(with_kappa(config, k), pulse, options.match.grid);
        v.eta1 = v.run.report.efficiency(1);
        v.eta2 = v.run.report.efficiency(2);
        v.reflected_fraction = v.run.report.reflected_fraction();
        return v;
    };
    out.matched = variant(kappa);
    out.open = variant(kappa * options.open_multiplier);

    auto ratio = [](const VariantSummary& v) {
        return v.eta1 > 0.0 ? v.eta2 / v.eta1 : std::numeric_limits<double>::infinity();
    };
    out.second_echo_suppressed = ratio(out.matched) < ratio(out.open);
    out.reflection_suppressed = out.matched.reflected_fraction < out.open.reflected_fraction;
    return out;
}

}  // namespace mrqm
