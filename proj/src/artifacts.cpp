#include "mrqm/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mrqm/analytics.hpp"

namespace mrqm {

using nlohmann::json;

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x)
{
    if (!std::isfinite(x))
        return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

std::string spectrum_csv(const SpectralResponse& response)
{
    std::ostringstream out;
    out << "omega_rad_per_us,re_r,im_r,abs_r2\n";
    for (std::size_t i = 0; i < response.omegas.size(); ++i) {
        const cplx r = response.reflection[i];
        out << format_number(response.omegas[i]) << ',' << format_number(r.real()) << ','
            << format_number(r.imag()) << ',' << format_number(std::norm(r)) << '\n';
    }
    return out.str();
}

std::string trace_csv(const TimeTrace& trace)
{
    std::ostringstream out;
    out << "t_us,re_in,im_in,re_out,im_out,p_out\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const cplx in = trace.a_in[i];
        const cplx o = trace.a_out[i];
        out << format_number(trace.time(i)) << ',' << format_number(in.real()) << ','
            << format_number(in.imag()) << ',' << format_number(o.real()) << ',' << format_number(o.imag())
            << ',' << format_number(std::norm(o)) << '\n';
    }
    return out.str();
}

std::string sweep_csv(const SweepResult& sweep)
{
    std::ostringstream out;
    out << "delta_mhz,echo_time_ns,eta_first,eta_analytic,reflected_fraction\n";
    for (const auto& r : sweep.records) {
        out << format_number(r.delta_mhz) << ',' << format_number(r.echo_time * 1e3) << ','
            << format_number(r.eta_first) << ',' << format_number(r.eta_analytic) << ','
            << format_number(r.reflected_fraction) << '\n';
    }
    return out.str();
}

json echoes_json(const EchoReport& report)
{
    json events = json::array();
    for (const auto& e : report.events) {
        events.push_back({{"k", e.k},
                          {"peak_time_us", round12(e.peak_time)},
                          {"delay_us", round12(e.peak_time - report.reference_time)},
                          {"window_us", {round12(e.window.start), round12(e.window.end)}},
                          {"energy", round12(e.energy)},
                          {"efficiency", round12(e.efficiency)}});
    }
    return {{"generator", kGenerator},
            {"input_energy", round12(report.input_energy)},
            {"reflected_energy", round12(report.reflected_energy)},
            {"reflected_fraction", round12(report.reflected_fraction())},
            {"reference_time_us", round12(report.reference_time)},
            {"period_us", round12(report.period)},
            {"events", events}};
}

json match_json(const MatchResult& m)
{
    return {{"generator", kGenerator},
            {"kappa_opt", round12(m.kappa_opt)},
            {"kappa_analytic", round12(m.kappa_analytic)},
            {"eta_opt", round12(m.eta_opt)},
            {"reflected_fraction", round12(m.reflected_fraction)},
            {"evaluations", m.evaluations},
            {"unimodal", m.unimodal},
            {"at_boundary", m.at_boundary},
            {"brackets_analytic", m.brackets_analytic},
            {"bounds", {round12(m.bounds.lower), round12(m.bounds.upper)}}};
}

json sweep_json(const SweepResult& sweep)
{
    json records = json::array();
    for (const auto& r : sweep.records) {
        records.push_back({{"delta_mhz", round12(r.delta_mhz)},
                           {"kappa_per_us", round12(r.kappa)},
                           {"eta_first", round12(r.eta_first)},
                           {"echo_time_us", round12(r.echo_time)},
                           {"reflected_fraction", round12(r.reflected_fraction)},
                           {"eta_analytic", round12(r.eta_analytic)}});
    }
    json values = json::array();
    for (double v : sweep.values)
        values.push_back(round12(v));
    return {{"generator", kGenerator}, {"parameter", sweep.parameter}, {"values", values}, {"records", records}};
}

json fit_json(const FitResult& fit, double target_eta, double target_echo_time,
              std::span<const FitParameter> free)
{
    const CombSummary s = summarize_comb(fit.config);
    json names = json::array();
    for (FitParameter p : free)
        names.push_back(to_string(p));
    return {{"generator", kGenerator},
            {"target_eta", round12(target_eta)},
            {"target_echo_time_us", round12(target_echo_time)},
            {"free", names},
            {"spacing_mhz", round12(s.delta_bar())},
            {"g_per_us", round12(s.g_bar())},
            {"gamma_per_us", round12(s.gamma_bar())},
            {"gamma_r_per_us", round12(fit.config.common.decay_rate)},
            {"kappa_per_us", round12(fit.config.common.kappa)},
            {"eta", round12(fit.eta)},
            {"echo_time_us", round12(fit.echo_time)},
            {"residual", round12(fit.residual)},
            {"evaluations", fit.evaluations},
            {"converged", fit.converged}};
}

json comparison_json(const MatchedOpenComparison& cmp, double open_multiplier)
{
    auto variant = [](const VariantSummary& v) {
        return json{{"kappa_per_us", round12(v.kappa)},
                    {"eta1", round12(v.eta1)},
                    {"eta2", round12(v.eta2)},
                    {"reflected_fraction", round12(v.reflected_fraction)}};
    };
    return {{"generator", kGenerator},
            {"open_multiplier", round12(open_multiplier)},
            {"kappa_analytic", round12(cmp.match.kappa_analytic)},
            {"matched", variant(cmp.matched)},
            {"open", variant(cmp.open)},
            {"assertions",
             {{"second_echo_suppressed", cmp.second_echo_suppressed},
              {"reflection_suppressed", cmp.reflection_suppressed}}}};
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out)
            throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace mrqm
