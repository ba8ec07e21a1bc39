// mrqm: scenario runner for the multiresonator echo-memory toolkit.
//
//   mrqm <command> --scenario <file> [--out <dir>] [--threads <n>]
//
// Commands: spectrum, simulate, sweep, match, fit, compare.
// Exit status: 0 success, 1 i/o failure, 2 invalid scenario, 3 numerical error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mrqm/scenario.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Multiresonator photon-echo memory simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    unsigned threads = 1;

    struct Entry
    {
        mrqm::Command command;
        const char* help;
    };
    const Entry entries[] = {
        {mrqm::Command::spectrum, "Sample the reflection spectrum r(omega)"},
        {mrqm::Command::simulate, "Simulate one pulse and score the echoes"},
        {mrqm::Command::sweep, "Sweep the comb spacing"},
        {mrqm::Command::match, "Optimise the waveguide coupling kappa"},
        {mrqm::Command::fit, "Fit comb parameters to a target efficiency"},
        {mrqm::Command::compare, "Compare matched and open (large kappa) couplings"},
    };

    std::optional<mrqm::Command> chosen;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(mrqm::to_string(e.command), e.help);
        sub->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
        sub->add_option("--threads", threads, "Worker threads for sweeps and scans")->check(CLI::Range(1u, 1024u));
        sub->callback([&chosen, c = e.command] { chosen = c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    mrqm::RunOptions options;
    options.threads = threads;
    if (!out_dir.empty())
        options.out_dir = out_dir;
    return mrqm::run_scenario(*chosen, scenario, options, std::cout, std::cerr);
}
