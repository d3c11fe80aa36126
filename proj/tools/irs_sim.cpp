// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#include <iostream>

#include "CLI11.hpp"
#include "irs/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Link-level simulator for IRS-aided wireless links"};
    app.require_subcommand(1);

    irs::CliInvocation inv;
    std::uint64_t seed = 0;
    std::size_t realizations = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"power-vs-distance", "BS transmit power versus BS-user distance d"},
        {"power-vs-n", "BS transmit power versus IRS size N, continuous and 1/2-bit phases"},
        {"interference-vs-n", "Residual interference versus IRS size N (single-antenna interferer)"},
        {"solve-once", "Optimize one channel realization and print the solution"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", inv.config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", inv.out_path, "CSV output path (default: stdout)");
        sub->add_option("--seed", seed, "override master_seed");
        sub->add_option("--realizations", realizations, "override n_realizations")->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", inv.quiet, "suppress per-sweep-point summary lines");
        sub->callback([&inv, name = std::string(name)] { inv.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : irs::exit_config_error;
    }

    for (auto* sub : app.get_subcommands()) {
        if (sub->count("--seed")) inv.seed_override = seed;
        if (sub->count("--realizations")) inv.realizations_override = realizations;
    }
    return irs::run(inv, std::cout, std::cerr);
}
