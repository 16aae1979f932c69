//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim.cc
//! Command-line front end: run, analyze, presets.
//---------------------------------------------------------------------------//
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "dcsim/Cli.hh"

using namespace dcsim;

namespace
{
//---------------------------------------------------------------------------//
int report(ErrorCode code, std::string const& message)
{
    std::cerr << error_report(code, message).dump() << std::endl;
    return static_cast<int>(exit_code_for(code));
}

//! Run a command body, converting exceptions to an error report
template<class F>
int guarded(F&& f)
{
    try
    {
        f();
        return 0;
    }
    catch (Error const& e)
    {
        return report(e.code(), e.what());
    }
    catch (nlohmann::json::exception const& e)
    {
        return report(ErrorCode::config_error, e.what());
    }
    catch (std::exception const& e)
    {
        std::cerr << nlohmann::json{{"error",
                                     {{"code", "InternalError"},
                                      {"category", "engine"},
                                      {"exit_code", 3},
                                      {"message", e.what()}}}}
                         .dump()
                  << std::endl;
        return static_cast<int>(ExitCode::engine);
    }
}

std::string run_one(std::string const& input, RunOptions const& opts)
{
    RunManifest const m = cmd_run(input, opts);
    return opts.out_dir + "/manifest.json (" + std::to_string(m.artifacts.size())
           + " artifacts)";
}

//! Output directory of one input when several are run together
std::string sub_dir(std::string const& base, std::string const& input)
{
    return (std::filesystem::path(base)
            / std::filesystem::path(input).stem())
        .string();
}

//! Fan inputs across at most \c jobs child processes; worst exit code wins
int run_many(std::vector<std::string> const& inputs,
             RunOptions const& opts,
             int jobs)
{
    int worst = 0;
    std::size_t next = 0;
    int running = 0;
    auto reap = [&] {
        int status = 0;
        if (::wait(&status) > 0)
        {
            --running;
            int const code = WIFEXITED(status) ? WEXITSTATUS(status) : 3;
            worst = std::max(worst, code);
        }
    };
    while (next < inputs.size())
    {
        if (running >= jobs)
        {
            reap();
            continue;
        }
        RunOptions child = opts;
        child.out_dir = sub_dir(opts.out_dir, inputs[next]);
        std::string const input = inputs[next++];
        std::cout.flush();
        pid_t const pid = ::fork();
        if (pid == 0)
        {
            int const code = guarded([&] {
                std::cout << input << ": " << run_one(input, child) << std::endl;
            });
            std::cout.flush();
            std::_Exit(code);
        }
        if (pid < 0)
        {
            worst = std::max(
                worst, report(ErrorCode::io_error, "fork failed for " + input));
            continue;
        }
        ++running;
    }
    while (running > 0)
        reap();
    return worst;
}

}  // namespace

//---------------------------------------------------------------------------//
int main(int argc, char** argv)
{
    CLI::App app{"Photo-induced carrier transport and charge-state simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(DCSIM_VERSION));

    std::optional<std::uint64_t> seed;
    int jobs = 1;
    app.add_option("--seed", seed, "Override the configuration seed");
    app.add_option("--jobs", jobs, "Concurrent processes for several inputs")
        ->check(CLI::PositiveNumber);

    RunOptions run_opts;
    std::vector<std::string> inputs;
    auto* run = app.add_subcommand("run", "Run configurations or presets");
    run->add_option("config", inputs, "Configuration files or preset names")
        ->required();
    run->add_option("--out", run_opts.out_dir, "Output directory");
    run->add_option("--override", run_opts.overrides, "Dotted key=value")
        ->allow_extra_args(false);
    run->add_option("--seed", seed, "Override the configuration seed");
    run->add_option("--jobs", jobs, "Concurrent processes for several inputs")
        ->check(CLI::PositiveNumber);

    std::string manifest_path;
    std::string spec;
    std::optional<std::string> analyze_out;
    auto* analyze
        = app.add_subcommand("analyze", "Analyze a stored run from its manifest");
    analyze->add_option("manifest", manifest_path, "manifest.json of a run")
        ->required();
    analyze->add_option("spec", spec, "Analysis request file or inline JSON")
        ->required();
    analyze->add_option("--out", analyze_out, "Report directory");

    auto* presets = app.add_subcommand("presets", "List bundled scenarios");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        return report(ErrorCode::config_error, e.what());
    }

    if (*run)
    {
        run_opts.seed = seed;
        if (inputs.size() == 1)
        {
            return guarded([&] {
                std::cout << run_one(inputs.front(), run_opts) << std::endl;
            });
        }
        return run_many(inputs, run_opts, jobs);
    }
    if (*analyze)
    {
        return guarded([&] {
            auto const out = cmd_analyze(manifest_path, spec, analyze_out);
            std::cout << out["reports"].size() << " reports written" << std::endl;
        });
    }
    if (*presets)
    {
        for (auto const& p : cmd_presets())
        {
            std::printf("%-24s %-22s %s\n",
                        p.name.c_str(),
                        p.figure.c_str(),
                        p.description.c_str());
        }
    }
    return 0;
}
