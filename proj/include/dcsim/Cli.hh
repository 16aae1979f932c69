//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Cli.hh
//! Command implementations behind the dcsim executable.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "Error.hh"
#include "IO.hh"
#include "Presets.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
//! Process exit codes
enum class ExitCode : int
{
    success = 0,
    config = 2,
    engine = 3,
    analysis = 4,
};

//! Exit code category of an error
ExitCode exit_code_for(ErrorCode code);

//! Machine-readable error report: {"error": {"code", "category", "message"}}
nlohmann::json error_report(ErrorCode code, std::string const& message);

//---------------------------------------------------------------------------//
struct RunOptions
{
    std::string out_dir{"dcsim_out"};
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
};

/*!
 * Resolve a configuration file path or preset name into a document.
 *
 * Existing files take precedence over preset names.
 *
 * \throws Error(ConfigError) if neither exists.
 */
nlohmann::json resolve_config(std::string const& config_or_preset);

/*!
 * Run one configuration and write its artifacts and "manifest.json".
 *
 * Readout images and snapshots become DCS1 dumps; each readout channel also
 * gets a "series_<channel>.csv" time series; telegraph studies write trace,
 * count, and histogram CSVs.
 */
RunManifest cmd_run(std::string const& config_or_preset,
                    RunOptions const& options);

/*!
 * Run analyses described by a JSON request on a stored run.
 *
 * The request is a file path or inline JSON text with an "analyses" list.
 * Results go to "reports.json" (plus profile CSVs) in \c out_dir, which
 * defaults to the manifest directory. Output is a pure function of the
 * stored artifacts and the analysis request.
 *
 * \throws Error(MissingArtifact) naming the first listed file that is absent
 *   or the channel that no artifact provides.
 */
nlohmann::json cmd_analyze(std::string const& manifest_path,
                           std::string const& spec,
                           std::optional<std::string> out_dir = {});

//! Bundled scenario listing, one entry per preset
std::vector<PresetInfo> const& cmd_presets();

//---------------------------------------------------------------------------//
}  // namespace dcsim
