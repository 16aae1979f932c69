//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Config.hh
//! JSON run configuration: parsing, overrides, and hashing.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "Model.hh"
#include "Protocol.hh"
#include "State.hh"
#include "Stochastic.hh"
#include "Transport.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
//! Current configuration schema version
inline constexpr int config_schema_version = 1;

/*!
 * Fully parsed run configuration.
 */
struct RunConfig
{
    std::string name;
    std::uint64_t seed{1};
    GridSpec grid;
    ModelDescription model;
    EngineOptions engine;
    std::vector<Preparation> preparations;
    std::vector<ScheduleStep> protocol;
    std::optional<TelegraphStudy> telegraph;
    //! Resolved document (after overrides) the run was built from
    nlohmann::json document;
};

//---------------------------------------------------------------------------//
/*!
 * Read and parse a JSON file.
 *
 * \throws Error(ConfigError) with the line and column of syntax errors, or
 *   Error(IOError) if the file cannot be read.
 */
nlohmann::json load_json_file(std::string const& path);

//! Parse JSON text, reporting syntax errors with line and column
nlohmann::json parse_json_text(std::string const& text,
                               std::string const& source);

/*!
 * Apply a "dotted.path=value" override in place.
 *
 * The value is parsed as JSON when possible and taken as a string otherwise.
 * Numeric path components index arrays.
 *
 * \throws Error(ConfigError) for malformed overrides or missing parents.
 */
void apply_override(nlohmann::json& doc, std::string const& assignment);

/*!
 * Build a run configuration from a document.
 *
 * \throws Error(ConfigError) naming the offending field.
 */
RunConfig parse_run_config(nlohmann::json const& doc);

//! Model section only
ModelDescription parse_model(nlohmann::json const& doc);

//! Serialize a model description (inverse of parse_model)
nlohmann::json model_to_json(ModelDescription const& model);

//! Serialize engine options in the "engine" section layout
nlohmann::json engine_to_json(EngineOptions const& options);

/*!
 * Stable hash of a document's canonical serialization.
 *
 * Keys are sorted and whitespace is normalized, so formatting-only edits to
 * the configuration text do not change the hash. 16 hex digits.
 */
std::string config_hash(nlohmann::json const& doc);

//---------------------------------------------------------------------------//
}  // namespace dcsim
