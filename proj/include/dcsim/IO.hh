//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/IO.hh
//! Artifact file formats: grid dumps, CSV tables, and the run manifest.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "Protocol.hh"
#include "State.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
// GRID DUMPS
//---------------------------------------------------------------------------//
/*!
 * Planes of a binary grid dump.
 *
 * On disk: magic "DCS1", u32 nx, u32 ny, u32 plane count, then each plane
 * as nx * ny little-endian IEEE-754 doubles, x fastest.
 */
struct GridDump
{
    std::uint32_t nx{0};
    std::uint32_t ny{0};
    std::vector<std::vector<double>> planes;
};

//! Serialize a dump; \throws Error(InvalidValue) for mis-sized planes
std::vector<unsigned char> encode_grid_dump(GridDump const& dump);

//! \throws Error(IOError) for truncated or foreign data
GridDump decode_grid_dump(std::span<unsigned char const> bytes);

void write_grid_dump(std::string const& path, GridDump const& dump);
GridDump read_grid_dump(std::string const& path);

//! One plane per slot, then electrons, holes, and potential
GridDump state_dump(SimulationState const& state);
std::vector<std::string> state_plane_names(ModelRegistry const& reg);

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//
/*!
 * Column table written as CSV with a header row.
 *
 * Numbers are printed with 17 significant digits so that values round-trip.
 */
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const
    {
        return columns.empty() ? 0 : columns.front().size();
    }
    //! \throws Error(IOError) if the column is absent
    std::vector<double> const& column(std::string const& name) const;
};

std::string format_csv(CsvTable const& table);
CsvTable parse_csv(std::string const& text, std::string const& source);

void write_csv(std::string const& path, CsvTable const& table);
CsvTable read_csv(std::string const& path);

//---------------------------------------------------------------------------//
// TEXT FILES
//---------------------------------------------------------------------------//
//! \throws Error(IOError)
std::string read_text_file(std::string const& path);
//! \throws Error(IOError)
void write_text_file(std::string const& path, std::string const& text);

//---------------------------------------------------------------------------//
// MANIFEST
//---------------------------------------------------------------------------//
inline constexpr int manifest_schema_version = 1;

/*!
 * One emitted file, path relative to the manifest directory.
 *
 * Image artifacts carry their pixel geometry so they can be reloaded.
 */
struct Artifact
{
    std::string path;
    std::string kind;  //!< image, snapshot, series, trace, histogram
    std::string channel;
    std::string label;
    double time{0};  //!< protocol time [s]
    nlohmann::json extra = nlohmann::json::object();
};

struct RunManifest
{
    int schema_version{manifest_schema_version};
    std::string engine_version;
    std::string name;
    std::string config_hash;
    std::uint64_t seed{0};
    std::vector<std::string> overrides;
    nlohmann::json config;  //!< resolved configuration document
    std::string start_time;  //!< UTC, ISO 8601
    std::string end_time;
    std::vector<Artifact> artifacts;
};

nlohmann::json manifest_to_json(RunManifest const& manifest);
//! \throws Error(ConfigError) for malformed manifests
RunManifest manifest_from_json(nlohmann::json const& doc);

void write_manifest(std::string const& path, RunManifest const& manifest);
RunManifest read_manifest(std::string const& path);

//! Current UTC time, ISO 8601 with second resolution
std::string utc_timestamp();

//---------------------------------------------------------------------------//
// IMAGES
//---------------------------------------------------------------------------//
//! Single-plane dump plus geometry for the manifest entry
Artifact image_artifact(ReadoutImage const& image, std::string const& path);

//! Reassemble an image from its dump and manifest entry
ReadoutImage load_image(GridDump const& dump, Artifact const& artifact);

//---------------------------------------------------------------------------//
}  // namespace dcsim
