//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file IO.cc
//---------------------------------------------------------------------------//
#include "dcsim/IO.hh"

#include <bit>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dcsim/Config.hh"
#include "dcsim/Error.hh"

using nlohmann::json;

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
constexpr char magic[4] = {'D', 'C', 'S', '1'};
constexpr std::size_t header_bytes = 16;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b)
        out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_f64(std::vector<unsigned char>& out, double v)
{
    auto const bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

std::uint32_t get_u32(unsigned char const* p)
{
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
        v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
    return v;
}

double get_f64(unsigned char const* p)
{
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
        v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(v);
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json beam_to_json(Beam const& b)
{
    return {{"wavelength", b.wavelength},
            {"power", b.power},
            {"waist", b.waist},
            {"center", {b.x, b.y}}};
}

template<class T>
T get_field(json const& j, char const* key, std::string const& where)
{
    auto it = j.find(key);
    require(it != j.end(),
            ErrorCode::config_error,
            where + ": missing field '" + key + "'");
    try
    {
        return it->get<T>();
    }
    catch (json::exception const&)
    {
        throw Error(ErrorCode::config_error,
                    where + ": field '" + key + "' has the wrong type");
    }
}

}  // namespace

//---------------------------------------------------------------------------//
// GRID DUMPS
//---------------------------------------------------------------------------//
std::vector<unsigned char> encode_grid_dump(GridDump const& dump)
{
    std::size_t const n = static_cast<std::size_t>(dump.nx) * dump.ny;
    std::vector<unsigned char> out;
    out.reserve(header_bytes + 8 * n * dump.planes.size());
    out.insert(out.end(), std::begin(magic), std::end(magic));
    put_u32(out, dump.nx);
    put_u32(out, dump.ny);
    put_u32(out, static_cast<std::uint32_t>(dump.planes.size()));
    for (auto const& plane : dump.planes)
    {
        require(plane.size() == n,
                ErrorCode::invalid_value,
                "grid dump plane has " + std::to_string(plane.size())
                    + " values, expected " + std::to_string(n));
        for (double v : plane)
            put_f64(out, v);
    }
    return out;
}

GridDump decode_grid_dump(std::span<unsigned char const> bytes)
{
    require(bytes.size() >= header_bytes
                && std::memcmp(bytes.data(), magic, 4) == 0,
            ErrorCode::io_error,
            "not a DCS1 grid dump");
    GridDump dump;
    dump.nx = get_u32(bytes.data() + 4);
    dump.ny = get_u32(bytes.data() + 8);
    std::uint32_t const count = get_u32(bytes.data() + 12);
    std::size_t const n = static_cast<std::size_t>(dump.nx) * dump.ny;
    require(bytes.size() == header_bytes + 8 * n * count,
            ErrorCode::io_error,
            "grid dump size does not match its header");
    unsigned char const* p = bytes.data() + header_bytes;
    dump.planes.assign(count, std::vector<double>(n));
    for (auto& plane : dump.planes)
    {
        for (double& v : plane)
        {
            v = get_f64(p);
            p += 8;
        }
    }
    return dump;
}

void write_grid_dump(std::string const& path, GridDump const& dump)
{
    auto const bytes = encode_grid_dump(dump);
    std::ofstream os(path, std::ios::binary);
    os.write(reinterpret_cast<char const*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(os),
            ErrorCode::io_error,
            "cannot write '" + path + "'");
}

GridDump read_grid_dump(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is),
            ErrorCode::io_error,
            "cannot read '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                     std::istreambuf_iterator<char>());
    try
    {
        return decode_grid_dump(bytes);
    }
    catch (Error const& e)
    {
        throw Error(ErrorCode::io_error, path + ": " + e.what());
    }
}

GridDump state_dump(SimulationState const& state)
{
    GridDump dump;
    dump.nx = static_cast<std::uint32_t>(state.grid.nx);
    dump.ny = static_cast<std::uint32_t>(state.grid.ny);
    for (std::size_t s = 0; s < state.num_slots; ++s)
        dump.planes.push_back(state.slot_field(s).data());
    dump.planes.push_back(state.electrons.data());
    dump.planes.push_back(state.holes.data());
    if (state.potential.size() == state.grid.size())
        dump.planes.push_back(state.potential.data());
    else
        dump.planes.emplace_back(state.grid.size(), 0.0);
    return dump;
}

std::vector<std::string> state_plane_names(ModelRegistry const& reg)
{
    std::vector<std::string> names;
    for (std::size_t s = 0; s < reg.num_slots(); ++s)
        names.push_back(reg.slot(s).species_name + ":" + reg.slot(s).label);
    names.insert(names.end(), {"electrons", "holes", "potential"});
    return names;
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//
std::vector<double> const& CsvTable::column(std::string const& name) const
{
    for (std::size_t c = 0; c < header.size(); ++c)
    {
        if (header[c] == name)
            return columns[c];
    }
    throw Error(ErrorCode::io_error, "CSV has no column '" + name + "'");
}

std::string format_csv(CsvTable const& table)
{
    require(table.header.size() == table.columns.size(),
            ErrorCode::invalid_value,
            "CSV header and column counts differ");
    std::ostringstream os;
    for (std::size_t c = 0; c < table.header.size(); ++c)
        os << (c ? "," : "") << table.header[c];
    os << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r)
    {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
        {
            require(table.columns[c].size() == table.rows(),
                    ErrorCode::invalid_value,
                    "CSV columns have different lengths");
            os << (c ? "," : "") << format_number(table.columns[c][r]);
        }
        os << '\n';
    }
    return os.str();
}

CsvTable parse_csv(std::string const& text, std::string const& source)
{
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    auto split = [](std::string const& s) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true)
        {
            auto pos = s.find(',', start);
            cells.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos)
                break;
            start = pos + 1;
        }
        return cells;
    };
    while (std::getline(is, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto cells = split(line);
        if (table.header.empty())
        {
            table.header = std::move(cells);
            table.columns.resize(table.header.size());
            continue;
        }
        require(cells.size() == table.header.size(),
                ErrorCode::io_error,
                source + ":" + std::to_string(lineno) + ": expected "
                    + std::to_string(table.header.size()) + " fields");
        for (std::size_t c = 0; c < cells.size(); ++c)
        {
            char* end = nullptr;
            errno = 0;
            double v = std::strtod(cells[c].c_str(), &end);
            require(end && *end == '\0' && !cells[c].empty(),
                    ErrorCode::io_error,
                    source + ":" + std::to_string(lineno)
                        + ": not a number: '" + cells[c] + "'");
            table.columns[c].push_back(v);
        }
    }
    return table;
}

void write_csv(std::string const& path, CsvTable const& table)
{
    write_text_file(path, format_csv(table));
}

CsvTable read_csv(std::string const& path)
{
    return parse_csv(read_text_file(path), path);
}

//---------------------------------------------------------------------------//
std::string read_text_file(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is),
            ErrorCode::io_error,
            "cannot read '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write_text_file(std::string const& path, std::string const& text)
{
    std::ofstream os(path, std::ios::binary);
    os << text;
    require(static_cast<bool>(os),
            ErrorCode::io_error,
            "cannot write '" + path + "'");
}

//---------------------------------------------------------------------------//
// MANIFEST
//---------------------------------------------------------------------------//
json manifest_to_json(RunManifest const& m)
{
    json arts = json::array();
    for (auto const& a : m.artifacts)
    {
        json j = {{"path", a.path},
                  {"kind", a.kind},
                  {"channel", a.channel},
                  {"label", a.label},
                  {"time", a.time}};
        if (!a.extra.empty())
            j["extra"] = a.extra;
        arts.push_back(std::move(j));
    }
    return {{"schema_version", m.schema_version},
            {"engine_version", m.engine_version},
            {"name", m.name},
            {"config_hash", m.config_hash},
            {"seed", m.seed},
            {"overrides", m.overrides},
            {"start_time", m.start_time},
            {"end_time", m.end_time},
            {"config", m.config},
            {"artifacts", std::move(arts)}};
}

RunManifest manifest_from_json(json const& doc)
{
    std::string const where = "manifest";
    require(doc.is_object(), ErrorCode::config_error, "manifest is not an object");
    RunManifest m;
    m.schema_version = get_field<int>(doc, "schema_version", where);
    require(m.schema_version == manifest_schema_version,
            ErrorCode::config_error,
            "unsupported manifest schema_version "
                + std::to_string(m.schema_version));
    m.engine_version = get_field<std::string>(doc, "engine_version", where);
    m.name = get_field<std::string>(doc, "name", where);
    m.config_hash = get_field<std::string>(doc, "config_hash", where);
    m.seed = get_field<std::uint64_t>(doc, "seed", where);
    m.overrides = get_field<std::vector<std::string>>(doc, "overrides", where);
    m.start_time = get_field<std::string>(doc, "start_time", where);
    m.end_time = get_field<std::string>(doc, "end_time", where);
    m.config = doc.value("config", json::object());
    auto const arts = get_field<json>(doc, "artifacts", where);
    require(arts.is_array(), ErrorCode::config_error, "artifacts is not a list");
    for (std::size_t i = 0; i < arts.size(); ++i)
    {
        std::string const w = "manifest.artifacts." + std::to_string(i);
        Artifact a;
        a.path = get_field<std::string>(arts[i], "path", w);
        a.kind = get_field<std::string>(arts[i], "kind", w);
        a.channel = arts[i].value("channel", "");
        a.label = arts[i].value("label", "");
        a.time = arts[i].value("time", 0.0);
        a.extra = arts[i].value("extra", json::object());
        m.artifacts.push_back(std::move(a));
    }
    return m;
}

void write_manifest(std::string const& path, RunManifest const& manifest)
{
    write_text_file(path, manifest_to_json(manifest).dump(2) + "\n");
}

RunManifest read_manifest(std::string const& path)
{
    return manifest_from_json(load_json_file(path));
}

std::string utc_timestamp()
{
    std::time_t const now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

//---------------------------------------------------------------------------//
// IMAGES
//---------------------------------------------------------------------------//
Artifact image_artifact(ReadoutImage const& image, std::string const& path)
{
    Artifact a;
    a.path = path;
    a.kind = "image";
    a.channel = image.channel;
    a.label = image.label;
    a.time = image.time;
    a.extra = {{"x0", image.x0},
               {"y0", image.y0},
               {"pitch", image.pitch},
               {"mode",
                image.mode == ReadoutMode::ideal ? "ideal" : "perturbative"},
               {"beam", beam_to_json(image.beam)}};
    return a;
}

ReadoutImage load_image(GridDump const& dump, Artifact const& artifact)
{
    require(dump.planes.size() == 1,
            ErrorCode::io_error,
            artifact.path + ": image dumps hold exactly one plane");
    std::string const where = "artifact '" + artifact.path + "'";
    ReadoutImage img;
    img.channel = artifact.channel;
    img.label = artifact.label;
    img.time = artifact.time;
    img.nx = static_cast<int>(dump.nx);
    img.ny = static_cast<int>(dump.ny);
    img.x0 = get_field<double>(artifact.extra, "x0", where);
    img.y0 = get_field<double>(artifact.extra, "y0", where);
    img.pitch = get_field<double>(artifact.extra, "pitch", where);
    img.mode = artifact.extra.value("mode", "ideal") == "ideal"
                   ? ReadoutMode::ideal
                   : ReadoutMode::perturbative;
    if (auto b = artifact.extra.find("beam"); b != artifact.extra.end())
    {
        img.beam.wavelength = b->value("wavelength", img.beam.wavelength);
        img.beam.power = b->value("power", img.beam.power);
        img.beam.waist = b->value("waist", img.beam.waist);
    }
    img.counts = dump.planes.front();
    return img;
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
