//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Presets.cc
//---------------------------------------------------------------------------//
#include "dcsim/Presets.hh"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dcsim/Config.hh"
#include "dcsim/Error.hh"
#include "dcsim/Units.hh"

using nlohmann::json;

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
// Fitted defaults
//---------------------------------------------------------------------------//
constexpr double siv_ppb = 30;
constexpr double nv_ppb = 0.03;
constexpr double p1_ppb = 9;
constexpr double waist = 0.5;  // [um]

//! Full SiV0 density under the SiV0 readout beam gives this rate [kcps]
constexpr double full_scale_kcps = 20;

double readout_brightness()
{
    double const n = units::ppb_to_density(siv_ppb, units::diamond_atom_density);
    return full_scale_kcps / (n * beam_peak_intensity(siv0_readout_beam()));
}

PhotoTransition photo(std::string from,
                      std::string to,
                      CarrierKind carrier,
                      double threshold,
                      std::vector<CrossSectionTable::Point> table)
{
    PhotoTransition p;
    p.from_state = std::move(from);
    p.to_state = std::move(to);
    p.emitted = carrier;
    p.threshold_energy = threshold;
    p.cross_section = CrossSectionTable(std::move(table));
    return p;
}

CaptureChannel
capture(std::string from, std::string to, CarrierKind carrier, double coef)
{
    return {std::move(from), std::move(to), carrier, coef};
}

//---------------------------------------------------------------------------//
// Document helpers
//---------------------------------------------------------------------------//
json beam_json(Beam const& b)
{
    return {{"wavelength", b.wavelength},
            {"power", b.power},
            {"waist", b.waist},
            {"center", {b.x, b.y}}};
}

Beam beam(double wavelength, double power)
{
    Beam b;
    b.wavelength = wavelength;
    b.power = power;
    b.waist = waist;
    return b;
}

json illuminate(Beam const& b, double duration)
{
    return {{"type", "illuminate"}, {"beam", beam_json(b)}, {"duration", duration}};
}

json readout(Beam const& b, std::string const& channel, std::string const& label)
{
    return {{"type", "readout"},
            {"beam", beam_json(b)},
            {"channel", channel},
            {"mode", "ideal"},
            {"label", label}};
}

json readout_region(Beam const& b,
                    std::string const& channel,
                    std::string const& label,
                    double half_width)
{
    json r = readout(b, channel, label);
    r["region"] = {-half_width, -half_width, half_width, half_width};
    return r;
}

json grid_json(GridSpec const& g)
{
    return {{"nx", g.nx},
            {"ny", g.ny},
            {"dx", g.dx},
            {"host_atom_density", g.host_atom_density},
            {"geometry_dimension", g.geometry_dimension}};
}

json base_document(std::string const& name,
                   ModelDescription const& model,
                   PresetInfo const& info)
{
    return {{"schema_version", config_schema_version},
            {"name", name},
            {"description", info.description},
            {"figure", info.figure},
            {"seed", 1},
            {"grid", grid_json(default_grid())},
            {"model", model_to_json(model)},
            {"engine", engine_to_json(EngineOptions{})},
            {"initial", json::array()},
            {"protocol", json::array()}};
}

//! n points from a to b with logarithmic spacing
std::vector<double> log_times(double a, double b, int n)
{
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return t;
}

//! Interleaved illumination and readout at cumulative illumination times
void append_series(json& protocol,
                   Beam const& pump,
                   std::vector<double> const& times,
                   json const& readout_step)
{
    double done = 0;
    for (double t : times)
    {
        protocol.push_back(illuminate(pump, t - done));
        json r = readout_step;
        char label[64];
        std::snprintf(label, sizeof(label), "t=%.6g", t);
        r["label"] = label;
        protocol.push_back(std::move(r));
        done = t;
    }
}

json siv0_disk(double radius, double fraction)
{
    return {{"species", "SiV"},
            {"state", "SiV0"},
            {"fraction", fraction},
            {"shape", "disk"},
            {"center", {0, 0}},
            {"radius", radius}};
}

PresetInfo const& info_of(std::string const& name)
{
    auto const& cat = preset_catalog();
    auto it = std::find_if(cat.begin(), cat.end(), [&name](auto const& p) {
        return p.name == name;
    });
    require(it != cat.end(),
            ErrorCode::config_error,
            "unknown preset '" + name + "'");
    return *it;
}

//---------------------------------------------------------------------------//
json torus_document(std::string const& name,
                    ModelDescription const& model,
                    double power,
                    double duration)
{
    json doc = base_document(name, model, info_of(name));
    auto& p = doc["protocol"];
    p.push_back(illuminate(beam(532, power), duration));
    p.push_back(readout(siv0_readout_beam(), "SiV0", "SiV0"));
    p.push_back(readout(sivm_readout_beam(), "SiV-", "SiV-"));
    return doc;
}

json scaling_document(std::string const& name, double power)
{
    json doc = base_document(name, default_model(), info_of(name));
    append_series(doc["protocol"],
                  beam(532, power),
                  log_times(0.3, 199.5, 16),
                  readout(siv0_readout_beam(), "SiV0", ""));
    return doc;
}

json ionization_document(std::string const& name,
                         ModelDescription const& model,
                         double wavelength,
                         double power,
                         double t_first,
                         double t_last)
{
    json doc = base_document(name, model, info_of(name));
    doc["initial"].push_back(siv0_disk(4.0, 0.4));
    append_series(doc["protocol"],
                  beam(wavelength, power),
                  log_times(t_first, t_last, 24),
                  readout_region(siv0_readout_beam(), "SiV0", "", 0.25));
    return doc;
}

json raster_document(std::string const& name)
{
    json doc = base_document(name, default_model(), info_of(name));
    json const region = {-2.0, -2.0, 2.0, 2.0};
    auto scan = [&region](double power) {
        return json{{"type", "raster"},
                    {"region", region},
                    {"step", 0.2},
                    {"dwell", 1e-3},
                    {"passes", 10},
                    {"beam", beam_json(beam(532, power))}};
    };
    auto& p = doc["protocol"];
    p.push_back(scan(1.1));
    p.push_back(readout(siv0_readout_beam(), "SiV0", "after_high"));
    p.push_back(scan(0.23));
    p.push_back(readout(siv0_readout_beam(), "SiV0", "after_low"));
    return doc;
}

json wavelength_document(std::string const& name)
{
    json doc = base_document(name, default_model(), info_of(name));
    auto& p = doc["protocol"];
    for (double wl : {637.0, 595.0, 532.0})
    {
        char label[32];
        std::snprintf(label, sizeof(label), "after_%g", wl);
        p.push_back(illuminate(beam(wl, 0.34), 60));
        p.push_back(readout(siv0_readout_beam(), "SiV0", label));
    }
    return doc;
}

json telegraph_document(std::string const& name)
{
    PresetInfo const& info = info_of(name);
    return {{"schema_version", config_schema_version},
            {"name", name},
            {"description", info.description},
            {"figure", info.figure},
            {"seed", 1},
            {"telegraph",
             {{"k_bd", 2.0},
              {"k_db", 1.0},
              {"bright_rate", 8.0},
              {"dark_rate", 0.5},
              {"modifier_bd", 0.5},
              {"modifier_db", 3.0},
              {"start_bright", true},
              {"duration", 200.0},
              {"bin", 0.05},
              {"histogram_bin", 1.0},
              {"remote", json::array()}}}};
}

}  // namespace

//---------------------------------------------------------------------------//
ModelDescription default_model()
{
    double const b = readout_brightness();
    constexpr auto e = CarrierKind::electron;
    constexpr auto h = CarrierKind::hole;

    SpeciesSpec siv;
    siv.name = "SiV";
    siv.total_concentration = siv_ppb;
    siv.states = {{"SiV-", -1, {{"SiV-", b}}}, {"SiV0", 0, {{"SiV0", b}}}};
    siv.initial_state = "SiV-";
    // Hole emission from SiV0 is stronger at visible than at red photon
    // energies
    siv.photo_transitions
        = {photo("SiV0", "SiV-", h, 1.5, {{400, 7e-22}, {580, 1.5e-24}})};
    siv.captures = {capture("SiV-", "SiV0", h, 1e-3),
                    capture("SiV0", "SiV-", e, 3e-4)};

    SpeciesSpec nv;
    nv.name = "NV";
    nv.total_concentration = nv_ppb;
    nv.states = {{"NV-", -1, {}}, {"NV0", 0, {}}};
    nv.initial_state = "NV-";
    nv.photo_transitions = {photo("NV-", "NV0", e, 1.94, {{400, 3e-20}}),
                            photo("NV0", "NV-", h, 2.156, {{400, 3e-20}})};
    nv.captures
        = {capture("NV-", "NV0", h, 2e-3), capture("NV0", "NV-", e, 2e-3)};

    SpeciesSpec p1;
    p1.name = "P1";
    p1.total_concentration = p1_ppb;
    p1.states = {{"Ns0", 0, {}}, {"Ns+", 1, {}}};
    p1.initial_state = "Ns0";
    p1.photo_transitions
        = {photo("Ns0", "Ns+", e, 1.7, {{400, 1e-21}, {580, 1e-22}})};

    ModelDescription m;
    m.species = {siv, nv, p1};
    m.transport.diffusion_electron = 2.0;
    m.transport.diffusion_hole = 2.0;
    m.transport.permittivity = 5.7;
    return m;
}

ModelDescription double_capture_model()
{
    ModelDescription m = default_model();
    auto& siv = m.species.front();
    siv.states.insert(siv.states.begin(), ChargeStateSpec{"SiV2-", -2, {}});
    siv.initial_state = "SiV2-";
    siv.captures.push_back(
        capture("SiV2-", "SiV-", CarrierKind::hole, siv.captures[0].coefficient));
    return m;
}

ModelDescription trap_model()
{
    ModelDescription m = default_model();
    SpeciesSpec trap;
    trap.name = "Trap";
    trap.total_concentration = 3;
    trap.states = {{"T0", 0, {}}, {"T+", 1, {}}};
    trap.is_trap = true;
    trap.release_lifetime = 30;
    m.species.push_back(trap);

    TunnelingChannel t;
    t.donor_species = "SiV";
    t.from_state = "SiV0";
    t.to_state = "SiV-";
    t.trap_species = "Trap";
    t.coefficient = 2e-4;
    t.saturation_intensity = 0.2;
    t.band_min = 700;
    t.band_max = 950;
    m.tunneling.push_back(t);
    return m;
}

GridSpec default_grid()
{
    GridSpec g;
    g.nx = 128;
    g.ny = 128;
    g.dx = 0.5;
    return g;
}

Beam siv0_readout_beam()
{
    return beam(857, 0.29);
}

Beam sivm_readout_beam()
{
    return beam(532, 0.29);
}

//---------------------------------------------------------------------------//
std::vector<PresetInfo> const& preset_catalog()
{
    static std::vector<PresetInfo> const catalog = {
        {"fig1_torus",
         "532 nm, 2.58 mW for 60 s at a fixed spot; SiV0 and SiV- images",
         "Fig. 1(b)"},
        {"fig2_raster",
         "10 raster passes at 1.1 mW then 10 at 0.23 mW over a 4 um square",
         "Fig. 2(a,b)"},
        {"fig3_snapshots",
         "SiV0 snapshots over 0.3 s to 199.5 s at 1.57 mW, 857 nm readout",
         "Fig. 3"},
        {"fig4_ionization_857",
         "Decay of a prepared SiV0 patch under 857 nm with shallow traps",
         "Fig. 4(a), Fig. S5"},
        {"fig4_ionization_637",
         "Decay of a prepared SiV0 patch under 637 nm",
         "Fig. 4(b)"},
        {"fig4_ionization_532",
         "Decay of a prepared SiV0 patch under 532 nm",
         "Fig. 4(c)"},
        {"fig5_wavelength",
         "637, 595 and 532 nm at 0.34 mW for 60 s each on the same spot",
         "Fig. 5"},
        {"figS3_scaling",
         "Torus growth at 0.95 mW, 0.3 s to 199.5 s log spaced",
         "Fig. S3"},
        {"figS4_lowpower",
         "Torus growth at 0.24 mW, 0.3 s to 199.5 s log spaced",
         "Fig. S4"},
        {"figS11_double_capture",
         "SiV2- background: SiV2- -> SiV- -> SiV0 by sequential hole capture",
         "Fig. S11"},
        {"figS12_telegraph",
         "Single-center telegraph traces with and without remote 532 nm",
         "Fig. S12, Fig. S13"},
    };
    return catalog;
}

bool is_preset(std::string const& name)
{
    auto const& cat = preset_catalog();
    return std::any_of(cat.begin(), cat.end(), [&name](auto const& p) {
        return p.name == name;
    });
}

json preset_document(std::string const& name)
{
    if (name == "fig1_torus")
        return torus_document(name, default_model(), 2.58, 60);
    if (name == "fig2_raster")
        return raster_document(name);
    if (name == "fig3_snapshots")
    {
        json doc = base_document(name, default_model(), info_of(name));
        append_series(doc["protocol"],
                      beam(532, 1.57),
                      log_times(0.3, 199.5, 8),
                      readout(siv0_readout_beam(), "SiV0", ""));
        return doc;
    }
    if (name == "fig4_ionization_857")
        return ionization_document(name, trap_model(), 857, 1.39, 0.1, 300);
    if (name == "fig4_ionization_637")
        return ionization_document(name, default_model(), 637, 1.0, 0.01, 30);
    if (name == "fig4_ionization_532")
        return ionization_document(name, default_model(), 532, 1.0, 1e-4, 0.5);
    if (name == "fig5_wavelength")
        return wavelength_document(name);
    if (name == "figS3_scaling")
        return scaling_document(name, 0.95);
    if (name == "figS4_lowpower")
        return scaling_document(name, 0.24);
    if (name == "figS11_double_capture")
        return torus_document(name, double_capture_model(), 1.0, 60);
    if (name == "figS12_telegraph")
        return telegraph_document(name);
    info_of(name);  // throws for unknown names
    return {};
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
