//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Protocol.cc
//---------------------------------------------------------------------------//
#include "dcsim/Protocol.hh"

#include <algorithm>
#include <cmath>

#include "dcsim/Error.hh"

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
constexpr double edge_slack = 1e-9;

template<class... Ts>
struct Overload : Ts...
{
    using Ts::operator()...;
};
template<class... Ts>
Overload(Ts...) -> Overload<Ts...>;

void check_region(Region const& r, GridSpec const& grid, char const* what)
{
    double const hw = 0.5 * grid.width() + edge_slack;
    double const hh = 0.5 * grid.height() + edge_slack;
    require(r.x0 <= r.x1 && r.y0 <= r.y1,
            ErrorCode::step_out_of_bounds,
            std::string(what) + " region has inverted corners");
    require(r.x0 >= -hw && r.x1 <= hw && r.y0 >= -hh && r.y1 <= hh,
            ErrorCode::step_out_of_bounds,
            std::string(what) + " region exceeds the grid (half-width "
                + std::to_string(0.5 * grid.width()) + " um)");
}

void check_duration(double t, char const* what)
{
    require(std::isfinite(t) && t >= 0,
            ErrorCode::invalid_value,
            std::string(what) + " duration must be non-negative");
}

//! Index range of cell centers inside [lo, hi]
std::pair<int, int> cell_range(double lo, double hi, double dx, int n)
{
    int const first = std::max(
        0, static_cast<int>(std::ceil((lo - edge_slack) / dx + 0.5 * n - 0.5)));
    int const last = std::min(
        n - 1,
        static_cast<int>(std::floor((hi + edge_slack) / dx + 0.5 * n - 0.5)));
    return {first, last};
}

std::size_t num_pixels(Readout const& r, GridSpec const& grid)
{
    Region const reg = r.region.value_or(grid_region(grid));
    auto [i0, i1] = cell_range(reg.x0, reg.x1, grid.dx, grid.nx);
    auto [j0, j1] = cell_range(reg.y0, reg.y1, grid.dx, grid.ny);
    if (i1 < i0 || j1 < j0)
        return 0;
    return static_cast<std::size_t>(i1 - i0 + 1) * (j1 - j0 + 1);
}

//! Image frame with pixel geometry filled in and counts zeroed
ReadoutImage make_frame(GridSpec const& grid,
                        Readout const& r,
                        int& i0,
                        int& j0)
{
    Region const reg = r.region.value_or(grid_region(grid));
    auto [a0, a1] = cell_range(reg.x0, reg.x1, grid.dx, grid.nx);
    auto [b0, b1] = cell_range(reg.y0, reg.y1, grid.dx, grid.ny);
    require(a1 >= a0 && b1 >= b0,
            ErrorCode::step_out_of_bounds,
            "readout region contains no grid cell");
    i0 = a0;
    j0 = b0;

    ReadoutImage img;
    img.channel = r.channel;
    img.label = r.label;
    img.nx = a1 - a0 + 1;
    img.ny = b1 - b0 + 1;
    img.x0 = grid.x(a0);
    img.y0 = grid.y(b0);
    img.pitch = grid.dx;
    img.counts.assign(static_cast<std::size_t>(img.nx) * img.ny, 0.0);
    img.beam = r.beam;
    img.mode = r.mode;
    return img;
}

std::vector<double>
channel_brightness(ModelRegistry const& reg, std::string const& channel)
{
    auto const& ch = reg.channels();
    require(std::find(ch.begin(), ch.end(), channel) != ch.end(),
            ErrorCode::unknown_channel,
            "no state emits into channel '" + channel + "'");
    auto b = reg.brightness(channel);
    require(std::any_of(b.begin(), b.end(), [](double v) { return v > 0; }),
            ErrorCode::unknown_channel,
            "channel '" + channel + "' has no state with nonzero brightness");
    return b;
}

double pixel_signal(SimulationState const& state,
                    std::vector<double> const& brightness,
                    std::size_t cell,
                    double intensity)
{
    double s = 0;
    for (std::size_t k = 0; k < brightness.size(); ++k)
        s += brightness[k] * state.defect(cell, k);
    return s * intensity;
}

}  // namespace

//---------------------------------------------------------------------------//
Region grid_region(GridSpec const& grid)
{
    return {grid.x(0), grid.y(0), grid.x(grid.nx - 1), grid.y(grid.ny - 1)};
}

//---------------------------------------------------------------------------//
std::vector<std::pair<double, double>> raster_points(RasterScan const& scan)
{
    require(scan.step > 0,
            ErrorCode::invalid_value,
            "raster step must be positive");
    auto count = [&](double lo, double hi) {
        return static_cast<int>(std::floor((hi - lo) / scan.step + 1e-9)) + 1;
    };
    int const nx = count(scan.region.x0, scan.region.x1);
    int const ny = count(scan.region.y0, scan.region.y1);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
    {
        for (int i = 0; i < nx; ++i)
        {
            pts.emplace_back(scan.region.x0 + i * scan.step,
                             scan.region.y0 + j * scan.step);
        }
    }
    return pts;
}

double step_duration(ScheduleStep const& step, GridSpec const& grid)
{
    return std::visit(
        Overload{
            [](FixedIllumination const& s) { return s.duration; },
            [](RasterScan const& s) {
                return static_cast<double>(raster_points(s).size()) * s.passes
                       * s.dwell;
            },
            [](Dark const& s) { return s.duration; },
            [&grid](Readout const& s) {
                if (s.mode == ReadoutMode::ideal)
                    return 0.0;
                return static_cast<double>(num_pixels(s, grid)) * s.dwell;
            },
            [](Snapshot const&) { return 0.0; },
        },
        step);
}

void validate_step(ScheduleStep const& step, GridSpec const& grid)
{
    std::visit(Overload{
                   [](FixedIllumination const& s) {
                       check_duration(s.duration, "illumination");
                       for (auto const& b : s.beams)
                           validate_beam(b);
                   },
                   [&grid](RasterScan const& s) {
                       check_duration(s.dwell, "raster dwell");
                       require(s.step > 0,
                               ErrorCode::invalid_value,
                               "raster step must be positive");
                       require(s.passes >= 0,
                               ErrorCode::invalid_value,
                               "raster passes must be non-negative");
                       validate_beam(s.beam);
                       check_region(s.region, grid, "raster");
                   },
                   [](Dark const& s) { check_duration(s.duration, "dark"); },
                   [&grid](Readout const& s) {
                       validate_beam(s.beam);
                       check_duration(s.dwell, "readout dwell");
                       if (s.region)
                           check_region(*s.region, grid, "readout");
                   },
                   [](Snapshot const&) {},
               },
               step);
}

//---------------------------------------------------------------------------//
double ReadoutImage::mean() const
{
    if (counts.empty())
        return 0;
    double s = 0;
    for (double c : counts)
        s += c;
    return s / static_cast<double>(counts.size());
}

//---------------------------------------------------------------------------//
ReadoutImage readout_image(SimulationState const& state,
                           ModelRegistry const& reg,
                           Readout const& readout)
{
    auto const brightness = channel_brightness(reg, readout.channel);
    int i0 = 0;
    int j0 = 0;
    ReadoutImage img = make_frame(state.grid, readout, i0, j0);
    img.mode = ReadoutMode::ideal;
    img.time = state.time;
    double const peak = beam_peak_intensity(readout.beam);
    for (int j = 0; j < img.ny; ++j)
    {
        for (int i = 0; i < img.nx; ++i)
        {
            std::size_t const cell = state.electrons.index(i0 + i, j0 + j);
            img.counts[static_cast<std::size_t>(j) * img.nx + i]
                = pixel_signal(state, brightness, cell, peak);
        }
    }
    return img;
}

//---------------------------------------------------------------------------//
// PROTOCOL RUNNER
//---------------------------------------------------------------------------//
ProtocolRunner::ProtocolRunner(ModelRegistry const& reg, EngineOptions options)
    : reg_(reg), engine_(reg, options)
{
}

std::vector<ProtocolOutput>
ProtocolRunner::run(SimulationState& state,
                    std::vector<ScheduleStep> const& steps)
{
    for (auto const& s : steps)
        validate_step(s, state.grid);

    std::vector<ProtocolOutput> out;
    for (auto const& s : steps)
    {
        execute(state, s, [&out](ProtocolOutput const& o) {
            out.push_back(o);
        });
    }
    return out;
}

void ProtocolRunner::execute(SimulationState& state,
                             ScheduleStep const& step,
                             Observer const& emit)
{
    validate_step(step, state.grid);
    double const t0 = state.time;
    double const duration = step_duration(step, state.grid);

    std::visit(
        Overload{
            [&](FixedIllumination const& s) {
                engine_.macrostep(state, s.beams, s.duration);
            },
            [&](RasterScan const& s) {
                auto const pts = raster_points(s);
                Beam b = s.beam;
                for (int pass = 0; pass < s.passes; ++pass)
                {
                    for (auto const& [x, y] : pts)
                    {
                        b.x = x;
                        b.y = y;
                        engine_.macrostep(state, std::span<Beam const>(&b, 1), s.dwell);
                    }
                }
            },
            [&](Dark const& s) { engine_.macrostep(state, {}, s.duration); },
            [&](Readout const& s) {
                ReadoutImage img = s.mode == ReadoutMode::ideal
                                       ? readout_image(state, reg_, s)
                                       : perturbative_readout(state, s);
                img.time = t0 + duration;
                state.time = t0 + duration;
                emit(img);
            },
            [&](Snapshot const& s) {
                emit(SnapshotRecord{s.label, state.time, state});
            },
        },
        step);

    // Step boundaries land on exact sums of step durations
    state.time = t0 + duration;
}

ReadoutImage
ProtocolRunner::perturbative_readout(SimulationState& state, Readout const& r)
{
    auto const brightness = channel_brightness(reg_, r.channel);
    int i0 = 0;
    int j0 = 0;
    ReadoutImage img = make_frame(state.grid, r, i0, j0);
    double const peak = beam_peak_intensity(r.beam);
    Beam b = r.beam;
    for (int j = 0; j < img.ny; ++j)
    {
        for (int i = 0; i < img.nx; ++i)
        {
            std::size_t const cell = state.electrons.index(i0 + i, j0 + j);
            double const before = pixel_signal(state, brightness, cell, peak);
            b.x = state.grid.x(i0 + i);
            b.y = state.grid.y(j0 + j);
            engine_.macrostep(state, std::span<Beam const>(&b, 1), r.dwell);
            double const after = pixel_signal(state, brightness, cell, peak);
            img.counts[static_cast<std::size_t>(j) * img.nx + i]
                = 0.5 * (before + after);
        }
    }
    return img;
}

//---------------------------------------------------------------------------//
std::vector<ProtocolOutput> run_protocol(ModelRegistry const& reg,
                                         SimulationState& state,
                                         std::vector<ScheduleStep> const& steps,
                                         EngineOptions const& options)
{
    ProtocolRunner runner(reg, options);
    return runner.run(state, steps);
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
