//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Protocol.hh
//! Timed measurement sequences and simulated confocal readout.
//---------------------------------------------------------------------------//
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "Photophysics.hh"
#include "State.hh"
#include "Transport.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
//! Axis-aligned rectangle in grid coordinates [um]
struct Region
{
    double x0{0}, y0{0}, x1{0}, y1{0};

    bool contains(double x, double y) const
    {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
    bool operator==(Region const&) const = default;
};

//! Whole-grid region (cell centers)
Region grid_region(GridSpec const& grid);

//---------------------------------------------------------------------------//
// SCHEDULE STEPS
//---------------------------------------------------------------------------//
struct FixedIllumination
{
    std::vector<Beam> beams;
    double duration{0};  //!< [s]
};

//! Unidirectional line raster with zero flyback; beam center is ignored
struct RasterScan
{
    Region region;
    double step{0.2};  //!< [um]
    double dwell{1e-3};  //!< [s]
    int passes{1};
    Beam beam;
};

//! No illumination: only carrier relaxation and spontaneous release
struct Dark
{
    double duration{0};  //!< [s]
};

enum class ReadoutMode
{
    ideal,  //!< side-effect free
    perturbative  //!< the readout beam drives kinetics while imaging
};

/*!
 * Confocal image of one detection channel.
 *
 * Pixels are the grid cells whose centers fall within the region (the whole
 * grid by default); beam center is ignored.
 */
struct Readout
{
    Beam beam;
    std::string channel;
    ReadoutMode mode{ReadoutMode::ideal};
    std::optional<Region> region;
    double dwell{1e-3};  //!< perturbative mode [s]
    std::string label;
};

struct Snapshot
{
    std::string label;
};

using ScheduleStep
    = std::variant<FixedIllumination, RasterScan, Dark, Readout, Snapshot>;

//! Raster point centers in scan order
std::vector<std::pair<double, double>> raster_points(RasterScan const& scan);

//! Protocol time consumed by a step [s]
double step_duration(ScheduleStep const& step, GridSpec const& grid);

/*!
 * Check step parameters against the grid.
 *
 * \throws Error(StepOutOfBounds) for scan or readout regions outside the
 *   grid, Error(InvalidValue) for negative durations or non-positive steps.
 */
void validate_step(ScheduleStep const& step, GridSpec const& grid);

//---------------------------------------------------------------------------//
// OUTPUTS
//---------------------------------------------------------------------------//
struct ReadoutImage
{
    std::string channel;
    std::string label;
    int nx{0};
    int ny{0};
    double x0{0};  //!< center of pixel (0, 0) [um]
    double y0{0};
    double pitch{0};  //!< [um]
    std::vector<double> counts;  //!< [kcps], x fastest
    Beam beam;
    ReadoutMode mode{ReadoutMode::ideal};
    double time{0};  //!< protocol time at completion [s]

    double operator()(int i, int j) const
    {
        return counts[static_cast<std::size_t>(j) * nx + i];
    }
    double x(int i) const { return x0 + i * pitch; }
    double y(int j) const { return y0 + j * pitch; }
    double mean() const;
};

struct SnapshotRecord
{
    std::string label;
    double time{0};
    SimulationState state;
};

using ProtocolOutput = std::variant<SnapshotRecord, ReadoutImage>;

//---------------------------------------------------------------------------//
/*!
 * Ideal confocal image: brightness-weighted density times peak intensity.
 *
 * \throws Error(UnknownChannel) if no state emits into the channel.
 */
ReadoutImage readout_image(SimulationState const& state,
                           ModelRegistry const& reg,
                           Readout const& readout);

//---------------------------------------------------------------------------//
/*!
 * Executes schedule steps against an evolving state.
 */
class ProtocolRunner
{
  public:
    using Observer = std::function<void(ProtocolOutput const&)>;

    ProtocolRunner(ModelRegistry const& reg, EngineOptions options = {});

    //! Run all steps; outputs are returned in emission order
    std::vector<ProtocolOutput>
    run(SimulationState& state, std::vector<ScheduleStep> const& steps);

    //! Run one step, passing outputs to the observer
    void execute(SimulationState& state,
                 ScheduleStep const& step,
                 Observer const& emit);

    TransportEngine& engine() { return engine_; }

  private:
    ModelRegistry const& reg_;
    TransportEngine engine_;

    ReadoutImage perturbative_readout(SimulationState& state, Readout const& r);
};

//! Convenience wrapper
std::vector<ProtocolOutput> run_protocol(ModelRegistry const& reg,
                                         SimulationState& state,
                                         std::vector<ScheduleStep> const& steps,
                                         EngineOptions const& options = {});

//---------------------------------------------------------------------------//
}  // namespace dcsim
