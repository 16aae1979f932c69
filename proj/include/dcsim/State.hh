//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/State.hh
//! Grid fields and the mutable simulation state.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "Model.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
/*!
 * Scalar field on a cell-centered grid, x fastest.
 */
class Field
{
  public:
    Field() = default;
    Field(int nx, int ny, double value = 0)
        : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * ny, value)
    {
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }
    double& operator[](std::size_t c) { return data_[c]; }
    double operator[](std::size_t c) const { return data_[c]; }

    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(j) * nx_ + i;
    }

    std::vector<double>& data() { return data_; }
    std::vector<double> const& data() const { return data_; }

    double sum() const;
    double max() const;
    void fill(double value);

    bool operator==(Field const&) const = default;

  private:
    int nx_{0};
    int ny_{0};
    std::vector<double> data_;
};

//---------------------------------------------------------------------------//
/*!
 * Cumulative carrier bookkeeping, as sums of cell densities [um^-3].
 *
 * Multiplying by the cell area converts to carriers per unit slab
 * thickness. Index with \c carrier_index.
 */
struct CarrierLedger
{
    std::array<double, 2> created{0, 0};
    std::array<double, 2> captured{0, 0};
    std::array<double, 2> absorbed{0, 0};
};

//---------------------------------------------------------------------------//
/*!
 * Defect occupancies, carriers, and fixed charge on the grid.
 *
 * Defect densities are interleaved per cell: \c defects[cell * slots + s].
 * The background is the fixed compensating charge density that makes the
 * initial (unprepared) defect configuration neutral.
 */
struct SimulationState
{
    GridSpec grid;
    std::size_t num_slots{0};
    std::vector<int> slot_charge;  //!< [e] per slot
    std::vector<double> defects;  //!< [um^-3]
    Field electrons;  //!< [um^-3]
    Field holes;  //!< [um^-3]
    Field background;  //!< [e um^-3]
    Field potential;  //!< [V], only maintained with space charge
    double time{0};  //!< protocol time [s]
    CarrierLedger ledger;
    std::int64_t clamp_events{0};

    double& defect(std::size_t cell, std::size_t slot)
    {
        return defects[cell * num_slots + slot];
    }
    double defect(std::size_t cell, std::size_t slot) const
    {
        return defects[cell * num_slots + slot];
    }

    //! Density plane of one slot
    Field slot_field(std::size_t slot) const;
    //! Total density of one species
    Field species_field(ModelRegistry const& reg, std::size_t species) const;
    //! Net charge density [e um^-3]: background + defects + holes - electrons
    Field charge_density() const;
};

//---------------------------------------------------------------------------//
/*!
 * Place a fraction of a species into one of its states within a region.
 *
 * Used to start from nonequilibrium configurations, e.g. a previously
 * converted SiV0 patch. Shapes are the whole grid, a disk, or a rectangle in
 * grid coordinates [um].
 */
struct Preparation
{
    enum class Shape
    {
        everywhere,
        disk,
        rectangle
    };

    std::string species;
    std::string state;
    double fraction{1};
    Shape shape{Shape::everywhere};
    double x0{0}, y0{0};  //!< disk center or rectangle lower corner
    double x1{0}, y1{0};  //!< rectangle upper corner
    double radius{0};

    bool contains(double x, double y) const;
};

SimulationState make_initial_state(ModelRegistry const& reg,
                                   GridSpec const& grid,
                                   std::vector<Preparation> const& prep = {});

//! Total defect charge [e um^-3 summed over cells]
double total_defect_charge(SimulationState const& state);

//! 64-bit FNV-1a over all numeric state content
std::uint64_t state_hash(SimulationState const& state);

//---------------------------------------------------------------------------//
}  // namespace dcsim
