//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file State.cc
//---------------------------------------------------------------------------//
#include "dcsim/State.hh"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dcsim/Error.hh"
#include "dcsim/Units.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
double Field::sum() const
{
    double s = 0;
    for (double v : data_)
        s += v;
    return s;
}

double Field::max() const
{
    if (data_.empty())
        return 0;
    return *std::max_element(data_.begin(), data_.end());
}

void Field::fill(double value)
{
    std::fill(data_.begin(), data_.end(), value);
}

//---------------------------------------------------------------------------//
Field SimulationState::slot_field(std::size_t slot) const
{
    Field f(grid.nx, grid.ny);
    for (std::size_t c = 0; c < f.size(); ++c)
        f[c] = defect(c, slot);
    return f;
}

Field SimulationState::species_field(ModelRegistry const& reg,
                                     std::size_t species) const
{
    Field f(grid.nx, grid.ny);
    std::size_t const begin = reg.species_offset(species);
    std::size_t const end = begin + reg.species()[species].states.size();
    for (std::size_t c = 0; c < f.size(); ++c)
    {
        double s = 0;
        for (std::size_t k = begin; k < end; ++k)
            s += defect(c, k);
        f[c] = s;
    }
    return f;
}

Field SimulationState::charge_density() const
{
    Field rho = background;
    for (std::size_t c = 0; c < rho.size(); ++c)
    {
        double q = 0;
        for (std::size_t s = 0; s < num_slots; ++s)
            q += slot_charge[s] * defect(c, s);
        rho[c] += q + holes[c] - electrons[c];
    }
    return rho;
}

//---------------------------------------------------------------------------//
bool Preparation::contains(double x, double y) const
{
    switch (shape)
    {
        case Shape::everywhere:
            return true;
        case Shape::disk: {
            double const dx = x - x0;
            double const dy = y - y0;
            return dx * dx + dy * dy <= radius * radius;
        }
        case Shape::rectangle:
            return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
    return false;
}

//---------------------------------------------------------------------------//
SimulationState make_initial_state(ModelRegistry const& reg,
                                   GridSpec const& grid,
                                   std::vector<Preparation> const& prep)
{
    validate_grid(grid);

    SimulationState st;
    st.grid = grid;
    st.num_slots = reg.num_slots();
    st.slot_charge.resize(st.num_slots);
    for (std::size_t s = 0; s < st.num_slots; ++s)
        st.slot_charge[s] = reg.slot(s).charge;
    st.defects.assign(grid.size() * st.num_slots, 0.0);
    st.electrons = Field(grid.nx, grid.ny);
    st.holes = Field(grid.nx, grid.ny);
    st.potential = Field(grid.nx, grid.ny);

    // Equilibrium occupancy and its compensating background
    double background = 0;
    auto const& species = reg.species();
    std::vector<double> totals(species.size());
    for (std::size_t sp = 0; sp < species.size(); ++sp)
    {
        totals[sp] = units::ppb_to_density(species[sp].total_concentration,
                                           grid.host_atom_density);
        background -= reg.slot(reg.initial_slot(sp)).charge * totals[sp];
        for (std::size_t c = 0; c < grid.size(); ++c)
            st.defect(c, reg.initial_slot(sp)) = totals[sp];
    }
    st.background = Field(grid.nx, grid.ny, background);

    for (auto const& p : prep)
    {
        auto sp = reg.find_species(p.species);
        require(sp.has_value(),
                ErrorCode::unknown_state,
                "preparation names unknown species '" + p.species + "'");
        auto slot = reg.find_slot(p.species, p.state);
        require(slot.has_value(),
                ErrorCode::unknown_state,
                "preparation names unknown state '" + p.state
                    + "' of species '" + p.species + "'");
        require(p.fraction >= 0 && p.fraction <= 1,
                ErrorCode::invalid_value,
                "preparation fraction must be in [0, 1]");
        require(p.shape != Preparation::Shape::disk || p.radius > 0,
                ErrorCode::invalid_value,
                "preparation disk radius must be positive");

        std::size_t const begin = reg.species_offset(*sp);
        std::size_t const end = begin + species[*sp].states.size();
        std::size_t const init = reg.initial_slot(*sp);
        for (int j = 0; j < grid.ny; ++j)
        {
            for (int i = 0; i < grid.nx; ++i)
            {
                if (!p.contains(grid.x(i), grid.y(j)))
                    continue;
                std::size_t const c = st.electrons.index(i, j);
                for (std::size_t k = begin; k < end; ++k)
                    st.defect(c, k) = 0;
                st.defect(c, *slot) = p.fraction * totals[*sp];
                st.defect(c, init) += (1 - p.fraction) * totals[*sp];
            }
        }
    }
    return st;
}

//---------------------------------------------------------------------------//
double total_defect_charge(SimulationState const& state)
{
    double q = 0;
    std::size_t const ncell = state.grid.size();
    for (std::size_t c = 0; c < ncell; ++c)
    {
        for (std::size_t s = 0; s < state.num_slots; ++s)
            q += state.slot_charge[s] * state.defect(c, s);
    }
    return q;
}

//---------------------------------------------------------------------------//
namespace
{
class Fnv1a
{
  public:
    void bytes(void const* p, std::size_t n)
    {
        auto const* b = static_cast<unsigned char const*>(p);
        for (std::size_t i = 0; i < n; ++i)
        {
            h_ ^= b[i];
            h_ *= 0x100000001b3ull;
        }
    }
    template<class T>
    void value(T const& v)
    {
        bytes(&v, sizeof(T));
    }
    void doubles(std::vector<double> const& v)
    {
        bytes(v.data(), v.size() * sizeof(double));
    }
    std::uint64_t get() const { return h_; }

  private:
    std::uint64_t h_{0xcbf29ce484222325ull};
};
}  // namespace

std::uint64_t state_hash(SimulationState const& state)
{
    Fnv1a h;
    h.value(state.grid.nx);
    h.value(state.grid.ny);
    h.value(state.grid.dx);
    h.value(state.num_slots);
    h.doubles(state.defects);
    h.doubles(state.electrons.data());
    h.doubles(state.holes.data());
    h.doubles(state.background.data());
    h.doubles(state.potential.data());
    h.value(state.time);
    return h.get();
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
