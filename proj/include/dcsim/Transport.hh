//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Transport.hh
//! Carrier diffusion, space-charge drift, and the coupled macro step.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "Photophysics.hh"
#include "State.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
enum class Boundary
{
    absorbing,  //!< zero density outside the grid
    reflecting  //!< zero flux through the grid edge
};

//---------------------------------------------------------------------------//
/*!
 * Explicit 5-point diffusion of one carrier field.
 *
 * Sub-steps so that each step satisfies D dt / dx^2 <= 0.9 / 4; at the
 * stability limit itself the checkerboard mode would not decay.
 *
 * \return density summed over cells that left through the boundary
 */
double diffuse(Field& field,
               double diffusion,
               double dx,
               double dt,
               Boundary bc,
               std::vector<double>& scratch);

//---------------------------------------------------------------------------//
struct PoissonOptions
{
    //! Max residual relative to max |source|
    double tolerance{1e-9};
    int max_iterations{20000};
    //! Over-relaxation factor; zero selects 2 / (1 + sin(pi / (N + 1)))
    double omega{0};
};

struct PoissonResult
{
    int iterations{0};
    double residual{0};  //!< max |lap(phi) + source| [V/um^2]
};

/*!
 * Red-black SOR solution of lap(phi) = -rho e / (eps0 eps_r).
 *
 * Dirichlet phi = 0 one cell beyond the grid edge. \c phi is used as the
 * initial guess and overwritten.
 *
 * \throws Error(NonConvergence) if the tolerance is not reached.
 */
PoissonResult poisson_solve(Field const& rho,
                            double permittivity,
                            double dx,
                            Field& phi,
                            PoissonOptions const& options = {});

//---------------------------------------------------------------------------//
/*!
 * First-order upwind drift of one carrier species in a potential.
 *
 * Velocity is -sign * mobility * grad(phi) with sign +1 for holes and -1 for
 * electrons. Sub-steps to keep the Courant number at most 1/4 per face.
 *
 * \return density summed over cells that left through the boundary
 */
double drift(Field& field,
             Field const& phi,
             double mobility,
             int charge_sign,
             double dx,
             double dt,
             Boundary bc,
             std::vector<double>& scratch);

//---------------------------------------------------------------------------//
struct EngineOptions
{
    Boundary boundary{Boundary::absorbing};
    //! Fraction of the diffusion stability limit used as carrier step
    double cfl_safety{0.9};
    //! Upper bound on the carrier step [s]
    double max_substep{1e-2};
    bool space_charge{false};
    //! Carrier steps between potential updates
    int poisson_interval{1};
    PoissonOptions poisson;
    KineticsOptions kinetics;
    //! Beam intensity is truncated beyond this many waists
    double beam_cutoff{6};
    //! With no light and no spontaneous processes, carriers whose peak
    //! density stays below this value are left in place [um^-3]
    double settle_floor{1e-9};
};

struct MacroTally
{
    KineticsTally kinetics;
    std::int64_t substeps{0};
    std::int64_t poisson_iterations{0};
    bool quiescent{false};  //!< clock advanced without transport
};

/*!
 * Coupled carrier transport and defect kinetics on the grid.
 *
 * Each carrier step applies, in order: local kinetics in every cell,
 * diffusion of both carriers, and (with space charge) a potential update and
 * drift. Without configured mobilities, drift uses the Einstein relation at
 * 300 K. Holds scratch space; use one instance per run.
 */
class TransportEngine
{
  public:
    TransportEngine(ModelRegistry const& reg, EngineOptions options = {});

    //! Advance \c state by \c dt under fixed beams
    MacroTally
    macrostep(SimulationState& state, std::span<Beam const> beams, double dt);

    EngineOptions const& options() const { return options_; }
    ModelRegistry const& registry() const { return reg_; }

    //! Carrier step satisfying diffusion and drift stability
    double carrier_step(SimulationState const& state) const;

  private:
    struct LitCell
    {
        std::size_t cell;
        std::size_t offset;  //!< into rates_
    };

    ModelRegistry const& reg_;
    EngineOptions options_;
    KineticsEngine kinetics_;
    std::size_t stride_;  //!< photo rates then gates per lit cell
    std::vector<LitCell> lit_;
    std::vector<std::int32_t> lit_index_;  //!< per cell, -1 when dark
    std::vector<double> rates_;
    std::vector<double> scratch_;
    std::vector<LocalIllumination> light_;
    std::int64_t steps_since_poisson_{0};

    void build_rate_map(GridSpec const& grid, std::span<Beam const> beams);
    bool is_quiescent(SimulationState const& state) const;
    void kinetics_pass(SimulationState& state, double h, MacroTally& tally);
    void transport_pass(SimulationState& state, double h, MacroTally& tally);
};

//! Convenience wrapper constructing a temporary engine
MacroTally carrier_macrostep(SimulationState& state,
                             ModelRegistry const& reg,
                             std::span<Beam const> beams,
                             double dt,
                             EngineOptions const& options = {});

//---------------------------------------------------------------------------//
}  // namespace dcsim
