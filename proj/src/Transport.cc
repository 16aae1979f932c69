//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Transport.cc
//---------------------------------------------------------------------------//
#include "dcsim/Transport.hh"

#include <algorithm>
#include <cmath>

#include "dcsim/Error.hh"
#include "dcsim/Units.hh"

namespace dcsim
{
namespace
{
//! Thermal voltage at 300 K [V]
constexpr double thermal_voltage = units::boltzmann_ev * 300.0;

//! Fraction of the explicit diffusion limit used for internal sub-steps
constexpr double diffusion_margin = 0.9;

int num_substeps(double ratio)
{
    // Tolerate rounding in steps chosen at the limit
    if (!(ratio > 1 + 1e-12))
        return 1;
    double const n = std::ceil(ratio);
    require(n < 1e9,
            ErrorCode::stability_violation,
            "transport step would need " + std::to_string(n) + " sub-steps");
    return static_cast<int>(n);
}
}  // namespace

//---------------------------------------------------------------------------//
// DIFFUSION
//---------------------------------------------------------------------------//
double diffuse(Field& field,
               double diffusion,
               double dx,
               double dt,
               Boundary bc,
               std::vector<double>& scratch)
{
    require(diffusion >= 0 && dx > 0 && dt >= 0,
            ErrorCode::invalid_value,
            "diffusion requires D >= 0, dx > 0, dt >= 0");
    if (diffusion == 0 || dt == 0)
        return 0;

    int const nx = field.nx();
    int const ny = field.ny();
    // At exactly D dt / dx^2 = 1/4 the checkerboard mode never decays
    int const n = num_substeps(4 * diffusion * dt / (diffusion_margin * dx * dx));
    double const r = diffusion * (dt / n) / (dx * dx);
    bool const absorb = bc == Boundary::absorbing;

    scratch.resize(field.size());
    auto& cur = field.data();
    double absorbed = 0;
    for (int step = 0; step < n; ++step)
    {
        for (int j = 0; j < ny; ++j)
        {
            std::size_t const row = static_cast<std::size_t>(j) * nx;
            double const* c = cur.data() + row;
            double const* below = j > 0 ? c - nx : nullptr;
            double const* above = j + 1 < ny ? c + nx : nullptr;
            double* out = scratch.data() + row;
            for (int i = 0; i < nx; ++i)
            {
                double const v = c[i];
                double const w = i > 0 ? c[i - 1] : (absorb ? 0 : v);
                double const e = i + 1 < nx ? c[i + 1] : (absorb ? 0 : v);
                double const s = below ? below[i] : (absorb ? 0 : v);
                double const nn = above ? above[i] : (absorb ? 0 : v);
                out[i] = v + r * ((w + e) + (s + nn) - 4 * v);
            }
        }
        if (absorb)
        {
            // Flux r * v through each boundary face
            double edge = 0;
            for (int i = 0; i < nx; ++i)
                edge += cur[i] + cur[static_cast<std::size_t>(ny - 1) * nx + i];
            for (int j = 0; j < ny; ++j)
            {
                std::size_t const row = static_cast<std::size_t>(j) * nx;
                edge += cur[row] + cur[row + nx - 1];
            }
            absorbed += r * edge;
        }
        cur.swap(scratch);
    }
    return absorbed;
}

//---------------------------------------------------------------------------//
// POISSON
//---------------------------------------------------------------------------//
PoissonResult poisson_solve(Field const& rho,
                            double permittivity,
                            double dx,
                            Field& phi,
                            PoissonOptions const& options)
{
    require(permittivity > 0 && dx > 0,
            ErrorCode::invalid_value,
            "Poisson solve requires positive permittivity and dx");
    int const nx = rho.nx();
    int const ny = rho.ny();
    if (phi.nx() != nx || phi.ny() != ny)
        phi = Field(nx, ny);

    double const scale = units::charge_over_eps0_v_um / permittivity;
    double smax = 0;
    for (std::size_t c = 0; c < rho.size(); ++c)
        smax = std::max(smax, std::fabs(rho[c] * scale));

    PoissonResult result;
    if (smax == 0)
    {
        phi.fill(0);
        return result;
    }

    double omega = options.omega;
    if (omega == 0)
    {
        int const n = std::max(nx, ny);
        omega = 2 / (1 + std::sin(units::pi / (n + 1)));
    }
    double const h2 = dx * dx;
    double const target = options.tolerance * smax;

    auto neighbors = [&](int i, int j) {
        double s = 0;
        if (i > 0)
            s += phi(i - 1, j);
        if (i + 1 < nx)
            s += phi(i + 1, j);
        if (j > 0)
            s += phi(i, j - 1);
        if (j + 1 < ny)
            s += phi(i, j + 1);
        return s;
    };
    auto max_residual = [&] {
        double res = 0;
        for (int j = 0; j < ny; ++j)
        {
            for (int i = 0; i < nx; ++i)
            {
                double const lap = (neighbors(i, j) - 4 * phi(i, j)) / h2;
                res = std::max(res, std::fabs(lap + rho(i, j) * scale));
            }
        }
        return res;
    };

    for (int it = 1; it <= options.max_iterations; ++it)
    {
        for (int color = 0; color < 2; ++color)
        {
            for (int j = 0; j < ny; ++j)
            {
                for (int i = (j + color) % 2; i < nx; i += 2)
                {
                    double const gs
                        = 0.25 * (neighbors(i, j) + h2 * rho(i, j) * scale);
                    phi(i, j) += omega * (gs - phi(i, j));
                }
            }
        }
        if (it % 10 == 0 || it == options.max_iterations)
        {
            result.iterations = it;
            result.residual = max_residual();
            if (result.residual <= target)
                return result;
        }
    }
    throw Error(ErrorCode::non_convergence,
                "Poisson solve did not reach tolerance after "
                    + std::to_string(options.max_iterations)
                    + " iterations (residual "
                    + std::to_string(result.residual / smax) + ")");
}

//---------------------------------------------------------------------------//
// DRIFT
//---------------------------------------------------------------------------//
double drift(Field& field,
             Field const& phi,
             double mobility,
             int charge_sign,
             double dx,
             double dt,
             Boundary bc,
             std::vector<double>& scratch)
{
    require(mobility >= 0 && dx > 0 && dt >= 0,
            ErrorCode::invalid_value,
            "drift requires mobility >= 0, dx > 0, dt >= 0");
    if (mobility == 0 || dt == 0)
        return 0;

    int const nx = field.nx();
    int const ny = field.ny();
    bool const absorb = bc == Boundary::absorbing;
    double const k = -charge_sign * mobility / dx;

    // Face velocities [um/s]; x faces are (nx + 1) per row, y faces
    // (ny + 1) per column. The potential vanishes one cell outside.
    std::size_t const nfx = static_cast<std::size_t>(nx + 1) * ny;
    std::size_t const nfy = static_cast<std::size_t>(ny + 1) * nx;
    scratch.resize(2 * (nfx + nfy));
    double* vx = scratch.data();
    double* vy = vx + nfx;
    double* fx = vy + nfy;
    double* fy = fx + nfx;

    auto phi_at = [&](int i, int j) {
        if (i < 0 || i >= nx || j < 0 || j >= ny)
            return 0.0;
        return phi(i, j);
    };
    double vmax = 0;
    for (int j = 0; j < ny; ++j)
    {
        for (int f = 0; f <= nx; ++f)
        {
            double v = k * (phi_at(f, j) - phi_at(f - 1, j));
            if (!absorb && (f == 0 || f == nx))
                v = 0;
            vx[static_cast<std::size_t>(j) * (nx + 1) + f] = v;
            vmax = std::max(vmax, std::fabs(v));
        }
    }
    for (int i = 0; i < nx; ++i)
    {
        for (int f = 0; f <= ny; ++f)
        {
            double v = k * (phi_at(i, f) - phi_at(i, f - 1));
            if (!absorb && (f == 0 || f == ny))
                v = 0;
            vy[static_cast<std::size_t>(i) * (ny + 1) + f] = v;
            vmax = std::max(vmax, std::fabs(v));
        }
    }
    if (vmax == 0)
        return 0;

    int const n = num_substeps(4 * vmax * dt / dx);
    double const c = (dt / n) / dx;
    double absorbed = 0;
    auto density = [&](int i, int j) {
        if (i < 0 || i >= nx || j < 0 || j >= ny)
            return 0.0;
        return field(i, j);
    };

    for (int step = 0; step < n; ++step)
    {
        // Upwind face transfers (positive along +x / +y)
        for (int j = 0; j < ny; ++j)
        {
            for (int f = 0; f <= nx; ++f)
            {
                std::size_t const idx = static_cast<std::size_t>(j) * (nx + 1)
                                        + f;
                double const v = vx[idx];
                fx[idx] = c * v * (v > 0 ? density(f - 1, j) : density(f, j));
            }
        }
        for (int i = 0; i < nx; ++i)
        {
            for (int f = 0; f <= ny; ++f)
            {
                std::size_t const idx = static_cast<std::size_t>(i) * (ny + 1)
                                        + f;
                double const v = vy[idx];
                fy[idx] = c * v * (v > 0 ? density(i, f - 1) : density(i, f));
            }
        }
        for (int j = 0; j < ny; ++j)
        {
            std::size_t const row = static_cast<std::size_t>(j) * (nx + 1);
            absorbed += std::max(-fx[row], 0.0) + std::max(fx[row + nx], 0.0);
        }
        for (int i = 0; i < nx; ++i)
        {
            std::size_t const col = static_cast<std::size_t>(i) * (ny + 1);
            absorbed += std::max(-fy[col], 0.0) + std::max(fy[col + ny], 0.0);
        }
        for (int j = 0; j < ny; ++j)
        {
            for (int i = 0; i < nx; ++i)
            {
                std::size_t const xr = static_cast<std::size_t>(j) * (nx + 1);
                std::size_t const yc = static_cast<std::size_t>(i) * (ny + 1);
                field(i, j) += (fx[xr + i] - fx[xr + i + 1])
                               + (fy[yc + j] - fy[yc + j + 1]);
            }
        }
    }
    return absorbed;
}

//---------------------------------------------------------------------------//
// TRANSPORT ENGINE
//---------------------------------------------------------------------------//
TransportEngine::TransportEngine(ModelRegistry const& reg,
                                 EngineOptions options)
    : reg_(reg)
    , options_(options)
    , kinetics_(reg, options.kinetics)
    , stride_(kinetics_.num_photo() + kinetics_.num_tunneling())
{
    require(options_.cfl_safety > 0 && options_.cfl_safety <= 1,
            ErrorCode::invalid_value,
            "cfl_safety must be in (0, 1]");
    require(options_.max_substep > 0,
            ErrorCode::invalid_value,
            "max_substep must be positive");
    require(options_.poisson_interval > 0,
            ErrorCode::invalid_value,
            "poisson_interval must be positive");
    require(options_.beam_cutoff > 0,
            ErrorCode::invalid_value,
            "beam_cutoff must be positive");
    require(options_.settle_floor >= 0,
            ErrorCode::invalid_value,
            "settle_floor must be non-negative");
}

//---------------------------------------------------------------------------//
double TransportEngine::carrier_step(SimulationState const& state) const
{
    auto const& tr = reg_.transport();
    double const dmax = std::max(tr.diffusion_electron, tr.diffusion_hole);
    double step = options_.max_substep;
    if (dmax > 0)
    {
        double const dx = state.grid.dx;
        step = std::min(step, options_.cfl_safety * dx * dx / (4 * dmax));
    }
    return step;
}

//---------------------------------------------------------------------------//
void TransportEngine::build_rate_map(GridSpec const& grid,
                                     std::span<Beam const> beams)
{
    lit_.clear();
    rates_.clear();
    lit_index_.assign(grid.size(), -1);

    // Mark cells within the cutoff of any beam with nonzero power
    std::vector<std::size_t> cells;
    for (auto const& b : beams)
    {
        validate_beam(b);
        if (b.power == 0)
            continue;
        double const rc = options_.beam_cutoff * b.waist;
        int const i0 = std::max(
            0, static_cast<int>(std::floor((b.x - rc) / grid.dx + 0.5 * grid.nx)));
        int const i1 = std::min(
            grid.nx - 1,
            static_cast<int>(std::ceil((b.x + rc) / grid.dx + 0.5 * grid.nx)));
        int const j0 = std::max(
            0, static_cast<int>(std::floor((b.y - rc) / grid.dx + 0.5 * grid.ny)));
        int const j1 = std::min(
            grid.ny - 1,
            static_cast<int>(std::ceil((b.y + rc) / grid.dx + 0.5 * grid.ny)));
        for (int j = j0; j <= j1; ++j)
        {
            for (int i = i0; i <= i1; ++i)
            {
                double const dx = grid.x(i) - b.x;
                double const dy = grid.y(j) - b.y;
                if (dx * dx + dy * dy > rc * rc)
                    continue;
                std::size_t const c = static_cast<std::size_t>(j) * grid.nx + i;
                if (lit_index_[c] < 0)
                {
                    lit_index_[c] = 0;
                    cells.push_back(c);
                }
            }
        }
    }
    std::sort(cells.begin(), cells.end());

    std::size_t const np = kinetics_.num_photo();
    for (std::size_t c : cells)
    {
        int const i = static_cast<int>(c % grid.nx);
        int const j = static_cast<int>(c / grid.nx);
        light_.clear();
        for (auto const& b : beams)
        {
            if (b.power == 0)
                continue;
            double const rc = options_.beam_cutoff * b.waist;
            double const dx = grid.x(i) - b.x;
            double const dy = grid.y(j) - b.y;
            if (dx * dx + dy * dy > rc * rc)
                continue;
            light_.push_back({b.wavelength, beam_intensity(b, grid.x(i), grid.y(j))});
        }
        std::size_t const offset = rates_.size();
        rates_.resize(offset + stride_);
        kinetics_.local_rates(
            light_,
            std::span<double>(rates_.data() + offset, np),
            std::span<double>(rates_.data() + offset + np, stride_ - np));
        lit_index_[c] = static_cast<std::int32_t>(lit_.size());
        lit_.push_back({c, offset});
    }
}

//---------------------------------------------------------------------------//
bool TransportEngine::is_quiescent(SimulationState const& state) const
{
    if (!lit_.empty())
        return false;
    if (state.electrons.max() > options_.settle_floor
        || state.holes.max() > options_.settle_floor)
    {
        return false;
    }
    if (!reg_.releases().empty())
    {
        std::size_t const ns = state.num_slots;
        for (std::size_t c = 0; c < state.grid.size(); ++c)
        {
            if (kinetics_.has_spontaneous(std::span<double const>(
                    state.defects.data() + c * ns, ns)))
            {
                return false;
            }
        }
    }
    return true;
}

//---------------------------------------------------------------------------//
void TransportEngine::kinetics_pass(SimulationState& state,
                                    double h,
                                    MacroTally& tally)
{
    std::size_t const ns = state.num_slots;
    std::size_t const np = kinetics_.num_photo();
    bool const spontaneous = !reg_.releases().empty();
    KineticsTally sum;
    for (std::size_t c = 0; c < state.grid.size(); ++c)
    {
        std::span<double> density(state.defects.data() + c * ns, ns);
        double& ne = state.electrons[c];
        double& nh = state.holes[c];
        std::int32_t const li = lit_index_[c];
        if (li < 0)
        {
            if (ne == 0 && nh == 0
                && !(spontaneous && kinetics_.has_spontaneous(density)))
            {
                continue;
            }
            sum += kinetics_.advance(density, ne, nh, {}, {}, h);
        }
        else
        {
            double const* r = rates_.data() + lit_[li].offset;
            sum += kinetics_.advance(density,
                                     ne,
                                     nh,
                                     std::span<double const>(r, np),
                                     std::span<double const>(r + np, stride_ - np),
                                     h);
        }
    }
    for (std::size_t k = 0; k < 2; ++k)
    {
        state.ledger.created[k] += sum.emitted[k];
        state.ledger.captured[k] += sum.captured[k];
    }
    state.clamp_events += sum.clamps;
    tally.kinetics += sum;
}

//---------------------------------------------------------------------------//
void TransportEngine::transport_pass(SimulationState& state,
                                     double h,
                                     MacroTally& tally)
{
    auto const& tr = reg_.transport();
    double const dx = state.grid.dx;
    auto& ledger = state.ledger;
    std::size_t const ie = carrier_index(CarrierKind::electron);
    std::size_t const ih = carrier_index(CarrierKind::hole);

    ledger.absorbed[ie] += diffuse(state.electrons,
                                   tr.diffusion_electron,
                                   dx,
                                   h,
                                   options_.boundary,
                                   scratch_);
    ledger.absorbed[ih] += diffuse(
        state.holes, tr.diffusion_hole, dx, h, options_.boundary, scratch_);

    if (!options_.space_charge)
        return;

    if (steps_since_poisson_ % options_.poisson_interval == 0)
    {
        auto res = poisson_solve(state.charge_density(),
                                 tr.permittivity,
                                 dx,
                                 state.potential,
                                 options_.poisson);
        tally.poisson_iterations += res.iterations;
    }
    ++steps_since_poisson_;

    double const mu_e
        = tr.mobility_electron.value_or(tr.diffusion_electron / thermal_voltage);
    double const mu_h
        = tr.mobility_hole.value_or(tr.diffusion_hole / thermal_voltage);
    ledger.absorbed[ie] += drift(state.electrons,
                                 state.potential,
                                 mu_e,
                                 -1,
                                 dx,
                                 h,
                                 options_.boundary,
                                 scratch_);
    ledger.absorbed[ih] += drift(state.holes,
                                 state.potential,
                                 mu_h,
                                 +1,
                                 dx,
                                 h,
                                 options_.boundary,
                                 scratch_);
}

//---------------------------------------------------------------------------//
MacroTally TransportEngine::macrostep(SimulationState& state,
                                      std::span<Beam const> beams,
                                      double dt)
{
    require(std::isfinite(dt) && dt >= 0,
            ErrorCode::invalid_value,
            "macro step duration must be non-negative");
    require(state.num_slots == reg_.num_slots(),
            ErrorCode::invalid_value,
            "state does not match the model registry");

    MacroTally tally;
    double const t0 = state.time;
    if (dt == 0)
        return tally;

    build_rate_map(state.grid, beams);
    if (is_quiescent(state))
    {
        tally.quiescent = true;
        state.time = t0 + dt;
        return tally;
    }

    double const step = carrier_step(state);
    std::int64_t const n = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(dt / step)));
    double const h = dt / static_cast<double>(n);
    for (std::int64_t k = 0; k < n; ++k)
    {
        kinetics_pass(state, h, tally);
        transport_pass(state, h, tally);
        ++tally.substeps;
        if (lit_.empty() && k % 64 == 63 && is_quiescent(state))
        {
            tally.quiescent = true;
            break;
        }
    }
    state.time = t0 + dt;
    return tally;
}

//---------------------------------------------------------------------------//
MacroTally carrier_macrostep(SimulationState& state,
                             ModelRegistry const& reg,
                             std::span<Beam const> beams,
                             double dt,
                             EngineOptions const& options)
{
    TransportEngine engine(reg, options);
    return engine.macrostep(state, beams, dt);
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
