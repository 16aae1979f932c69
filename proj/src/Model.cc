//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Model.cc
//---------------------------------------------------------------------------//
#include "dcsim/Model.hh"

#include <algorithm>
#include <cmath>
#include <set>

#include "dcsim/Error.hh"
#include "dcsim/Units.hh"

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
bool is_finite_nonneg(double v)
{
    return std::isfinite(v) && v >= 0;
}

std::string where(SpeciesSpec const& sp, std::string const& what)
{
    return "species '" + sp.name + "': " + what;
}

//---------------------------------------------------------------------------//
/*!
 * Check a table against the threshold and append a zero breakpoint at the
 * threshold wavelength so the lookup vanishes for all longer wavelengths.
 */
CrossSectionTable gate_table(CrossSectionTable const& table,
                             double threshold_ev,
                             std::string const& context)
{
    double const cutoff = units::threshold_wavelength(threshold_ev);
    std::vector<CrossSectionTable::Point> kept;
    for (auto const& [nm, sigma] : table.points())
    {
        require(std::isfinite(nm) && nm > 0,
                ErrorCode::invalid_value,
                context + ": wavelength must be positive");
        require(is_finite_nonneg(sigma),
                ErrorCode::negative_rate,
                context + ": cross section must be non-negative");
        if (nm >= cutoff)
        {
            require(sigma == 0,
                    ErrorCode::threshold_violation,
                    context + ": cross section at " + std::to_string(nm)
                        + " nm (" + std::to_string(units::photon_energy(nm))
                        + " eV) is nonzero below the "
                        + std::to_string(threshold_ev) + " eV threshold");
            continue;
        }
        kept.push_back({nm, sigma});
    }
    kept.push_back({cutoff, 0.0});
    return CrossSectionTable(std::move(kept));
}

}  // namespace

//---------------------------------------------------------------------------//
// CROSS SECTION TABLE
//---------------------------------------------------------------------------//
CrossSectionTable::CrossSectionTable(std::vector<Point> points)
    : points_(std::move(points))
{
    std::stable_sort(
        points_.begin(), points_.end(), [](Point const& a, Point const& b) {
            return a.first < b.first;
        });
}

double CrossSectionTable::operator()(double wavelength_nm) const
{
    if (points_.empty())
        return 0;
    // Last point with wavelength <= query
    auto it = std::upper_bound(
        points_.begin(),
        points_.end(),
        wavelength_nm,
        [](double nm, Point const& p) { return nm < p.first; });
    if (it == points_.begin())
        return points_.front().second;
    return std::prev(it)->second;
}

//---------------------------------------------------------------------------//
// GRID
//---------------------------------------------------------------------------//
void validate_grid(GridSpec const& grid)
{
    require(grid.nx >= 8 && grid.ny >= 8,
            ErrorCode::invalid_value,
            "grid needs at least 8x8 cells");
    require(std::isfinite(grid.dx) && grid.dx > 0,
            ErrorCode::invalid_value,
            "grid spacing must be positive");
    require(std::isfinite(grid.host_atom_density)
                && grid.host_atom_density > 0,
            ErrorCode::invalid_value,
            "host atom density must be positive");
    require(grid.geometry_dimension == 2,
            ErrorCode::invalid_value,
            "only 2-D (thin slab) geometry is supported");
}

//---------------------------------------------------------------------------//
// REGISTRY
//---------------------------------------------------------------------------//
std::optional<std::size_t>
ModelRegistry::find_species(std::string const& name) const
{
    for (std::size_t s = 0; s < desc_.species.size(); ++s)
    {
        if (desc_.species[s].name == name)
            return s;
    }
    return std::nullopt;
}

std::optional<std::size_t>
ModelRegistry::find_slot(std::string const& species,
                         std::string const& label) const
{
    for (std::size_t i = 0; i < slots_.size(); ++i)
    {
        if (slots_[i].species_name == species && slots_[i].label == label)
            return i;
    }
    return std::nullopt;
}

std::optional<std::size_t>
ModelRegistry::find_label(std::string const& label) const
{
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < slots_.size(); ++i)
    {
        if (slots_[i].label == label)
        {
            if (found)
                return std::nullopt;
            found = i;
        }
    }
    return found;
}

std::vector<double> ModelRegistry::brightness(std::string const& channel) const
{
    std::vector<double> result(slots_.size(), 0.0);
    for (std::size_t i = 0; i < slots_.size(); ++i)
    {
        auto const& st = desc_.species[slots_[i].species].states[slots_[i].state];
        if (auto it = st.brightness.find(channel); it != st.brightness.end())
            result[i] = it->second;
    }
    return result;
}

//---------------------------------------------------------------------------//
ModelRegistry validate_model(ModelDescription desc)
{
    ModelRegistry reg;

    auto const& tr = desc.transport;
    require(is_finite_nonneg(tr.diffusion_electron)
                && is_finite_nonneg(tr.diffusion_hole),
            ErrorCode::negative_rate,
            "diffusion coefficients must be non-negative");
    require(!tr.mobility_electron || is_finite_nonneg(*tr.mobility_electron),
            ErrorCode::negative_rate,
            "electron mobility must be non-negative");
    require(!tr.mobility_hole || is_finite_nonneg(*tr.mobility_hole),
            ErrorCode::negative_rate,
            "hole mobility must be non-negative");
    require(std::isfinite(tr.permittivity) && tr.permittivity > 0,
            ErrorCode::invalid_value,
            "relative permittivity must be positive");

    std::set<std::string> species_names;
    std::set<std::string> channels;
    for (std::size_t s = 0; s < desc.species.size(); ++s)
    {
        SpeciesSpec& sp = desc.species[s];
        require(!sp.name.empty(),
                ErrorCode::invalid_value,
                "species name must not be empty");
        require(species_names.insert(sp.name).second,
                ErrorCode::duplicate_label,
                "duplicate species '" + sp.name + "'");
        require(is_finite_nonneg(sp.total_concentration),
                ErrorCode::invalid_value,
                where(sp, "concentration must be non-negative"));
        require(!sp.states.empty(),
                ErrorCode::invalid_value,
                where(sp, "needs at least one state"));

        std::set<std::string> labels;
        for (auto const& st : sp.states)
        {
            require(!st.label.empty(),
                    ErrorCode::invalid_value,
                    where(sp, "state label must not be empty"));
            require(labels.insert(st.label).second,
                    ErrorCode::duplicate_label,
                    where(sp, "duplicate state '" + st.label + "'"));
            for (auto const& [ch, b] : st.brightness)
            {
                require(is_finite_nonneg(b),
                        ErrorCode::negative_rate,
                        where(sp, "brightness of '" + st.label
                                      + "' must be non-negative"));
                channels.insert(ch);
            }
        }

        auto state_index = [&](std::string const& label) {
            for (std::size_t k = 0; k < sp.states.size(); ++k)
            {
                if (sp.states[k].label == label)
                    return k;
            }
            throw Error(ErrorCode::unknown_state,
                        where(sp, "unknown state '" + label + "'"));
        };

        if (sp.initial_state.empty())
            sp.initial_state = sp.states.front().label;
        std::size_t const initial = state_index(sp.initial_state);

        if (sp.is_trap)
        {
            require(sp.states.size() == 2,
                    ErrorCode::invalid_value,
                    where(sp, "traps need exactly two states"));
            require(std::isfinite(sp.release_lifetime)
                        && sp.release_lifetime > 0,
                    ErrorCode::invalid_value,
                    where(sp, "trap release lifetime must be positive"));
            int const dq = sp.states[1].relative_charge
                           - sp.states[0].relative_charge;
            require(dq == 1 || dq == -1,
                    ErrorCode::charge_mismatch,
                    where(sp, "filled trap must differ by one charge"));
        }

        std::size_t const offset = reg.slots_.size();
        reg.offsets_.push_back(offset);
        reg.initial_.push_back(offset + initial);
        for (std::size_t k = 0; k < sp.states.size(); ++k)
        {
            reg.slots_.push_back({s,
                                  k,
                                  sp.name,
                                  sp.states[k].label,
                                  sp.states[k].relative_charge});
        }

        for (auto& pt : sp.photo_transitions)
        {
            std::string const ctx
                = where(sp, "photo transition " + pt.from_state + "->"
                                + pt.to_state);
            auto from = state_index(pt.from_state);
            auto to = state_index(pt.to_state);
            require(from != to,
                    ErrorCode::invalid_value,
                    ctx + ": endpoints must differ");
            require(std::isfinite(pt.threshold_energy)
                        && pt.threshold_energy > 0,
                    ErrorCode::invalid_value,
                    ctx + ": threshold energy must be positive");
            require(std::isfinite(pt.reference_intensity)
                        && pt.reference_intensity > 0,
                    ErrorCode::invalid_value,
                    ctx + ": reference intensity must be positive");
            require(sp.states[from].relative_charge
                        == sp.states[to].relative_charge
                               + charge_of(pt.emitted),
                    ErrorCode::charge_mismatch,
                    ctx + ": charge change must match the emitted carrier");
            pt.cross_section
                = gate_table(pt.cross_section, pt.threshold_energy, ctx);
            reg.photo_.push_back({offset + from, offset + to, pt.emitted, pt});
        }

        for (auto const& cc : sp.captures)
        {
            std::string const ctx = where(
                sp, "capture " + cc.from_state + "->" + cc.to_state);
            auto from = state_index(cc.from_state);
            auto to = state_index(cc.to_state);
            require(from != to,
                    ErrorCode::invalid_value,
                    ctx + ": endpoints must differ");
            require(is_finite_nonneg(cc.coefficient),
                    ErrorCode::negative_rate,
                    ctx + ": coefficient must be non-negative");
            require(sp.states[from].relative_charge + charge_of(cc.captured)
                        == sp.states[to].relative_charge,
                    ErrorCode::charge_mismatch,
                    ctx + ": charge change must match the captured carrier");
            reg.captures_.push_back(
                {offset + from, offset + to, cc.captured, cc.coefficient});
        }

        if (sp.is_trap)
        {
            int const dq = sp.states[1].relative_charge
                           - sp.states[0].relative_charge;
            reg.releases_.push_back(
                {offset + 1,
                 offset + 0,
                 dq > 0 ? CarrierKind::hole : CarrierKind::electron,
                 1.0 / sp.release_lifetime});
        }
    }

    for (auto const& tc : desc.tunneling)
    {
        std::string const ctx = "tunneling " + tc.donor_species + ":"
                                + tc.from_state + "->" + tc.to_state + " into "
                                + tc.trap_species;
        auto find = [&](std::string const& species) -> std::size_t {
            for (std::size_t s = 0; s < desc.species.size(); ++s)
            {
                if (desc.species[s].name == species)
                    return s;
            }
            throw Error(ErrorCode::unknown_state,
                        ctx + ": unknown species '" + species + "'");
        };
        auto donor = find(tc.donor_species);
        auto trap = find(tc.trap_species);
        require(desc.species[trap].is_trap,
                ErrorCode::invalid_value,
                ctx + ": acceptor must be a trap species");
        require(donor != trap,
                ErrorCode::invalid_value,
                ctx + ": donor and trap must differ");
        require(is_finite_nonneg(tc.coefficient),
                ErrorCode::negative_rate,
                ctx + ": coefficient must be non-negative");
        require(std::isfinite(tc.saturation_intensity)
                    && tc.saturation_intensity > 0,
                ErrorCode::invalid_value,
                ctx + ": saturation intensity must be positive");
        require(tc.band_min <= tc.band_max,
                ErrorCode::invalid_value,
                ctx + ": empty excitation band");

        auto const& dsp = desc.species[donor];
        auto idx = [&](std::string const& label) -> std::size_t {
            for (std::size_t k = 0; k < dsp.states.size(); ++k)
            {
                if (dsp.states[k].label == label)
                    return k;
            }
            throw Error(ErrorCode::unknown_state,
                        ctx + ": unknown state '" + label + "'");
        };
        auto from = idx(tc.from_state);
        auto to = idx(tc.to_state);
        require(from != to,
                ErrorCode::invalid_value,
                ctx + ": endpoints must differ");
        auto const& tsp = desc.species[trap];
        int const donor_dq = dsp.states[to].relative_charge
                             - dsp.states[from].relative_charge;
        int const trap_dq = tsp.states[1].relative_charge
                            - tsp.states[0].relative_charge;
        require(donor_dq + trap_dq == 0,
                ErrorCode::charge_mismatch,
                ctx + ": donor and trap charge changes must cancel");
        reg.tunneling_.push_back({reg.offsets_[donor] + from,
                                  reg.offsets_[donor] + to,
                                  reg.offsets_[trap] + 0,
                                  reg.offsets_[trap] + 1,
                                  tc});
    }

    reg.channels_.assign(channels.begin(), channels.end());
    reg.desc_ = std::move(desc);
    return reg;
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
