//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Photophysics.cc
//---------------------------------------------------------------------------//
#include "dcsim/Photophysics.hh"

#include <algorithm>
#include <cmath>

#include "dcsim/Error.hh"
#include "dcsim/Units.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
void validate_beam(Beam const& beam)
{
    require(std::isfinite(beam.wavelength) && beam.wavelength > 0,
            ErrorCode::invalid_value,
            "beam wavelength must be positive");
    require(std::isfinite(beam.power) && beam.power >= 0,
            ErrorCode::invalid_value,
            "beam power must be non-negative");
    require(std::isfinite(beam.waist) && beam.waist > 0,
            ErrorCode::invalid_value,
            "beam waist must be positive");
    require(std::isfinite(beam.x) && std::isfinite(beam.y),
            ErrorCode::invalid_value,
            "beam center must be finite");
}

double beam_peak_intensity(Beam const& beam)
{
    return 2 * beam.power / (units::pi * beam.waist * beam.waist);
}

double beam_intensity(Beam const& beam, double x, double y)
{
    double const dx = x - beam.x;
    double const dy = y - beam.y;
    double const r2 = dx * dx + dy * dy;
    return beam_peak_intensity(beam)
           * std::exp(-2 * r2 / (beam.waist * beam.waist));
}

//---------------------------------------------------------------------------//
double
photo_rate(PhotoTransition const& tr, double intensity, double wavelength_nm)
{
    if (intensity <= 0)
        return 0;
    if (units::photon_energy(wavelength_nm) < tr.threshold_energy)
        return 0;
    double const sigma = tr.cross_section(wavelength_nm) * units::cm2_to_um2;
    double rate = sigma * units::photon_flux(intensity, wavelength_nm);
    if (tr.two_photon)
        rate *= intensity / tr.reference_intensity;
    return rate;
}

double tunneling_gate(TunnelingChannel const& ch,
                      std::span<LocalIllumination const> light)
{
    double in_band = 0;
    for (auto const& l : light)
    {
        if (l.wavelength >= ch.band_min && l.wavelength <= ch.band_max)
            in_band += l.intensity;
    }
    if (in_band <= 0)
        return 0;
    return in_band / (in_band + ch.saturation_intensity);
}

//---------------------------------------------------------------------------//
KineticsTally& KineticsTally::operator+=(KineticsTally const& other)
{
    for (std::size_t c = 0; c < 2; ++c)
    {
        emitted[c] += other.emitted[c];
        captured[c] += other.captured[c];
    }
    defect_charge_change += other.defect_charge_change;
    subcycles += other.subcycles;
    clamps += other.clamps;
    return *this;
}

//---------------------------------------------------------------------------//
// KINETICS ENGINE
//---------------------------------------------------------------------------//
KineticsEngine::KineticsEngine(ModelRegistry const& reg,
                               KineticsOptions options)
    : options_(options), num_slots_(reg.num_slots())
{
    require(options_.stability_bound > 0 && options_.stability_bound <= 1,
            ErrorCode::invalid_value,
            "kinetics stability bound must be in (0, 1]");
    require(options_.max_subcycles > 0,
            ErrorCode::invalid_value,
            "kinetics sub-cycle limit must be positive");

    std::size_t const ns = num_slots_;
    auto q = [&reg](std::size_t slot) {
        return static_cast<double>(reg.slot(slot).charge);
    };
    auto carrier = [ns](CarrierKind c) { return ns + carrier_index(c); };

    for (auto const& p : reg.photo())
    {
        photo_.push_back({p.from, p.to, carrier(p.emitted), p.spec});
        Transfer t{p.from, p.to};
        t.produced = carrier(p.emitted);
        t.coefficient = 1;
        t.charge_change = q(p.to) - q(p.from);
        transfers_.push_back(t);
    }
    for (auto const& tn : reg.tunneling())
    {
        tunnel_.push_back({tn.donor_from,
                           tn.donor_to,
                           tn.trap_empty,
                           tn.trap_filled,
                           tn.spec.coefficient,
                           tn.spec});
        Transfer t{tn.donor_from, tn.donor_to, tn.trap_empty, tn.trap_filled};
        t.coefficient = tn.spec.coefficient;
        t.charge_change = q(tn.donor_to) - q(tn.donor_from)
                          + q(tn.trap_filled) - q(tn.trap_empty);
        transfers_.push_back(t);
    }
    for (auto const& c : reg.captures())
    {
        Transfer t{c.from, c.to, carrier(c.captured)};
        t.coefficient = c.coefficient;
        t.charge_change = q(c.to) - q(c.from);
        transfers_.push_back(t);
    }
    release_begin_ = transfers_.size();
    for (auto const& r : reg.releases())
    {
        Transfer t{r.from, r.to};
        t.produced = carrier(r.emitted);
        t.coefficient = r.rate;
        t.charge_change = q(r.to) - q(r.from);
        transfers_.push_back(t);
    }

    for (std::size_t i = nphoto_tunnel(); i < transfers_.size(); ++i)
    {
        if (transfers_[i].coefficient > 0)
            dark_.push_back({transfers_[i], transfers_[i].coefficient});
    }
    active_.reserve(transfers_.size());
    pool_.resize(ns + 2);
    outflow_.resize(ns + 2);
    scale_.resize(ns + 2);
    rate_.resize(transfers_.size());
    flux_.resize(transfers_.size());
}

//---------------------------------------------------------------------------//
void KineticsEngine::local_rates(std::span<LocalIllumination const> light,
                                 std::span<double> photo_rates,
                                 std::span<double> gates) const
{
    for (std::size_t i = 0; i < photo_.size(); ++i)
    {
        double k = 0;
        for (auto const& l : light)
            k += photo_rate(photo_[i].spec, l.intensity, l.wavelength);
        photo_rates[i] = k;
    }
    for (std::size_t i = 0; i < tunnel_.size(); ++i)
        gates[i] = tunneling_gate(tunnel_[i].spec, light);
}

bool KineticsEngine::has_spontaneous(std::span<double const> density) const
{
    for (std::size_t i = release_begin_; i < transfers_.size(); ++i)
    {
        if (density[transfers_[i].a_from] > 0)
            return true;
    }
    return false;
}

//---------------------------------------------------------------------------//
KineticsTally KineticsEngine::advance(std::span<double> density,
                                      double& electrons,
                                      double& holes,
                                      std::span<double const> photo_rates,
                                      std::span<double const> gates,
                                      double dt)
{
    std::size_t const ns = num_slots_;
    std::size_t const np = ns + 2;
    KineticsTally tally;

    // Channels with a nonzero coefficient under this light
    std::vector<Active> const* active = &dark_;
    if (!photo_rates.empty() || !gates.empty())
    {
        active_.clear();
        std::size_t const nphoto = photo_.size();
        for (std::size_t i = 0; i < nphoto_tunnel(); ++i)
        {
            double k = 0;
            if (i < nphoto)
                k = photo_rates.empty() ? 0.0 : photo_rates[i];
            else if (!gates.empty())
                k = transfers_[i].coefficient * gates[i - nphoto];
            if (k > 0)
                active_.push_back({transfers_[i], k});
        }
        active_.insert(active_.end(), dark_.begin(), dark_.end());
        active = &active_;
    }
    auto const& act = *active;
    if (act.empty())
        return tally;

    double* __restrict const pool = pool_.data();
    double* __restrict const out = outflow_.data();
    double* __restrict const rate = rate_.data();
    double* __restrict const flux = flux_.data();
    std::copy(density.begin(), density.end(), pool);
    pool[ns] = electrons;
    pool[ns + 1] = holes;

    auto const none = Transfer::none;
    std::size_t const na = act.size();
    double remaining = dt;
    while (remaining > 0)
    {
        // Per-event rate of each channel and total outflow rate of each pool
        std::fill(out, out + np, 0.0);
        for (std::size_t f = 0; f < na; ++f)
        {
            Transfer const& t = act[f].tr;
            double r = act[f].k;
            if (t.b_from != none)
            {
                out[t.b_from] += r * pool[t.a_from];
                r *= pool[t.b_from];
            }
            out[t.a_from] += r;
            rate[f] = r;
        }
        double const max_rate = *std::max_element(out, out + np);
        if (!(max_rate > 0))
            break;

        double h = remaining;
        double const needed = remaining * max_rate / options_.stability_bound;
        if (needed > 1)
        {
            if (tally.subcycles + needed
                > static_cast<double>(options_.max_subcycles))
            {
                throw Error(ErrorCode::stability_violation,
                            "kinetics needs more than "
                                + std::to_string(options_.max_subcycles)
                                + " sub-cycles");
            }
            h = remaining / std::ceil(needed);
        }

        // Requested transfers from the current state
        std::fill(out, out + np, 0.0);
        for (std::size_t f = 0; f < na; ++f)
        {
            Transfer const& t = act[f].tr;
            double const x = rate[f] * pool[t.a_from] * h;
            out[t.a_from] += x;
            if (t.b_from != none)
                out[t.b_from] += x;
            flux[f] = x;
        }

        // Clamp overdrawn pools
        bool clamped = false;
        for (std::size_t p = 0; p < np; ++p)
        {
            if (out[p] > pool[p])
            {
                clamped = true;
                break;
            }
        }
        if (clamped)
        {
            ++tally.clamps;
            for (std::size_t p = 0; p < np; ++p)
                scale_[p] = out[p] > pool[p] ? pool[p] / out[p] : 1.0;
            for (std::size_t f = 0; f < na; ++f)
            {
                Transfer const& t = act[f].tr;
                double s = scale_[t.a_from];
                if (t.b_from != none)
                    s = std::min(s, scale_[t.b_from]);
                flux[f] *= s;
            }
        }

        // Apply transfers
        for (std::size_t f = 0; f < na; ++f)
        {
            Transfer const& t = act[f].tr;
            double const x = flux[f];
            pool[t.a_from] -= x;
            pool[t.a_to] += x;
            if (t.b_from != none)
            {
                pool[t.b_from] -= x;
                if (t.b_to != none)
                    pool[t.b_to] += x;
                else
                    tally.captured[t.b_from - ns] += x;
            }
            if (t.produced != none)
            {
                pool[t.produced] += x;
                tally.emitted[t.produced - ns] += x;
            }
            tally.defect_charge_change += x * t.charge_change;
        }
        if (clamped)
        {
            for (std::size_t p = 0; p < np; ++p)
                pool[p] = std::max(pool[p], 0.0);
        }

        ++tally.subcycles;
        remaining = (h == remaining) ? 0 : remaining - h;
    }

    std::copy(pool, pool + ns, density.begin());
    electrons = pool[ns];
    holes = pool[ns + 1];
    return tally;
}

//---------------------------------------------------------------------------//
KineticsTally kinetics_substep(CellKinetics& cell,
                               double dt,
                               ModelRegistry const& reg,
                               KineticsOptions const& options)
{
    require(cell.density.size() == reg.num_slots(),
            ErrorCode::invalid_value,
            "cell density does not match the registry");
    KineticsEngine engine(reg, options);
    std::vector<double> photo(engine.num_photo());
    std::vector<double> gates(engine.num_tunneling());
    engine.local_rates(cell.light, photo, gates);
    return engine.advance(
        cell.density, cell.electrons, cell.holes, photo, gates, dt);
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
