//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Units.hh
//! Unit conventions and conversions.
//!
//! Internal units: length [um], time [s], density [um^-3], power [mW],
//! intensity [mW/um^2], energy [eV], wavelength [nm], cross section [cm^2]
//! (tables only; converted to um^2 at evaluation), potential [V].
//---------------------------------------------------------------------------//
#pragma once

namespace dcsim
{
namespace units
{
//---------------------------------------------------------------------------//
inline constexpr double hc_ev_nm = 1239.84;  //!< [eV nm]
inline constexpr double elementary_charge = 1.602176634e-19;  //!< [C]
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  //!< [F/m]
inline constexpr double boltzmann_ev = 8.617333262e-5;  //!< [eV/K]
inline constexpr double cm2_to_um2 = 1e8;
inline constexpr double cm3_to_um3 = 1e12;
inline constexpr double pi = 3.14159265358979323846;

//! Default host density of diamond [atoms/cm^3]
inline constexpr double diamond_atom_density = 1.763e23;

//! e/eps0 expressed in [V um] so that rho[um^-3] * this is [V/um^2]
inline constexpr double charge_over_eps0_v_um
    = elementary_charge / vacuum_permittivity * 1e6;

//---------------------------------------------------------------------------//
//! Photon energy [eV] for a vacuum wavelength [nm]
constexpr double photon_energy(double wavelength_nm)
{
    return hc_ev_nm / wavelength_nm;
}

//! Wavelength [nm] at which the photon energy equals \c energy_ev
constexpr double threshold_wavelength(double energy_ev)
{
    return hc_ev_nm / energy_ev;
}

//---------------------------------------------------------------------------//
/*!
 * Number density [um^-3] from a number fraction in ppb.
 *
 * \param ppb defect atoms per 1e9 host atoms
 * \param host_atom_density host atoms per cm^3
 */
constexpr double ppb_to_density(double ppb, double host_atom_density)
{
    return ppb * 1e-9 * host_atom_density * 1e-12;
}

//! Photon flux [photons / (um^2 s)] for an intensity [mW/um^2]
constexpr double photon_flux(double intensity, double wavelength_nm)
{
    return intensity * 1e-3
           / (photon_energy(wavelength_nm) * elementary_charge);
}

//---------------------------------------------------------------------------//
}  // namespace units
}  // namespace dcsim
