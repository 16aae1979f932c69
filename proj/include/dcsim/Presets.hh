//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Presets.hh
//! Default parameter set and bundled scenarios.
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "Model.hh"
#include "Photophysics.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
/*!
 * Default SiV / NV / P1 model.
 *
 * Concentrations follow the sample estimates (30 ppb SiV, 0.03 ppb NV).
 * Cross sections, capture coefficients, and diffusion constants are fitted
 * to reproduce the observed regimes; they are not measured values.
 */
ModelDescription default_model();

//! Default model plus the SiV2- state reached by double electron capture
ModelDescription double_capture_model();

//! Default model plus photo-inactive shallow hole traps fed by tunneling
ModelDescription trap_model();

//! 128 x 128 cells at 0.5 um
GridSpec default_grid();

//! 857 nm, 0.29 mW weak SiV0 readout
Beam siv0_readout_beam();
//! Weak visible SiV- readout
Beam sivm_readout_beam();

//---------------------------------------------------------------------------//
struct PresetInfo
{
    std::string name;
    std::string description;
    std::string figure;  //!< figure the scenario reproduces
};

std::vector<PresetInfo> const& preset_catalog();

/*!
 * Configuration document of a bundled scenario.
 *
 * \throws Error(ConfigError) for unknown names.
 */
nlohmann::json preset_document(std::string const& name);

//! Whether a name refers to a bundled scenario
bool is_preset(std::string const& name);

//---------------------------------------------------------------------------//
}  // namespace dcsim
