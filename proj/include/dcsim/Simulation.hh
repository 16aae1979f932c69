//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Simulation.hh
//! Execute a parsed run configuration.
//---------------------------------------------------------------------------//
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "Config.hh"
#include "Protocol.hh"
#include "Stochastic.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
//! Outputs of a telegraph study: reference and remote-illumination runs
struct TelegraphResult
{
    TelegraphTrace reference;
    TelegraphTrace remote;
    std::vector<double> reference_counts;  //!< [kcps] per bin
    std::vector<double> remote_counts;
    Histogram reference_histogram;
    Histogram remote_histogram;
};

struct RunResult
{
    std::vector<ProtocolOutput> outputs;
    std::optional<SimulationState> final_state;
    std::optional<TelegraphResult> telegraph;
};

/*!
 * Run the protocol and telegraph study of a configuration.
 *
 * Seeds for stochastic parts derive from \c config.seed only.
 */
RunResult run_simulation(RunConfig const& config,
                         ProtocolRunner::Observer const& observer = {});

//! Telegraph study alone
TelegraphResult run_telegraph(TelegraphStudy const& study, std::uint64_t seed);

//---------------------------------------------------------------------------//
}  // namespace dcsim
