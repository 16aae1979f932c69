//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Simulation.cc
//---------------------------------------------------------------------------//
#include "dcsim/Simulation.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
TelegraphResult run_telegraph(TelegraphStudy const& study, std::uint64_t seed)
{
    TelegraphResult out;
    TelegraphModel reference = study.model;
    reference.remote.clear();
    TelegraphModel remote = study.model;
    remote.remote = study.remote.empty()
                        ? std::vector<RemoteWindow>{{0, study.duration}}
                        : study.remote;

    // Independent streams per run and per purpose
    out.reference = gillespie_simulate(reference, study.duration, seed);
    out.remote = gillespie_simulate(remote, study.duration, seed + 1);
    out.reference_counts
        = binned_counts(out.reference, reference, study.bin, seed + 2);
    out.remote_counts = binned_counts(out.remote, remote, study.bin, seed + 3);
    out.reference_histogram
        = histogram(out.reference_counts, study.histogram_bin);
    out.remote_histogram = histogram(out.remote_counts, study.histogram_bin);
    return out;
}

//---------------------------------------------------------------------------//
RunResult
run_simulation(RunConfig const& config, ProtocolRunner::Observer const& observer)
{
    RunResult result;
    if (!config.protocol.empty())
    {
        ModelRegistry const reg = validate_model(config.model);
        SimulationState state
            = make_initial_state(reg, config.grid, config.preparations);
        ProtocolRunner runner(reg, config.engine);
        for (auto const& step : config.protocol)
        {
            runner.execute(state, step, [&](ProtocolOutput const& o) {
                if (observer)
                    observer(o);
                result.outputs.push_back(o);
            });
        }
        result.final_state = std::move(state);
    }
    if (config.telegraph)
        result.telegraph = run_telegraph(*config.telegraph, config.seed);
    return result;
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
