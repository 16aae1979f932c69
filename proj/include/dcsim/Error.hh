//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Error.hh
//---------------------------------------------------------------------------//
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcsim
{
//---------------------------------------------------------------------------//
/*!
 * Stable, machine-readable error codes.
 *
 * The string form (see \c to_string) is part of the CLI error report and
 * must not change between releases.
 */
enum class ErrorCode
{
    // Model validation
    unknown_state,
    negative_rate,
    threshold_violation,
    duplicate_label,
    invalid_value,
    charge_mismatch,
    // Engine
    stability_violation,
    non_convergence,
    step_out_of_bounds,
    unknown_channel,
    // Analysis
    empty_annulus,
    no_crossing,
    degenerate_input,
    zero_variance,
    insufficient_events,
    // Front end
    config_error,
    io_error,
    missing_artifact,
};

//---------------------------------------------------------------------------//
constexpr std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::unknown_state: return "UnknownState";
        case ErrorCode::negative_rate: return "NegativeRate";
        case ErrorCode::threshold_violation: return "ThresholdViolation";
        case ErrorCode::duplicate_label: return "DuplicateLabel";
        case ErrorCode::invalid_value: return "InvalidValue";
        case ErrorCode::charge_mismatch: return "ChargeMismatch";
        case ErrorCode::stability_violation: return "StabilityViolation";
        case ErrorCode::non_convergence: return "NonConvergence";
        case ErrorCode::step_out_of_bounds: return "StepOutOfBounds";
        case ErrorCode::unknown_channel: return "UnknownChannel";
        case ErrorCode::empty_annulus: return "EmptyAnnulus";
        case ErrorCode::no_crossing: return "NoCrossing";
        case ErrorCode::degenerate_input: return "DegenerateInput";
        case ErrorCode::zero_variance: return "ZeroVariance";
        case ErrorCode::insufficient_events: return "InsufficientEvents";
        case ErrorCode::config_error: return "ConfigError";
        case ErrorCode::io_error: return "IOError";
        case ErrorCode::missing_artifact: return "MissingArtifact";
    }
    return "Unknown";
}

//---------------------------------------------------------------------------//
/*!
 * Exception carrying an \c ErrorCode.
 */
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

//---------------------------------------------------------------------------//
//! Throw an \c Error unless the condition holds
inline void
require(bool condition, ErrorCode code, std::string const& what)
{
    if (!condition)
    {
        throw Error(code, what);
    }
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
