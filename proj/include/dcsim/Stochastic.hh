//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Stochastic.hh
//! Exact stochastic two-state telegraph emitter.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dcsim
{
//---------------------------------------------------------------------------//
//! Interval during which remote illumination modifies the switching rates
struct RemoteWindow
{
    double start{0};  //!< [s]
    double end{0};  //!< [s]
};

/*!
 * Single emitter switching between a bright and a dark charge state.
 *
 * Inside a remote window each rate is multiplied by its modifier. The
 * modifier direction is per-center configuration.
 */
struct TelegraphModel
{
    double k_bd{1};  //!< bright -> dark [1/s]
    double k_db{1};  //!< dark -> bright [1/s]
    double bright_rate{10};  //!< [kcps]
    double dark_rate{0};  //!< [kcps]
    double modifier_bd{1};
    double modifier_db{1};
    std::vector<RemoteWindow> remote;
    bool start_bright{true};
};

void validate_telegraph(TelegraphModel const& model);

/*!
 * Piecewise-constant state trajectory.
 *
 * \c times[0] is zero and each entry marks the start of a dwell in
 * \c bright[i]; the final dwell ends at \c duration.
 */
struct TelegraphTrace
{
    std::vector<double> times;
    std::vector<char> bright;
    double duration{0};

    std::size_t num_switches() const
    {
        return times.empty() ? 0 : times.size() - 1;
    }
};

//! Gillespie simulation with piecewise-constant rates
TelegraphTrace
gillespie_simulate(TelegraphModel const& model, double duration, std::uint64_t seed);

//! Complete dwell durations in the given state (the final dwell is excluded)
std::vector<double> dwell_times(TelegraphTrace const& trace, bool bright);

//! Time-weighted bright fraction
double bright_fraction(TelegraphTrace const& trace);

//---------------------------------------------------------------------------//
struct OccupancyOptions
{
    std::size_t min_events{10};
    std::size_t blocks{20};
    std::size_t resamples{1000};
    std::uint64_t seed{0};
};

struct OccupancyEstimate
{
    double fraction{0};
    double std_error{0};  //!< block bootstrap
    std::size_t events{0};
};

/*!
 * Bright occupancy with a block-bootstrap standard error.
 *
 * \throws Error(InsufficientEvents) with fewer than \c min_events switches.
 */
OccupancyEstimate estimate_occupancy(TelegraphTrace const& trace,
                                     OccupancyOptions const& options = {});

//---------------------------------------------------------------------------//
/*!
 * Poisson photon counts per time bin, reported as rates [kcps].
 *
 * The mean count of a bin is the integral of the state brightness over it.
 */
std::vector<double> binned_counts(TelegraphTrace const& trace,
                                  TelegraphModel const& model,
                                  double bin,
                                  std::uint64_t seed);

struct Histogram
{
    double bin_width{0};  //!< [kcps]
    std::vector<std::size_t> counts;  //!< bin k covers [k w, (k + 1) w)

    double center(std::size_t k) const { return (k + 0.5) * bin_width; }
    std::size_t total() const;
};

Histogram histogram(std::span<double const> values, double bin_width);

//! Fraction of histogram mass at or above the split rate [kcps]
double upper_mode_mass(Histogram const& h, double split);

//---------------------------------------------------------------------------//
/*!
 * Two-state telegraph study: a reference trace and one with remote
 * illumination, each binned and histogrammed.
 */
struct TelegraphStudy
{
    TelegraphModel model;
    double duration{100};  //!< [s]
    double bin{0.01};  //!< [s]
    double histogram_bin{1};  //!< [kcps]
    //! Remote window applied in the second run; empty means whole duration
    std::vector<RemoteWindow> remote;
};

//---------------------------------------------------------------------------//
//! One-sample Kolmogorov-Smirnov statistic against an exponential CDF
double ks_statistic_exponential(std::span<double const> sample, double rate);

//! Asymptotic Kolmogorov p-value for statistic \c d with \c n samples
double ks_pvalue(double d, std::size_t n);

//---------------------------------------------------------------------------//
}  // namespace dcsim
