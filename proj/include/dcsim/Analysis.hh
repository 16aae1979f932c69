//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Analysis.hh
//! Image profiles, edge detection, and curve fits.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "Protocol.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
// PROFILES AND EDGES
//---------------------------------------------------------------------------//
struct RadialProfile
{
    double cx{0};  //!< [um]
    double cy{0};
    double bin_width{0};
    std::vector<double> radii;  //!< bin centers [um]
    std::vector<double> mean;  //!< [kcps]
    std::vector<std::size_t> pixels;
};

/*!
 * Azimuthal average in annuli of width \c bin_width around (cx, cy).
 *
 * Pixel k joins bin floor(r / bin_width). Bins extend to the farthest pixel.
 *
 * \throws Error(EmptyAnnulus) if the bin width is below the pixel pitch or
 *   any bin is empty; Error(InvalidValue) if the center is outside.
 */
RadialProfile
radial_profile(ReadoutImage const& image, double cx, double cy, double bin_width);

//! Edge threshold: absolute count rate or fraction of the profile maximum
struct EdgeThreshold
{
    enum class Kind
    {
        absolute,
        fraction
    };
    Kind kind{Kind::absolute};
    double value{0};

    static EdgeThreshold kcps(double v) { return {Kind::absolute, v}; }
    static EdgeThreshold of_peak(double f) { return {Kind::fraction, f}; }
};

/*!
 * Outermost radius where the profile falls through the threshold.
 *
 * Linear interpolation between the bracketing bins.
 *
 * \throws Error(NoCrossing) if no bin at or above threshold is followed by
 *   one below it.
 */
double torus_edge_radius(RadialProfile const& profile, EdgeThreshold threshold);

//---------------------------------------------------------------------------//
// FITS
//---------------------------------------------------------------------------//
/*!
 * sigma(t) = sqrt(D) t^(1/n), fitted as a line in log-log space.
 */
struct PowerLawFit
{
    double D{0};  //!< [um^2 s^(-2/n)]
    double n{0};
    double n_stderr{0};
    double residual_norm{0};  //!< of log(sigma)
    bool fixed_n{false};
    std::size_t points{0};
};

/*!
 * \param fixed_n constrain the exponent (e.g. 2 for Brownian growth)
 * \throws Error(DegenerateInput) with fewer than 3 points, non-positive
 *   values, or no spread in time.
 */
PowerLawFit fit_power_law(std::span<double const> t,
                          std::span<double const> sigma,
                          std::optional<double> fixed_n = {});

/*!
 * y(t) = A1 exp(-k1 t) + A2 exp(-k2 t) + offset with k1 >= k2.
 */
struct BiExpFit
{
    double A1{0};
    double k1{0};
    double A2{0};
    double k2{0};
    double offset{0};
    double residual_norm{0};
    //! A2 / A1 < 1e-3: refit as a single exponential (A2 = k2 = 0)
    bool single_exponential{false};
    int iterations{0};
};

struct BiExpOptions
{
    double relative_tolerance{1e-9};
    int max_iterations{500};
    int grid_points{24};  //!< per rate in the multi-start grid
};

/*!
 * Multi-start grid over (k1, k2) with linear amplitudes, refined by damped
 * Gauss-Newton on all five parameters.
 *
 * \throws Error(DegenerateInput) with fewer than 6 points;
 *   Error(NonConvergence) if refinement fails to reduce the residual.
 */
BiExpFit fit_biexponential(std::span<double const> t,
                           std::span<double const> y,
                           BiExpOptions const& options = {});

struct LinearFit
{
    double slope{0};
    double intercept{0};
    double r2{0};
    double slope_stderr{0};
    double intercept_stderr{0};
};

//! Ordinary least squares; \throws Error(DegenerateInput)
LinearFit fit_linear(std::span<double const> x, std::span<double const> y);

//! Ionization rate against excitation power
inline LinearFit
fit_rate_vs_power(std::span<double const> powers, std::span<double const> rates)
{
    return fit_linear(powers, rates);
}

//---------------------------------------------------------------------------//
// CORRELATION
//---------------------------------------------------------------------------//
/*!
 * Pearson correlation over masked pixels.
 *
 * \throws Error(DegenerateInput) for shape mismatch or fewer than 10 masked
 *   pixels; Error(ZeroVariance) if either image is constant on the mask.
 */
double anticorrelation(std::span<double const> a,
                       std::span<double const> b,
                       std::span<char const> mask);

double anticorrelation(ReadoutImage const& a,
                       ReadoutImage const& b,
                       std::span<char const> mask);

//! Pixels with center distance in [r_inner, r_outer]
std::vector<char> annulus_mask(ReadoutImage const& image,
                               double cx,
                               double cy,
                               double r_inner,
                               double r_outer);

//---------------------------------------------------------------------------//
}  // namespace dcsim
