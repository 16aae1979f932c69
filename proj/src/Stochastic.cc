//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Stochastic.cc
//---------------------------------------------------------------------------//
#include "dcsim/Stochastic.hh"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dcsim/Error.hh"

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
bool in_window(std::vector<RemoteWindow> const& windows, double t)
{
    return std::any_of(windows.begin(), windows.end(), [t](auto const& w) {
        return t >= w.start && t < w.end;
    });
}

//! Earliest window edge strictly after t, or \c limit
double next_edge(std::vector<RemoteWindow> const& windows, double t, double limit)
{
    double edge = limit;
    for (auto const& w : windows)
    {
        if (w.start > t)
            edge = std::min(edge, w.start);
        if (w.end > t)
            edge = std::min(edge, w.end);
    }
    return edge;
}

}  // namespace

//---------------------------------------------------------------------------//
void validate_telegraph(TelegraphModel const& m)
{
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0; };
    require(finite_nonneg(m.k_bd) && finite_nonneg(m.k_db),
            ErrorCode::negative_rate,
            "telegraph switching rates must be non-negative");
    require(finite_nonneg(m.modifier_bd) && finite_nonneg(m.modifier_db),
            ErrorCode::negative_rate,
            "telegraph rate modifiers must be non-negative");
    require(finite_nonneg(m.dark_rate) && m.bright_rate > m.dark_rate,
            ErrorCode::invalid_value,
            "telegraph brightness must satisfy bright > dark >= 0");
    for (auto const& w : m.remote)
    {
        require(w.end >= w.start,
                ErrorCode::invalid_value,
                "remote window end precedes its start");
    }
}

//---------------------------------------------------------------------------//
TelegraphTrace
gillespie_simulate(TelegraphModel const& model, double duration, std::uint64_t seed)
{
    validate_telegraph(model);
    require(std::isfinite(duration) && duration > 0,
            ErrorCode::invalid_value,
            "telegraph duration must be positive");

    std::mt19937_64 rng(seed);
    TelegraphTrace trace;
    trace.duration = duration;
    bool bright = model.start_bright;
    trace.times.push_back(0);
    trace.bright.push_back(bright);

    double t = 0;
    while (t < duration)
    {
        bool const remote = in_window(model.remote, t);
        double const edge = next_edge(model.remote, t, duration);
        double rate = bright ? model.k_bd : model.k_db;
        if (remote)
            rate *= bright ? model.modifier_bd : model.modifier_db;
        if (rate == 0)
        {
            t = edge;
            continue;
        }
        double const wait = std::exponential_distribution<double>(rate)(rng);
        if (t + wait >= edge)
        {
            // Rates change (or the run ends) first; exponential waits are
            // memoryless, so redraw from the edge
            t = edge;
            continue;
        }
        t += wait;
        bright = !bright;
        trace.times.push_back(t);
        trace.bright.push_back(bright);
    }
    return trace;
}

//---------------------------------------------------------------------------//
std::vector<double> dwell_times(TelegraphTrace const& trace, bool bright)
{
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < trace.times.size(); ++i)
    {
        if (static_cast<bool>(trace.bright[i]) == bright)
            out.push_back(trace.times[i + 1] - trace.times[i]);
    }
    return out;
}

double bright_fraction(TelegraphTrace const& trace)
{
    double on = 0;
    for (std::size_t i = 0; i < trace.times.size(); ++i)
    {
        double const end = i + 1 < trace.times.size() ? trace.times[i + 1]
                                                      : trace.duration;
        if (trace.bright[i])
            on += end - trace.times[i];
    }
    return on / trace.duration;
}

//---------------------------------------------------------------------------//
OccupancyEstimate
estimate_occupancy(TelegraphTrace const& trace, OccupancyOptions const& options)
{
    require(!trace.times.empty() && trace.duration > 0,
            ErrorCode::invalid_value,
            "occupancy needs a non-empty trace");
    OccupancyEstimate est;
    est.events = trace.num_switches();
    require(est.events >= options.min_events,
            ErrorCode::insufficient_events,
            "occupancy needs at least " + std::to_string(options.min_events)
                + " switching events, trace has "
                + std::to_string(est.events));
    est.fraction = bright_fraction(trace);

    std::size_t const nb = std::max<std::size_t>(options.blocks, 2);
    double const width = trace.duration / static_cast<double>(nb);
    std::vector<double> block(nb, 0.0);
    for (std::size_t i = 0; i < trace.times.size(); ++i)
    {
        if (!trace.bright[i])
            continue;
        double a = trace.times[i];
        double const b = i + 1 < trace.times.size() ? trace.times[i + 1]
                                                    : trace.duration;
        while (a < b)
        {
            auto k = static_cast<std::size_t>(a / width);
            if ((k + 1) * width <= a)
                ++k;
            k = std::min(nb - 1, k);
            double const edge = k + 1 == nb ? b : std::min(b, (k + 1) * width);
            block[k] += edge - a;
            if (edge <= a)
                break;
            a = edge;
        }
    }
    for (double& v : block)
        v /= width;

    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, nb - 1);
    double s1 = 0;
    double s2 = 0;
    for (std::size_t r = 0; r < options.resamples; ++r)
    {
        double m = 0;
        for (std::size_t k = 0; k < nb; ++k)
            m += block[pick(rng)];
        m /= static_cast<double>(nb);
        s1 += m;
        s2 += m * m;
    }
    if (options.resamples > 1)
    {
        double const n = static_cast<double>(options.resamples);
        double const var = (s2 - s1 * s1 / n) / (n - 1);
        est.std_error = std::sqrt(std::max(var, 0.0));
    }
    return est;
}

//---------------------------------------------------------------------------//
std::vector<double> binned_counts(TelegraphTrace const& trace,
                                  TelegraphModel const& model,
                                  double bin,
                                  std::uint64_t seed)
{
    require(bin > 0, ErrorCode::invalid_value, "count bin must be positive");
    require(!trace.times.empty(),
            ErrorCode::invalid_value,
            "cannot bin an empty trace");
    auto const nbins = static_cast<std::size_t>(std::floor(trace.duration / bin));
    std::vector<double> bright_time(nbins, 0.0);
    for (std::size_t i = 0; i < trace.times.size(); ++i)
    {
        if (!trace.bright[i])
            continue;
        double a = trace.times[i];
        double const b = std::min(
            i + 1 < trace.times.size() ? trace.times[i + 1] : trace.duration,
            nbins * bin);
        while (a < b)
        {
            auto k = static_cast<std::size_t>(a / bin);
            // a / bin may round down across a bin edge
            if ((k + 1) * bin <= a)
                ++k;
            if (k >= nbins)
                break;
            double const edge = std::min(b, (k + 1) * bin);
            bright_time[k] += edge - a;
            if (edge <= a)
                break;
            a = edge;
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<double> out(nbins);
    for (std::size_t k = 0; k < nbins; ++k)
    {
        double const on = std::clamp(bright_time[k], 0.0, bin);
        // kcps * s * 1e3 = counts
        double const mean
            = 1e3 * (model.bright_rate * on + model.dark_rate * (bin - on));
        double counts = 0;
        if (mean > 0)
            counts = static_cast<double>(
                std::poisson_distribution<std::int64_t>(mean)(rng));
        out[k] = counts / bin * 1e-3;
    }
    return out;
}

//---------------------------------------------------------------------------//
std::size_t Histogram::total() const
{
    std::size_t n = 0;
    for (auto c : counts)
        n += c;
    return n;
}

Histogram histogram(std::span<double const> values, double bin_width)
{
    require(bin_width > 0,
            ErrorCode::invalid_value,
            "histogram bin width must be positive");
    require(!values.empty(),
            ErrorCode::invalid_value,
            "cannot histogram an empty sample");
    Histogram h;
    h.bin_width = bin_width;
    for (double v : values)
    {
        require(v >= 0 && std::isfinite(v),
                ErrorCode::invalid_value,
                "histogram values must be finite and non-negative");
        auto const k = static_cast<std::size_t>(v / bin_width);
        if (k >= h.counts.size())
            h.counts.resize(k + 1, 0);
        ++h.counts[k];
    }
    return h;
}

double upper_mode_mass(Histogram const& h, double split)
{
    std::size_t above = 0;
    for (std::size_t k = 0; k < h.counts.size(); ++k)
    {
        if (h.center(k) >= split)
            above += h.counts[k];
    }
    return static_cast<double>(above) / static_cast<double>(h.total());
}

//---------------------------------------------------------------------------//
double ks_statistic_exponential(std::span<double const> sample, double rate)
{
    require(!sample.empty() && rate > 0,
            ErrorCode::invalid_value,
            "KS test needs samples and a positive rate");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    double const n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const f = -std::expm1(-rate * x[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_pvalue(double d, std::size_t n)
{
    double const sn = std::sqrt(static_cast<double>(n));
    double const lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-3)
        return 1.0;
    double p = 0;
    double sign = 1;
    for (int k = 1; k <= 100; ++k)
    {
        double const term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::fabs(term) < 1e-12)
            break;
        sign = -sign;
    }
    return std::clamp(2 * p, 0.0, 1.0);
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
