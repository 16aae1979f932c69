//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_stochastic.cc
//---------------------------------------------------------------------------//
#include <cmath>

#include "doctest.h"

#include "dcsim/Error.hh"
#include "dcsim/Simulation.hh"
#include "dcsim/Stochastic.hh"

using namespace dcsim;

namespace
{
TelegraphModel rates(double k_bd, double k_db)
{
    TelegraphModel m;
    m.k_bd = k_bd;
    m.k_db = k_db;
    m.bright_rate = 20;
    m.dark_rate = 0;
    return m;
}

//! Asymptotic standard deviation of the time-averaged occupancy of a
//! two-state chain observed for \c duration
double occupancy_sigma(double k_bd, double k_db, double duration)
{
    double const lambda = k_bd + k_db;
    double const p = k_db / lambda;
    return std::sqrt(2 * p * (1 - p) / (lambda * duration));
}

}  // namespace

//---------------------------------------------------------------------------//
TEST_CASE("absorbing bright state")
{
    auto const trace = gillespie_simulate(rates(0, 3), 1000, 1);
    CHECK(trace.num_switches() == 0);
    CHECK(trace.bright.front() == 1);
    CHECK(bright_fraction(trace) == 1.0);
}

TEST_CASE("trace structure and seed determinism")
{
    auto const m = rates(1.5, 0.7);
    auto const a = gillespie_simulate(m, 500, 42);
    auto const b = gillespie_simulate(m, 500, 42);
    auto const c = gillespie_simulate(m, 500, 43);
    CHECK(a.times == b.times);
    CHECK(a.bright == b.bright);
    CHECK(a.times != c.times);
    CHECK(a.times.front() == 0);
    CHECK(a.duration == 500);
    for (std::size_t i = 1; i < a.times.size(); ++i)
    {
        CHECK(a.times[i] > a.times[i - 1]);
        CHECK(a.bright[i] != a.bright[i - 1]);
    }
    CHECK(a.times.back() < 500);
}

TEST_CASE("symmetric rates give half occupancy")
{
    // One switch per unit time on average: 1e4 events
    double const duration = 1e4;
    auto const trace = gillespie_simulate(rates(1, 1), duration, 7);
    CHECK(trace.num_switches() >= 9500);
    double const sigma = occupancy_sigma(1, 1, duration);
    CHECK(std::abs(bright_fraction(trace) - 0.5) < 3 * sigma);
}

TEST_CASE("occupancy matches detailed balance for general rates")
{
    double const k_bd = 2.0;
    double const k_db = 0.5;
    double const p = k_db / (k_bd + k_db);
    // Switching frequency 2 p k_bd = 0.8 per second: 1e4 events
    double const duration = 1.25e4;
    for (std::uint64_t seed : {1, 2, 3})
    {
        auto const trace = gillespie_simulate(rates(k_bd, k_db), duration, seed);
        double const sigma = occupancy_sigma(k_bd, k_db, duration);
        CHECK(std::abs(bright_fraction(trace) - p) < 3 * sigma);
    }
}

TEST_CASE("dwell times are exponential")
{
    auto const m = rates(2.0, 0.5);
    auto const trace = gillespie_simulate(m, 3000, 11);
    auto bright = dwell_times(trace, true);
    auto dark = dwell_times(trace, false);
    REQUIRE(bright.size() >= 1000);
    REQUIRE(dark.size() >= 1000);
    bright.resize(1000);
    dark.resize(1000);

    double const d_b = ks_statistic_exponential(bright, m.k_bd);
    double const d_d = ks_statistic_exponential(dark, m.k_db);
    CHECK(ks_pvalue(d_b, bright.size()) > 0.01);
    CHECK(ks_pvalue(d_d, dark.size()) > 0.01);

    // The test has power: the wrong rate is rejected
    CHECK(ks_pvalue(ks_statistic_exponential(bright, 1.5 * m.k_bd),
                    bright.size())
          < 0.01);
}

TEST_CASE("ks statistic of a known sample")
{
    // Quantiles of Exp(1) at (i - 0.5) / n have statistic 1 / (2 n)
    std::vector<double> s;
    int const n = 50;
    for (int i = 1; i <= n; ++i)
        s.push_back(-std::log(1 - (i - 0.5) / n));
    CHECK(ks_statistic_exponential(s, 1.0)
          == doctest::Approx(0.5 / n).epsilon(1e-12));
    CHECK(ks_pvalue(0.0, 100) == doctest::Approx(1.0));
    CHECK(ks_pvalue(0.5, 100) < 1e-10);
}

TEST_CASE("remote windows modify rates piecewise")
{
    auto m = rates(1, 1);
    m.modifier_bd = 10;
    m.remote = {{100, 200}};
    auto const trace = gillespie_simulate(m, 300, 5);
    double in_bright = 0;
    double out_bright = 0;
    for (std::size_t i = 0; i < trace.times.size(); ++i)
    {
        double const a = trace.times[i];
        double const b
            = i + 1 < trace.times.size() ? trace.times[i + 1] : trace.duration;
        if (!trace.bright[i])
            continue;
        double const inside = std::max(0.0, std::min(b, 200.0) - std::max(a, 100.0));
        in_bright += inside;
        out_bright += (b - a) - inside;
    }
    // Inside: occupancy 1/11; outside: 1/2
    CHECK(in_bright / 100 < 0.2);
    CHECK(out_bright / 200 > 0.35);
}

//---------------------------------------------------------------------------//
TEST_CASE("bright-only trace gives a single mode")
{
    auto m = rates(0, 1);
    m.bright_rate = 50;
    auto const trace = gillespie_simulate(m, 200, 1);
    auto const counts = binned_counts(trace, m, 1.0, 2);
    CHECK(counts.size() == 200);
    auto const h = histogram(counts, 1.0);
    CHECK(h.total() == 200);
    CHECK(upper_mode_mass(h, 25) == 1.0);
    std::size_t mode = 0;
    for (std::size_t k = 0; k < h.counts.size(); ++k)
        if (h.counts[k] > h.counts[mode])
            mode = k;
    CHECK(std::abs(h.center(mode) - 50) <= 1.0);
}

TEST_CASE("symmetric switching gives two modes of equal mass")
{
    auto m = rates(0.1, 0.1);
    m.bright_rate = 200;
    double const duration = 1e4;
    auto const trace = gillespie_simulate(m, duration, 3);
    auto const counts = binned_counts(trace, m, 0.1, 4);
    auto const h = histogram(counts, 5.0);
    double const upper = upper_mode_mass(h, 100);
    double const sigma = occupancy_sigma(0.1, 0.1, duration);
    CHECK(std::abs(upper - 0.5) < 3 * sigma);
    CHECK(std::abs((1 - upper) - 0.5) < 3 * sigma);
}

TEST_CASE("remote modifier shifts bright-mode mass in the configured direction")
{
    TelegraphStudy study;
    study.model = rates(2, 1);
    study.model.bright_rate = 8;
    study.model.dark_rate = 0.5;
    study.duration = 400;
    study.bin = 0.05;
    study.histogram_bin = 0.5;
    double const split = 0.5 * (8 + 0.5);

    SUBCASE("toward dark")
    {
        study.model.modifier_bd = 3;
        study.model.modifier_db = 0.5;
        for (std::uint64_t seed : {1, 2, 3})
        {
            auto const r = run_telegraph(study, seed);
            CHECK(upper_mode_mass(r.remote_histogram, split)
                  < upper_mode_mass(r.reference_histogram, split));
            CHECK(bright_fraction(r.remote) < bright_fraction(r.reference));
        }
    }
    SUBCASE("toward bright")
    {
        study.model.modifier_bd = 0.5;
        study.model.modifier_db = 3;
        for (std::uint64_t seed : {1, 2, 3})
        {
            auto const r = run_telegraph(study, seed);
            CHECK(upper_mode_mass(r.remote_histogram, split)
                  > upper_mode_mass(r.reference_histogram, split));
        }
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("occupancy estimator")
{
    SUBCASE("alternating equal dwells")
    {
        TelegraphTrace t;
        for (int i = 0; i < 40; ++i)
        {
            t.times.push_back(i * 0.5);
            t.bright.push_back(i % 2 == 0);
        }
        t.duration = 20;
        auto const est = estimate_occupancy(t);
        CHECK(est.fraction == 0.5);
        CHECK(est.events == 39);
    }
    SUBCASE("all bright")
    {
        auto const trace = gillespie_simulate(rates(0, 1), 100, 1);
        OccupancyOptions opts;
        opts.min_events = 0;
        CHECK(estimate_occupancy(trace, opts).fraction == 1.0);
        try
        {
            estimate_occupancy(trace);
            FAIL("expected InsufficientEvents");
        }
        catch (Error const& e)
        {
            CHECK(e.code() == ErrorCode::insufficient_events);
        }
    }
}

TEST_CASE("occupancy interval covers the truth")
{
    // 95% intervals over 200 seeded runs
    int covered = 0;
    int const runs = 200;
    for (int seed = 0; seed < runs; ++seed)
    {
        auto const trace = gillespie_simulate(rates(1, 1), 500, 1000 + seed);
        OccupancyOptions opts;
        opts.seed = static_cast<std::uint64_t>(seed);
        auto const est = estimate_occupancy(trace, opts);
        if (std::abs(est.fraction - 0.5) <= 1.96 * est.std_error)
            ++covered;
    }
    MESSAGE("coverage " << covered << " / " << runs);
    CHECK(covered >= 0.95 * runs);
}

TEST_CASE("telegraph validation")
{
    auto m = rates(-1, 1);
    CHECK_THROWS_AS(validate_telegraph(m), Error);
    m = rates(1, 1);
    m.dark_rate = m.bright_rate;
    CHECK_THROWS_AS(validate_telegraph(m), Error);
}
