//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_photophysics.cc
//---------------------------------------------------------------------------//
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"

#include "dcsim/Error.hh"
#include "dcsim/Photophysics.hh"
#include "dcsim/Presets.hh"
#include "dcsim/Units.hh"

using namespace dcsim;

namespace
{
//---------------------------------------------------------------------------//
PhotoTransition photo(std::string from,
                      std::string to,
                      CarrierKind c,
                      double threshold,
                      double sigma)
{
    PhotoTransition p;
    p.from_state = std::move(from);
    p.to_state = std::move(to);
    p.emitted = c;
    p.threshold_energy = threshold;
    p.cross_section = CrossSectionTable({{300, sigma}});
    return p;
}

ModelDescription single_species(SpeciesSpec sp)
{
    ModelDescription m;
    m.species = {std::move(sp)};
    return m;
}

//! NV cycling without any capture channel
ModelDescription bare_nv(double sigma_minus, double sigma_zero)
{
    SpeciesSpec nv;
    nv.name = "NV";
    nv.total_concentration = 1;
    nv.states = {{"NV-", -1, {}}, {"NV0", 0, {}}};
    nv.photo_transitions
        = {photo("NV-", "NV0", CarrierKind::electron, 1.94, sigma_minus),
           photo("NV0", "NV-", CarrierKind::hole, 2.156, sigma_zero)};
    return single_species(nv);
}

//! Four-state ladder with photo transitions in both directions
ModelDescription ladder()
{
    SpeciesSpec sp;
    sp.name = "X";
    sp.total_concentration = 1;
    sp.states = {{"A", -2, {}}, {"B", -1, {}}, {"C", 0, {}}, {"D", 1, {}}};
    auto const e = CarrierKind::electron;
    auto const h = CarrierKind::hole;
    sp.photo_transitions = {photo("A", "B", e, 1.0, 4e-20),
                            photo("B", "C", e, 1.0, 2e-20),
                            photo("C", "D", e, 1.0, 1e-20),
                            photo("D", "C", h, 1.0, 3e-20),
                            photo("C", "B", h, 1.0, 5e-21),
                            photo("B", "A", h, 1.0, 1.5e-20)};
    return single_species(sp);
}

CellKinetics lit_cell(ModelRegistry const& reg,
                      std::vector<double> density,
                      double wavelength,
                      double intensity)
{
    CellKinetics c;
    c.density = std::move(density);
    c.light = {{wavelength, intensity}};
    (void)reg;
    return c;
}

}  // namespace

//---------------------------------------------------------------------------//
TEST_CASE("beam intensity")
{
    Beam b;
    b.power = 0;
    CHECK(beam_intensity(b, 0.1, -0.2) == 0);

    b.power = 1;
    b.waist = 0.5;
    CHECK(beam_intensity(b, 0, 0)
          == doctest::Approx(2 / (units::pi * 0.25)).epsilon(1e-12));
    CHECK(beam_peak_intensity(b) == doctest::Approx(2.546479).epsilon(1e-6));

    // Midpoint quadrature over +-6 waists
    b.x = 0.3;
    b.y = -0.2;
    double const h = b.waist / 40;
    double total = 0;
    for (double x = b.x - 6 * b.waist + h / 2; x < b.x + 6 * b.waist; x += h)
    {
        for (double y = b.y - 6 * b.waist + h / 2; y < b.y + 6 * b.waist;
             y += h)
        {
            total += beam_intensity(b, x, y) * h * h;
        }
    }
    CHECK(std::abs(total - b.power) < 1e-6 * b.power);
}

TEST_CASE("photo rates")
{
    ModelRegistry const reg = validate_model(default_model());
    auto const& photos = reg.photo();
    auto find = [&](std::string const& from) -> PhotoTransition const& {
        for (auto const& p : photos)
        {
            if (reg.slot(p.from).label == from)
                return p.spec;
        }
        FAIL("missing transition");
        return photos.front().spec;
    };

    SUBCASE("SiV0 below threshold at 857 nm")
    {
        CHECK(photo_rate(find("SiV0"), 5.0, 857) == 0);
        CHECK(photo_rate(find("SiV0"), 5.0, 637) > 0);
    }
    SUBCASE("single-photon linearity")
    {
        auto const& p = find("NV-");
        double const r1 = photo_rate(p, 1.3, 532);
        CHECK(photo_rate(p, 2.6, 532) == 2.0 * r1);
        CHECK(photo_rate(p, 0, 532) == 0);
    }
    SUBCASE("two-photon scaling")
    {
        PhotoTransition p = find("NV-");
        p.two_photon = true;
        p.reference_intensity = 2.0;
        double const r1 = photo_rate(p, 1.0, 532);
        CHECK(photo_rate(p, 2.0, 532) == doctest::Approx(4 * r1).epsilon(1e-14));
        PhotoTransition lin = find("NV-");
        CHECK(photo_rate(p, 2.0, 532)
              == doctest::Approx(photo_rate(lin, 2.0, 532)).epsilon(1e-14));
    }
    SUBCASE("P1 cross sections differ tenfold between 532 and 637 nm")
    {
        auto const& p = find("Ns0");
        // Equal photon flux isolates the cross-section ratio
        double const i532 = 1.0;
        double const i637 = i532 * units::photon_energy(637)
                            / units::photon_energy(532);
        CHECK(photo_rate(p, i532, 532) / photo_rate(p, i637, 637)
              == doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("absolute rate")
    {
        // sigma [cm^2] * 1e8 * flux [photons / um^2 / s]
        auto const& p = find("NV-");
        double const expect = 3e-20 * units::cm2_to_um2
                              * units::photon_flux(2.0, 532);
        CHECK(photo_rate(p, 2.0, 532) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("capture rate")
{
    CaptureChannel ch{"SiV-", "SiV0", CarrierKind::hole, 10};
    CHECK(capture_rate(ch, 0) == 0);
    CHECK(capture_rate(ch, 5) == 50);
}

TEST_CASE("capture with constant carrier density decays exponentially")
{
    SpeciesSpec siv;
    siv.name = "SiV";
    siv.total_concentration = 1;
    siv.states = {{"SiV-", -1, {}}, {"SiV0", 0, {}}};
    siv.captures = {{"SiV-", "SiV0", CarrierKind::hole, 10}};
    ModelRegistry const reg = validate_model(single_species(siv));

    // Defect density negligible against the hole pool
    double const nh = 5;
    double const n0 = 1e-9;
    CellKinetics c;
    c.density = {n0, 0};
    c.holes = nh;
    KineticsOptions opt;
    opt.stability_bound = 1e-4;
    kinetics_substep(c, 1 / (10 * nh), reg, opt);
    CHECK(std::abs(c.density[0] / n0 - std::exp(-1.0)) < 1e-3);
    CHECK(c.density[0] + c.density[1] == doctest::Approx(n0).epsilon(1e-12));
}

TEST_CASE("single transition matches the exponential to first order")
{
    ModelRegistry const reg = validate_model(bare_nv(3e-20, 0));
    double const k = photo_rate(reg.photo()[0].spec, 1.0, 532);
    for (double dt : {1e-3 / k, 1e-4 / k})
    {
        CellKinetics c = lit_cell(reg, {1.0, 0.0}, 532, 1.0);
        kinetics_substep(c, dt, reg);
        double const d_exact = std::exp(-k * dt) - 1;
        double const d_num = c.density[0] - 1.0;
        CHECK(d_num == doctest::Approx(-k * dt).epsilon(1e-12));
        CHECK(std::abs(d_num - d_exact) <= (k * dt) * (k * dt));
    }
}

TEST_CASE("NV cycling reaches the two-state fixed point")
{
    ModelRegistry const reg = validate_model(bare_nv(3e-20, 1e-20));
    double const intensity = 0.5;
    double const k_mz = photo_rate(reg.photo()[0].spec, intensity, 532);
    double const k_zm = photo_rate(reg.photo()[1].spec, intensity, 532);

    CellKinetics c = lit_cell(reg, {5.0, 0.0}, 532, intensity);
    double const dt = 0.01 / (k_mz + k_zm);
    for (int i = 0; i < 3000; ++i)
        kinetics_substep(c, dt, reg);
    CHECK(c.density[0] / c.density[1]
          == doctest::Approx(k_zm / k_mz).epsilon(1e-9));

    // Equal, constant electron and hole emission once equilibrated
    std::vector<double> emitted_e, emitted_h;
    for (int i = 0; i < 5; ++i)
    {
        auto const t = kinetics_substep(c, dt, reg);
        emitted_e.push_back(t.emitted[0]);
        emitted_h.push_back(t.emitted[1]);
    }
    double const expect = k_mz * k_zm / (k_mz + k_zm) * 5.0 * dt;
    for (int i = 0; i < 5; ++i)
    {
        CHECK(emitted_e[i] == doctest::Approx(expect).epsilon(1e-8));
        CHECK(emitted_h[i] == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("iterated kinetics match the dense matrix exponential")
{
    ModelRegistry const reg = validate_model(ladder());
    double const intensity = 0.8;
    std::size_t const n = reg.num_slots();
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    double kmax = 0;
    std::vector<double> out(n, 0.0);
    for (auto const& p : reg.photo())
    {
        double const k = photo_rate(p.spec, intensity, 532);
        Q(p.to, p.from) += k;
        Q(p.from, p.from) -= k;
        out[p.from] += k;
    }
    for (double o : out)
        kmax = std::max(kmax, o);

    Eigen::VectorXd x0(n);
    x0 << 0.7, 0.1, 0.15, 0.05;
    double const T = 3.0 / kmax;
    Eigen::VectorXd const exact = (Q * T).exp() * x0;

    double const dt = 2e-4 / kmax;  // dt * maxrate <= 1e-3
    int const steps = static_cast<int>(std::round(T / dt));
    CellKinetics c = lit_cell(reg, {0.7, 0.1, 0.15, 0.05}, 532, intensity);
    for (int i = 0; i < steps; ++i)
    {
        auto const tally = kinetics_substep(c, dt, reg);
        REQUIRE(tally.subcycles == 1);
    }
    Eigen::VectorXd num(n);
    for (std::size_t s = 0; s < n; ++s)
        num[s] = c.density[s];
    CHECK((num - exact).norm() / exact.norm() < 1e-4);
}

TEST_CASE("conservation and charge bookkeeping on random cells")
{
    ModelRegistry const reg = validate_model(trap_model());
    KineticsEngine engine(reg);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> photo(engine.num_photo());
    std::vector<double> gates(engine.num_tunneling());
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<double> density(reg.num_slots());
        std::vector<double> totals(reg.species().size(), 0.0);
        for (std::size_t s = 0; s < density.size(); ++s)
        {
            density[s] = 100 * u(rng);
            totals[reg.slot(s).species] += density[s];
        }
        double ne = 50 * u(rng);
        double nh = 50 * u(rng);
        double const charge0 = [&] {
            double q = 0;
            for (std::size_t s = 0; s < density.size(); ++s)
                q += reg.slot(s).charge * density[s];
            return q;
        }();
        std::vector<LocalIllumination> light
            = {{trial % 2 ? 532.0 : 857.0, 3 * u(rng)}};
        engine.local_rates(light, photo, gates);
        double const ne0 = ne;
        double const nh0 = nh;
        auto const t = engine.advance(density, ne, nh, photo, gates, 0.5);

        std::vector<double> after(totals.size(), 0.0);
        double charge1 = 0;
        for (std::size_t s = 0; s < density.size(); ++s)
        {
            CHECK(density[s] >= 0);
            after[reg.slot(s).species] += density[s];
            charge1 += reg.slot(s).charge * density[s];
        }
        for (std::size_t k = 0; k < totals.size(); ++k)
            CHECK(std::abs(after[k] - totals[k]) <= 1e-12 * totals[k]);
        CHECK(ne >= 0);
        CHECK(nh >= 0);

        // Defect charge change is balanced by carriers created and removed
        double const dq = charge1 - charge0;
        double const carriers = (nh - nh0) - (ne - ne0);
        // Exact per transfer; only rounding of the largest pool accumulates
        double scale = std::max({ne, nh, ne0, nh0});
        for (double d : density)
            scale = std::max(scale, d);
        double const tol = 8 * std::numeric_limits<double>::epsilon() * scale
                           * std::max(1, t.subcycles);
        CHECK(std::abs(dq + carriers) <= tol);
        CHECK(std::abs(dq - t.defect_charge_change) <= tol);
        CHECK(std::abs((ne - ne0) - (t.emitted[0] - t.captured[0])) <= tol);
        CHECK(std::abs((nh - nh0) - (t.emitted[1] - t.captured[1])) <= tol);
    }
}

TEST_CASE("stability violation when sub-cycling is capped")
{
    ModelRegistry const reg = validate_model(bare_nv(3e-20, 1e-20));
    KineticsOptions opt;
    opt.max_subcycles = 5;
    CellKinetics c = lit_cell(reg, {1.0, 0.0}, 532, 2.0);
    try
    {
        kinetics_substep(c, 1.0, reg, opt);
        FAIL("expected StabilityViolation");
    }
    catch (Error const& e)
    {
        CHECK(e.code() == ErrorCode::stability_violation);
    }
}

TEST_CASE("no light and no carriers leaves a cell unchanged")
{
    ModelRegistry const reg = validate_model(default_model());
    CellKinetics c;
    c.density.assign(reg.num_slots(), 0.0);
    for (std::size_t s = 0; s < reg.num_slots(); ++s)
        c.density[s] = 1.0 + s;
    auto const before = c.density;
    auto const t = kinetics_substep(c, 1800, reg);
    CHECK(c.density == before);
    CHECK(c.electrons == 0);
    CHECK(c.holes == 0);
    CHECK(t.clamps == 0);
}

TEST_CASE("wavelength gate of the NV hole emission")
{
    ModelRegistry const reg = validate_model(default_model());
    auto const nv0 = reg.find_slot("NV", "NV0").value();
    for (auto const& p : reg.photo())
    {
        if (p.from != nv0)
            continue;
        CHECK(photo_rate(p.spec, 1.0, 595) == 0);
        CHECK(photo_rate(p.spec, 1.0, 637) == 0);
        CHECK(photo_rate(p.spec, 1.0, 561) > 0);
        CHECK(photo_rate(p.spec, 1.0, 532) > 0);
    }
}

TEST_CASE("trap release and tunneling")
{
    ModelRegistry const reg = validate_model(trap_model());
    auto const& spec = reg.tunneling().front().spec;
    std::vector<LocalIllumination> light = {{857, spec.saturation_intensity}};
    CHECK(tunneling_gate(spec, light) == doctest::Approx(0.5));
    light = {{532, 10.0}};
    CHECK(tunneling_gate(spec, light) == 0);

    auto const trap = reg.find_species("Trap").value();
    auto const filled = reg.species_offset(trap) + 1;
    double const tau = reg.species()[trap].release_lifetime;

    CellKinetics c;
    c.density.assign(reg.num_slots(), 0.0);
    c.density[filled] = 1.0;
    KineticsOptions opt;
    opt.stability_bound = 1e-4;
    auto const t = kinetics_substep(c, tau, reg, opt);
    CHECK(std::abs(c.density[filled] - std::exp(-1.0)) < 1e-3);
    CHECK(c.holes + c.electrons
          == doctest::Approx(1 - c.density[filled]).epsilon(1e-12));
    CHECK(t.emitted[0] + t.emitted[1]
          == doctest::Approx(1 - c.density[filled]).epsilon(1e-12));
}
