//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Photophysics.hh
//! Local rates and the single-cell kinetics update.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "Model.hh"

namespace dcsim
{
//---------------------------------------------------------------------------//
/*!
 * Gaussian focal spot.
 */
struct Beam
{
    double wavelength{532};  //!< [nm]
    double power{0};  //!< [mW]
    double waist{0.5};  //!< 1/e^2 radius [um]
    double x{0};  //!< center [um]
    double y{0};  //!< center [um]

    bool operator==(Beam const&) const = default;
};

void validate_beam(Beam const& beam);

//! Peak intensity 2P/(pi w^2) [mW/um^2]
double beam_peak_intensity(Beam const& beam);

//! Intensity [mW/um^2] at (x, y) [um]
double beam_intensity(Beam const& beam, double x, double y);

//---------------------------------------------------------------------------//
/*!
 * Photo-transition rate [1/s] for one beam.
 *
 * Single-photon: sigma(lambda) * photon flux. Two-photon transitions are
 * additionally scaled by intensity / reference_intensity. Zero whenever the
 * photon energy is below threshold.
 */
double photo_rate(PhotoTransition const& tr,
                  double intensity,
                  double wavelength_nm);

//! Capture rate per defect [1/s]: coefficient * carrier density
inline double capture_rate(CaptureChannel const& ch, double carrier_density)
{
    return ch.coefficient * carrier_density;
}

//---------------------------------------------------------------------------//
struct LocalIllumination
{
    double wavelength{0};  //!< [nm]
    double intensity{0};  //!< [mW/um^2]
};

//! Saturating excitation factor I/(I + I_sat) for a tunneling channel
double tunneling_gate(TunnelingChannel const& ch,
                      std::span<LocalIllumination const> light);

//---------------------------------------------------------------------------//
/*!
 * Densities and illumination of one cell.
 */
struct CellKinetics
{
    std::vector<double> density;  //!< [um^-3] per registry slot
    double electrons{0};  //!< [um^-3]
    double holes{0};  //!< [um^-3]
    std::vector<LocalIllumination> light;
};

inline constexpr std::size_t carrier_index(CarrierKind c)
{
    return c == CarrierKind::electron ? 0 : 1;
}

//! Carrier source/sink tallies of one update [um^-3]
struct KineticsTally
{
    std::array<double, 2> emitted{0, 0};  //!< indexed by carrier_index
    std::array<double, 2> captured{0, 0};
    double defect_charge_change{0};  //!< [e um^-3]
    int subcycles{0};
    int clamps{0};

    KineticsTally& operator+=(KineticsTally const& other);
};

struct KineticsOptions
{
    //! Largest allowed dt * (total outflow rate) of any state or carrier
    double stability_bound{0.1};
    //! Internal sub-cycles per update before StabilityViolation
    int max_subcycles{1000000};
};

//---------------------------------------------------------------------------//
/*!
 * Explicit flux-form rate network for one cell.
 *
 * Each update splits \c dt into sub-cycles so that no state or carrier pool
 * loses more than \c stability_bound of its content per sub-cycle. All
 * transfers move density between two pools, which conserves each species
 * total and balances defect charge against carrier creation and capture.
 *
 * The engine holds scratch storage: use one instance per thread.
 */
class KineticsEngine
{
  public:
    explicit KineticsEngine(ModelRegistry const& reg,
                            KineticsOptions options = {});

    std::size_t num_photo() const { return photo_.size(); }
    std::size_t num_tunneling() const { return tunnel_.size(); }

    //! Fill photo rates and tunneling gates for the given local light
    void local_rates(std::span<LocalIllumination const> light,
                     std::span<double> photo_rates,
                     std::span<double> gates) const;

    //! Whether a cell with no light and no carriers can change
    bool has_spontaneous(std::span<double const> density) const;

    /*!
     * Advance one cell by \c dt with fixed photo rates and gates.
     *
     * Empty spans mean zero light.
     */
    KineticsTally advance(std::span<double> density,
                          double& electrons,
                          double& holes,
                          std::span<double const> photo_rates,
                          std::span<double const> gates,
                          double dt);

    KineticsOptions const& options() const { return options_; }

  private:
    struct Photo
    {
        std::size_t from, to, carrier;
        PhotoTransition spec;
    };
    struct Tunnel
    {
        std::size_t donor_from, donor_to, empty, filled;
        double coefficient;
        TunnelingChannel spec;
    };

    //! Density move a_from -> a_to, optionally paired with b_from -> b_to
    struct Transfer
    {
        static constexpr std::size_t none = static_cast<std::size_t>(-1);

        std::size_t a_from, a_to;
        std::size_t b_from{none}, b_to{none};  //!< second reactant
        std::size_t produced{none};  //!< carrier pool receiving one per event
        double coefficient{0};
        double charge_change{0};  //!< defect charge change per event
    };
    struct Active
    {
        Transfer tr;
        double k;
    };

    KineticsOptions options_;
    std::size_t num_slots_{0};
    std::vector<Photo> photo_;
    std::vector<Tunnel> tunnel_;
    // Photo, tunneling, capture, then release transfers
    std::vector<Transfer> transfers_;
    std::size_t release_begin_{0};

    std::vector<Active> dark_;  //!< channels active without light

    std::size_t nphoto_tunnel() const { return photo_.size() + tunnel_.size(); }

    // Scratch
    std::vector<Active> active_;
    std::vector<double> pool_;
    std::vector<double> outflow_;
    std::vector<double> scale_;
    std::vector<double> rate_;
    std::vector<double> flux_;
};

//---------------------------------------------------------------------------//
/*!
 * Advance one cell by \c dt under its local light.
 *
 * \throws Error(StabilityViolation) if sub-cycling exceeds the configured
 *   maximum.
 */
KineticsTally kinetics_substep(CellKinetics& cell,
                               double dt,
                               ModelRegistry const& reg,
                               KineticsOptions const& options = {});

//---------------------------------------------------------------------------//
}  // namespace dcsim
