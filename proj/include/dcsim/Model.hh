//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file dcsim/Model.hh
//! Declarative defect model and its validated, immutable registry.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dcsim
{
//---------------------------------------------------------------------------//
enum class CarrierKind
{
    electron,
    hole
};

//! Charge of a carrier in units of e
constexpr int charge_of(CarrierKind c)
{
    return c == CarrierKind::electron ? -1 : +1;
}

//---------------------------------------------------------------------------//
/*!
 * Photo-transition cross section versus wavelength.
 *
 * Points are (wavelength [nm], sigma [cm^2]) sorted by wavelength. The table
 * is piecewise constant: a wavelength takes the value of the nearest listed
 * point at or below it, and wavelengths shorter than the first point take
 * the first value.
 */
class CrossSectionTable
{
  public:
    using Point = std::pair<double, double>;

    CrossSectionTable() = default;
    explicit CrossSectionTable(std::vector<Point> points);

    //! Cross section [cm^2]
    double operator()(double wavelength_nm) const;

    std::vector<Point> const& points() const { return points_; }
    bool empty() const { return points_.empty(); }

    bool operator==(CrossSectionTable const&) const = default;

  private:
    std::vector<Point> points_;
};

//---------------------------------------------------------------------------//
struct ChargeStateSpec
{
    std::string label;
    int relative_charge{0};  //!< [e]
    //! Emission per detection channel [kcps / (um^-3 * mW/um^2)]
    std::map<std::string, double> brightness;

    bool operator==(ChargeStateSpec const&) const = default;
};

struct PhotoTransition
{
    std::string from_state;
    std::string to_state;
    CarrierKind emitted{CarrierKind::electron};
    double threshold_energy{0};  //!< [eV]
    CrossSectionTable cross_section;
    //! Rate scales as intensity^2 / reference_intensity
    bool two_photon{false};
    double reference_intensity{1.0};  //!< [mW/um^2]

    bool operator==(PhotoTransition const&) const = default;
};

struct CaptureChannel
{
    std::string from_state;
    std::string to_state;
    CarrierKind captured{CarrierKind::hole};
    double coefficient{0};  //!< [um^3/s]

    bool operator==(CaptureChannel const&) const = default;
};

struct SpeciesSpec
{
    std::string name;
    double total_concentration{0};  //!< [ppb]
    std::vector<ChargeStateSpec> states;
    std::string initial_state;  //!< Empty means the first state
    std::vector<PhotoTransition> photo_transitions;
    std::vector<CaptureChannel> captures;
    //! Traps have exactly two states: states[0] empty, states[1] filled
    bool is_trap{false};
    double release_lifetime{0};  //!< [s], traps only

    bool operator==(SpeciesSpec const&) const = default;
};

//---------------------------------------------------------------------------//
/*!
 * Illumination-gated carrier transfer from a donor state into an empty trap.
 *
 * Per donor the transfer rate is
 * \f[
 *   k = c \, n_\mathrm{empty} \, \frac{I}{I + I_\mathrm{sat}}
 * \f]
 * where \f$ I \f$ sums beams inside the excitation band. The saturating
 * factor stands for the excited-state population of the donor.
 */
struct TunnelingChannel
{
    std::string donor_species;
    std::string from_state;
    std::string to_state;
    std::string trap_species;
    double coefficient{0};  //!< [um^3/s]
    double saturation_intensity{1.0};  //!< [mW/um^2]
    double band_min{0};  //!< [nm]
    double band_max{1e9};  //!< [nm]

    bool operator==(TunnelingChannel const&) const = default;
};

struct TransportSpec
{
    double diffusion_electron{1.0};  //!< [um^2/s]
    double diffusion_hole{1.0};  //!< [um^2/s]
    std::optional<double> mobility_electron;  //!< [um^2/(V s)]
    std::optional<double> mobility_hole;  //!< [um^2/(V s)]
    double permittivity{5.7};  //!< relative

    bool operator==(TransportSpec const&) const = default;
};

//! Raw (unvalidated) model description
struct ModelDescription
{
    std::vector<SpeciesSpec> species;
    std::vector<TunnelingChannel> tunneling;
    TransportSpec transport;

    bool operator==(ModelDescription const&) const = default;
};

//---------------------------------------------------------------------------//
struct GridSpec
{
    int nx{64};
    int ny{64};
    double dx{0.25};  //!< [um]
    double host_atom_density{1.763e23};  //!< [atoms/cm^3]
    int geometry_dimension{2};  //!< Documented thin-slab approximation

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double width() const { return nx * dx; }
    double height() const { return ny * dx; }
    //! Cell-center coordinate [um], origin at the grid center
    double x(int i) const { return (i + 0.5 - 0.5 * nx) * dx; }
    double y(int j) const { return (j + 0.5 - 0.5 * ny) * dx; }

    bool operator==(GridSpec const&) const = default;
};

void validate_grid(GridSpec const& grid);

//---------------------------------------------------------------------------//
// Flattened rate network, indexed by state "slot"
//---------------------------------------------------------------------------//
struct PhotoChannelRef
{
    std::size_t from;
    std::size_t to;
    CarrierKind emitted;
    PhotoTransition spec;
};

struct CaptureChannelRef
{
    std::size_t from;
    std::size_t to;
    CarrierKind captured;
    double coefficient;
};

struct ReleaseChannelRef
{
    std::size_t from;  //!< filled
    std::size_t to;  //!< empty
    CarrierKind emitted;
    double rate;  //!< [1/s]
};

struct TunnelingChannelRef
{
    std::size_t donor_from;
    std::size_t donor_to;
    std::size_t trap_empty;
    std::size_t trap_filled;
    TunnelingChannel spec;
};

//---------------------------------------------------------------------------//
/*!
 * Validated, immutable model.
 *
 * Each (species, state) pair is assigned a contiguous "slot" index used by
 * the simulation state and the kinetics engine. Instances are created only by
 * \c validate_model and may be shared freely between concurrent runs.
 */
class ModelRegistry
{
  public:
    struct Slot
    {
        std::size_t species;
        std::size_t state;
        std::string species_name;
        std::string label;
        int charge;
    };

    ModelDescription const& description() const { return desc_; }
    std::vector<SpeciesSpec> const& species() const { return desc_.species; }
    TransportSpec const& transport() const { return desc_.transport; }

    std::size_t num_slots() const { return slots_.size(); }
    Slot const& slot(std::size_t i) const { return slots_[i]; }
    //! First slot of a species
    std::size_t species_offset(std::size_t s) const { return offsets_[s]; }
    std::size_t initial_slot(std::size_t s) const { return initial_[s]; }

    std::optional<std::size_t> find_species(std::string const& name) const;
    std::optional<std::size_t>
    find_slot(std::string const& species, std::string const& label) const;
    //! Slot by label alone; labels unique across the model are required
    std::optional<std::size_t> find_label(std::string const& label) const;

    std::vector<PhotoChannelRef> const& photo() const { return photo_; }
    std::vector<CaptureChannelRef> const& captures() const
    {
        return captures_;
    }
    std::vector<ReleaseChannelRef> const& releases() const
    {
        return releases_;
    }
    std::vector<TunnelingChannelRef> const& tunneling() const
    {
        return tunneling_;
    }

    //! Detection channels named by any state's brightness map
    std::vector<std::string> const& channels() const { return channels_; }
    //! Brightness per slot for a channel (zero where unlisted)
    std::vector<double> brightness(std::string const& channel) const;

    bool operator==(ModelRegistry const& other) const
    {
        return desc_ == other.desc_;
    }

  private:
    friend ModelRegistry validate_model(ModelDescription desc);
    ModelRegistry() = default;

    ModelDescription desc_;
    std::vector<Slot> slots_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> initial_;
    std::vector<PhotoChannelRef> photo_;
    std::vector<CaptureChannelRef> captures_;
    std::vector<ReleaseChannelRef> releases_;
    std::vector<TunnelingChannelRef> tunneling_;
    std::vector<std::string> channels_;
};

//---------------------------------------------------------------------------//
/*!
 * Check a raw description and build the registry.
 *
 * Cross-section tables are rewritten so that they vanish for every
 * wavelength whose photon energy is below the transition threshold.
 *
 * \throws Error with UnknownState, NegativeRate, ThresholdViolation,
 *   DuplicateLabel, ChargeMismatch or InvalidValue.
 */
ModelRegistry validate_model(ModelDescription desc);

//---------------------------------------------------------------------------//
}  // namespace dcsim
