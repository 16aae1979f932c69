//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Config.cc
//---------------------------------------------------------------------------//
#include "dcsim/Config.hh"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "dcsim/Error.hh"

using nlohmann::json;

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
[[noreturn]] void config_error(std::string const& path, std::string const& what)
{
    throw Error(ErrorCode::config_error,
                "field '" + (path.empty() ? std::string("<root>") : path)
                    + "': " + what);
}

std::string join(std::string const& path, std::string const& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string join(std::string const& path, std::size_t index)
{
    return path + "[" + std::to_string(index) + "]";
}

char const* type_label(json const& j)
{
    return j.type_name();
}

//---------------------------------------------------------------------------//
/*!
 * Object reader that tracks its document path and rejects unknown keys.
 */
class Node
{
  public:
    Node(json const& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            config_error(path_,
                         std::string("expected object, found ")
                             + type_label(j_));
    }

    std::string const& path() const { return path_; }
    bool has(std::string const& key) const { return j_.contains(key); }

    json const& at(std::string const& key) const
    {
        if (!j_.contains(key))
            config_error(join(path_, key), "missing required field");
        return j_.at(key);
    }

    double number(std::string const& key) const
    {
        auto const& v = at(key);
        if (!v.is_number())
            config_error(join(path_, key),
                         std::string("expected number, found ")
                             + type_label(v));
        return v.get<double>();
    }
    double number(std::string const& key, double def) const
    {
        return has(key) ? number(key) : def;
    }

    long integer(std::string const& key) const
    {
        auto const& v = at(key);
        if (!v.is_number_integer())
            config_error(join(path_, key),
                         std::string("expected integer, found ")
                             + type_label(v));
        return v.get<long>();
    }
    long integer(std::string const& key, long def) const
    {
        return has(key) ? integer(key) : def;
    }

    bool boolean(std::string const& key, bool def) const
    {
        if (!has(key))
            return def;
        auto const& v = at(key);
        if (!v.is_boolean())
            config_error(join(path_, key),
                         std::string("expected boolean, found ")
                             + type_label(v));
        return v.get<bool>();
    }

    std::string string(std::string const& key) const
    {
        auto const& v = at(key);
        if (!v.is_string())
            config_error(join(path_, key),
                         std::string("expected string, found ")
                             + type_label(v));
        return v.get<std::string>();
    }
    std::string string(std::string const& key, std::string def) const
    {
        return has(key) ? string(key) : def;
    }

    json const& array(std::string const& key) const
    {
        auto const& v = at(key);
        if (!v.is_array())
            config_error(join(path_, key),
                         std::string("expected array, found ")
                             + type_label(v));
        return v;
    }

    Node child(std::string const& key) const
    {
        return Node(at(key), join(path_, key));
    }

    //! Reject keys outside the allowed set
    void only(std::initializer_list<char const*> keys) const
    {
        for (auto const& [k, v] : j_.items())
        {
            bool const known
                = std::any_of(keys.begin(), keys.end(), [&k](char const* a) {
                      return k == a;
                  });
            if (!known)
                config_error(join(path_, k), "unknown field");
        }
    }

  private:
    json const& j_;
    std::string path_;
};

//! Fixed-size numeric array
template<std::size_t N>
std::array<double, N> numbers(json const& v, std::string const& path)
{
    if (!v.is_array() || v.size() != N)
        config_error(path,
                     "expected array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i)
    {
        if (!v[i].is_number())
            config_error(join(path, i), "expected number");
        out[i] = v[i].get<double>();
    }
    return out;
}

//! Re-tag library validation errors with the offending field
template<class F>
auto with_path(std::string const& path, F&& f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (Error const& e)
    {
        if (e.code() == ErrorCode::config_error)
            throw;
        throw Error(ErrorCode::config_error,
                    "field '" + path + "': " + e.what());
    }
}

//---------------------------------------------------------------------------//
CarrierKind parse_carrier(Node const& n, std::string const& key)
{
    auto const s = n.string(key);
    if (s == "electron")
        return CarrierKind::electron;
    if (s == "hole")
        return CarrierKind::hole;
    config_error(join(n.path(), key),
                 "expected 'electron' or 'hole', found '" + s + "'");
}

char const* carrier_name(CarrierKind c)
{
    return c == CarrierKind::electron ? "electron" : "hole";
}

GridSpec parse_grid(Node const& n)
{
    n.only({"nx", "ny", "dx", "host_atom_density", "geometry_dimension"});
    GridSpec g;
    g.nx = static_cast<int>(n.integer("nx", g.nx));
    g.ny = static_cast<int>(n.integer("ny", g.ny));
    g.dx = n.number("dx", g.dx);
    g.host_atom_density = n.number("host_atom_density", g.host_atom_density);
    g.geometry_dimension
        = static_cast<int>(n.integer("geometry_dimension", g.geometry_dimension));
    with_path(n.path(), [&] {
        validate_grid(g);
        return 0;
    });
    return g;
}

Beam parse_beam(Node const& n)
{
    n.only({"wavelength", "power", "waist", "x", "y", "center"});
    Beam b;
    b.wavelength = n.number("wavelength");
    b.power = n.number("power");
    b.waist = n.number("waist", b.waist);
    b.x = n.number("x", 0);
    b.y = n.number("y", 0);
    if (n.has("center"))
    {
        auto const c = numbers<2>(n.at("center"), join(n.path(), "center"));
        b.x = c[0];
        b.y = c[1];
    }
    with_path(n.path(), [&] {
        validate_beam(b);
        return 0;
    });
    return b;
}

Region parse_region(json const& v, std::string const& path)
{
    auto const r = numbers<4>(v, path);
    return Region{r[0], r[1], r[2], r[3]};
}

//---------------------------------------------------------------------------//
EngineOptions parse_engine(Node const& n)
{
    n.only({"boundary",
            "cfl_safety",
            "max_substep",
            "space_charge",
            "poisson_interval",
            "poisson_tolerance",
            "poisson_max_iterations",
            "stability_bound",
            "max_subcycles",
            "beam_cutoff",
            "settle_floor"});
    EngineOptions e;
    auto const bc = n.string("boundary", "absorbing");
    if (bc == "absorbing")
        e.boundary = Boundary::absorbing;
    else if (bc == "reflecting")
        e.boundary = Boundary::reflecting;
    else
        config_error(join(n.path(), "boundary"),
                     "expected 'absorbing' or 'reflecting'");
    e.cfl_safety = n.number("cfl_safety", e.cfl_safety);
    e.max_substep = n.number("max_substep", e.max_substep);
    e.space_charge = n.boolean("space_charge", e.space_charge);
    e.poisson_interval
        = static_cast<int>(n.integer("poisson_interval", e.poisson_interval));
    e.poisson.tolerance = n.number("poisson_tolerance", e.poisson.tolerance);
    e.poisson.max_iterations = static_cast<int>(
        n.integer("poisson_max_iterations", e.poisson.max_iterations));
    e.kinetics.stability_bound
        = n.number("stability_bound", e.kinetics.stability_bound);
    e.kinetics.max_subcycles = static_cast<int>(
        n.integer("max_subcycles", e.kinetics.max_subcycles));
    e.beam_cutoff = n.number("beam_cutoff", e.beam_cutoff);
    e.settle_floor = n.number("settle_floor", e.settle_floor);

    auto positive = [&n](double v, char const* key) {
        if (!(v > 0))
            config_error(join(n.path(), key), "must be positive");
    };
    positive(e.cfl_safety, "cfl_safety");
    positive(e.max_substep, "max_substep");
    positive(e.poisson_interval, "poisson_interval");
    positive(e.poisson.tolerance, "poisson_tolerance");
    positive(e.poisson.max_iterations, "poisson_max_iterations");
    positive(e.kinetics.stability_bound, "stability_bound");
    positive(e.kinetics.max_subcycles, "max_subcycles");
    positive(e.beam_cutoff, "beam_cutoff");
    if (!(e.settle_floor >= 0))
        config_error(join(n.path(), "settle_floor"), "must be non-negative");
    if (e.cfl_safety > 1)
        config_error(join(n.path(), "cfl_safety"), "must not exceed 1");
    return e;
}

//---------------------------------------------------------------------------//
Preparation parse_preparation(Node const& n)
{
    n.only({"species", "state", "fraction", "shape", "center", "radius", "region"});
    Preparation p;
    p.species = n.string("species");
    p.state = n.string("state");
    p.fraction = n.number("fraction", 1.0);
    if (!(p.fraction >= 0 && p.fraction <= 1))
        config_error(join(n.path(), "fraction"), "must lie in [0, 1]");
    auto const shape = n.string("shape", "everywhere");
    if (shape == "everywhere")
    {
        p.shape = Preparation::Shape::everywhere;
    }
    else if (shape == "disk")
    {
        p.shape = Preparation::Shape::disk;
        auto const c = numbers<2>(n.at("center"), join(n.path(), "center"));
        p.x0 = c[0];
        p.y0 = c[1];
        p.radius = n.number("radius");
        if (!(p.radius > 0))
            config_error(join(n.path(), "radius"), "must be positive");
    }
    else if (shape == "rectangle")
    {
        p.shape = Preparation::Shape::rectangle;
        auto const r
            = parse_region(n.at("region"), join(n.path(), "region"));
        p.x0 = r.x0;
        p.y0 = r.y0;
        p.x1 = r.x1;
        p.y1 = r.y1;
    }
    else
    {
        config_error(join(n.path(), "shape"),
                     "expected 'everywhere', 'disk' or 'rectangle'");
    }
    return p;
}

//---------------------------------------------------------------------------//
ScheduleStep parse_step(Node const& n, GridSpec const& grid)
{
    auto const type = n.string("type");
    ScheduleStep step;
    if (type == "illuminate")
    {
        n.only({"type", "beam", "beams", "duration"});
        FixedIllumination s;
        if (n.has("beam"))
            s.beams.push_back(parse_beam(n.child("beam")));
        if (n.has("beams"))
        {
            auto const& arr = n.array("beams");
            for (std::size_t i = 0; i < arr.size(); ++i)
                s.beams.push_back(
                    parse_beam(Node(arr[i], join(join(n.path(), "beams"), i))));
        }
        s.duration = n.number("duration");
        step = s;
    }
    else if (type == "raster")
    {
        n.only({"type", "region", "step", "dwell", "passes", "beam"});
        RasterScan s;
        s.region = n.has("region")
                       ? parse_region(n.at("region"), join(n.path(), "region"))
                       : grid_region(grid);
        s.step = n.number("step", s.step);
        s.dwell = n.number("dwell", s.dwell);
        s.passes = static_cast<int>(n.integer("passes", s.passes));
        s.beam = parse_beam(n.child("beam"));
        step = s;
    }
    else if (type == "dark")
    {
        n.only({"type", "duration"});
        step = Dark{n.number("duration")};
    }
    else if (type == "readout")
    {
        n.only({"type", "beam", "channel", "mode", "region", "dwell", "label"});
        Readout s;
        s.beam = parse_beam(n.child("beam"));
        s.channel = n.string("channel");
        auto const mode = n.string("mode", "ideal");
        if (mode == "ideal")
            s.mode = ReadoutMode::ideal;
        else if (mode == "perturbative")
            s.mode = ReadoutMode::perturbative;
        else
            config_error(join(n.path(), "mode"),
                         "expected 'ideal' or 'perturbative'");
        if (n.has("region"))
            s.region = parse_region(n.at("region"), join(n.path(), "region"));
        s.dwell = n.number("dwell", s.dwell);
        s.label = n.string("label", s.channel);
        step = s;
    }
    else if (type == "snapshot")
    {
        n.only({"type", "label"});
        step = Snapshot{n.string("label")};
    }
    else
    {
        config_error(join(n.path(), "type"),
                     "unknown step type '" + type
                         + "' (expected illuminate, raster, dark, readout or "
                           "snapshot)");
    }
    with_path(n.path(), [&] {
        validate_step(step, grid);
        return 0;
    });
    return step;
}

//---------------------------------------------------------------------------//
TelegraphStudy parse_telegraph(Node const& n)
{
    n.only({"k_bd",
            "k_db",
            "bright_rate",
            "dark_rate",
            "modifier_bd",
            "modifier_db",
            "start_bright",
            "duration",
            "bin",
            "histogram_bin",
            "remote"});
    TelegraphStudy s;
    auto& m = s.model;
    m.k_bd = n.number("k_bd");
    m.k_db = n.number("k_db");
    m.bright_rate = n.number("bright_rate", m.bright_rate);
    m.dark_rate = n.number("dark_rate", m.dark_rate);
    m.modifier_bd = n.number("modifier_bd", m.modifier_bd);
    m.modifier_db = n.number("modifier_db", m.modifier_db);
    m.start_bright = n.boolean("start_bright", m.start_bright);
    s.duration = n.number("duration", s.duration);
    s.bin = n.number("bin", s.bin);
    s.histogram_bin = n.number("histogram_bin", s.histogram_bin);
    if (n.has("remote"))
    {
        auto const& arr = n.array("remote");
        for (std::size_t i = 0; i < arr.size(); ++i)
        {
            auto const w = numbers<2>(arr[i], join(join(n.path(), "remote"), i));
            s.remote.push_back({w[0], w[1]});
        }
    }
    with_path(n.path(), [&] {
        validate_telegraph(m);
        return 0;
    });
    if (!(s.duration > 0) || !(s.bin > 0) || !(s.histogram_bin > 0))
        config_error(n.path(), "duration, bin and histogram_bin must be positive");
    return s;
}

//---------------------------------------------------------------------------//
std::uint64_t fnv1a(std::string const& s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

//! Line and column of a byte offset (1-based)
std::pair<std::size_t, std::size_t>
line_column(std::string const& text, std::size_t offset)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

//---------------------------------------------------------------------------//
json parse_json_text(std::string const& text, std::string const& source)
{
    try
    {
        return json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        // Position is one past the offending byte
        auto const pos = e.byte > 0 ? e.byte - 1 : 0;
        auto const [line, col] = line_column(text, pos);
        throw Error(ErrorCode::config_error,
                    source + ":" + std::to_string(line) + ":"
                        + std::to_string(col) + ": syntax error");
    }
}

json load_json_file(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in),
            ErrorCode::config_error,
            "cannot open configuration '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    require(!in.bad(),
            ErrorCode::io_error,
            "failed reading configuration '" + path + "'");
    return parse_json_text(buf.str(), path);
}

//---------------------------------------------------------------------------//
void apply_override(json& doc, std::string const& assignment)
{
    auto const eq = assignment.find('=');
    require(eq != std::string::npos && eq > 0,
            ErrorCode::config_error,
            "override '" + assignment + "' is not of the form key=value");
    std::string const key = assignment.substr(0, eq);
    std::string const text = assignment.substr(eq + 1);

    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string p; std::getline(ss, p, '.');)
    {
        require(!p.empty(),
                ErrorCode::config_error,
                "override key '" + key + "' has an empty component");
        parts.push_back(p);
    }

    json value;
    try
    {
        value = json::parse(text);
    }
    catch (json::parse_error const&)
    {
        value = text;
    }

    json* node = &doc;
    std::string walked;
    for (std::size_t i = 0; i < parts.size(); ++i)
    {
        auto const& p = parts[i];
        bool const last = i + 1 == parts.size();
        walked = walked.empty() ? p : walked + "." + p;
        if (node->is_array())
        {
            std::size_t idx = 0;
            try
            {
                std::size_t used = 0;
                idx = std::stoul(p, &used);
                require(used == p.size(),
                        ErrorCode::config_error,
                        "override path '" + walked + "' indexes an array");
            }
            catch (std::logic_error const&)
            {
                throw Error(ErrorCode::config_error,
                            "override path '" + walked
                                + "' must index an array with a number");
            }
            require(idx < node->size(),
                    ErrorCode::config_error,
                    "override path '" + walked + "' is out of range");
            node = &(*node)[idx];
        }
        else if (node->is_object())
        {
            if (!last)
            {
                require(node->contains(p),
                        ErrorCode::config_error,
                        "override path '" + walked + "' does not exist");
            }
            node = &(*node)[p];
        }
        else
        {
            throw Error(ErrorCode::config_error,
                        "override path '" + walked
                            + "' descends into a scalar");
        }
    }
    *node = std::move(value);
}

//---------------------------------------------------------------------------//
ModelDescription parse_model(json const& doc)
{
    Node n(doc, "model");
    n.only({"species", "tunneling", "transport"});
    ModelDescription m;

    if (n.has("transport"))
    {
        auto t = n.child("transport");
        t.only({"diffusion_electron",
                "diffusion_hole",
                "mobility_electron",
                "mobility_hole",
                "permittivity"});
        m.transport.diffusion_electron
            = t.number("diffusion_electron", m.transport.diffusion_electron);
        m.transport.diffusion_hole
            = t.number("diffusion_hole", m.transport.diffusion_hole);
        if (t.has("mobility_electron"))
            m.transport.mobility_electron = t.number("mobility_electron");
        if (t.has("mobility_hole"))
            m.transport.mobility_hole = t.number("mobility_hole");
        m.transport.permittivity
            = t.number("permittivity", m.transport.permittivity);
    }

    auto const& species = n.array("species");
    for (std::size_t si = 0; si < species.size(); ++si)
    {
        Node s(species[si], join(join(n.path(), "species"), si));
        s.only({"name",
                "concentration_ppb",
                "initial_state",
                "trap",
                "release_lifetime",
                "states",
                "photo",
                "capture"});
        SpeciesSpec spec;
        spec.name = s.string("name");
        spec.total_concentration = s.number("concentration_ppb");
        spec.initial_state = s.string("initial_state", "");
        spec.is_trap = s.boolean("trap", false);
        spec.release_lifetime = s.number("release_lifetime", 0);

        auto const& states = s.array("states");
        for (std::size_t k = 0; k < states.size(); ++k)
        {
            Node st(states[k], join(join(s.path(), "states"), k));
            st.only({"label", "charge", "brightness"});
            ChargeStateSpec cs;
            cs.label = st.string("label");
            cs.relative_charge = static_cast<int>(st.integer("charge"));
            if (st.has("brightness"))
            {
                Node b = st.child("brightness");
                for (auto const& [ch, v] : st.at("brightness").items())
                    cs.brightness[ch] = b.number(ch);
            }
            spec.states.push_back(std::move(cs));
        }
        if (s.has("photo"))
        {
            auto const& arr = s.array("photo");
            for (std::size_t k = 0; k < arr.size(); ++k)
            {
                Node p(arr[k], join(join(s.path(), "photo"), k));
                p.only({"from",
                        "to",
                        "carrier",
                        "threshold_ev",
                        "cross_section",
                        "two_photon",
                        "reference_intensity"});
                PhotoTransition pt;
                pt.from_state = p.string("from");
                pt.to_state = p.string("to");
                pt.emitted = parse_carrier(p, "carrier");
                pt.threshold_energy = p.number("threshold_ev");
                pt.two_photon = p.boolean("two_photon", false);
                pt.reference_intensity
                    = p.number("reference_intensity", pt.reference_intensity);
                auto const& tab = p.array("cross_section");
                std::vector<CrossSectionTable::Point> pts;
                for (std::size_t q = 0; q < tab.size(); ++q)
                {
                    auto const xy = numbers<2>(
                        tab[q], join(join(p.path(), "cross_section"), q));
                    pts.emplace_back(xy[0], xy[1]);
                }
                pt.cross_section = with_path(join(p.path(), "cross_section"),
                                             [&] {
                                                 return CrossSectionTable(pts);
                                             });
                spec.photo_transitions.push_back(std::move(pt));
            }
        }
        if (s.has("capture"))
        {
            auto const& arr = s.array("capture");
            for (std::size_t k = 0; k < arr.size(); ++k)
            {
                Node c(arr[k], join(join(s.path(), "capture"), k));
                c.only({"from", "to", "carrier", "coefficient"});
                CaptureChannel cc;
                cc.from_state = c.string("from");
                cc.to_state = c.string("to");
                cc.captured = parse_carrier(c, "carrier");
                cc.coefficient = c.number("coefficient");
                spec.captures.push_back(std::move(cc));
            }
        }
        m.species.push_back(std::move(spec));
    }

    if (n.has("tunneling"))
    {
        auto const& arr = n.array("tunneling");
        for (std::size_t k = 0; k < arr.size(); ++k)
        {
            Node t(arr[k], join(join(n.path(), "tunneling"), k));
            t.only({"donor",
                    "from",
                    "to",
                    "trap",
                    "coefficient",
                    "saturation_intensity",
                    "band_nm"});
            TunnelingChannel tc;
            tc.donor_species = t.string("donor");
            tc.from_state = t.string("from");
            tc.to_state = t.string("to");
            tc.trap_species = t.string("trap");
            tc.coefficient = t.number("coefficient");
            tc.saturation_intensity
                = t.number("saturation_intensity", tc.saturation_intensity);
            if (t.has("band_nm"))
            {
                auto const b = numbers<2>(t.at("band_nm"), join(t.path(), "band_nm"));
                tc.band_min = b[0];
                tc.band_max = b[1];
            }
            m.tunneling.push_back(std::move(tc));
        }
    }
    return m;
}

json model_to_json(ModelDescription const& m)
{
    json species = json::array();
    for (auto const& s : m.species)
    {
        json states = json::array();
        for (auto const& st : s.states)
        {
            json b = json::object();
            for (auto const& [ch, v] : st.brightness)
                b[ch] = v;
            states.push_back(
                {{"label", st.label}, {"charge", st.relative_charge}, {"brightness", b}});
        }
        json photo = json::array();
        for (auto const& p : s.photo_transitions)
        {
            json tab = json::array();
            for (auto const& [wl, sigma] : p.cross_section.points())
                tab.push_back({wl, sigma});
            json pj = {{"from", p.from_state},
                       {"to", p.to_state},
                       {"carrier", carrier_name(p.emitted)},
                       {"threshold_ev", p.threshold_energy},
                       {"cross_section", tab}};
            if (p.two_photon)
            {
                pj["two_photon"] = true;
                pj["reference_intensity"] = p.reference_intensity;
            }
            photo.push_back(std::move(pj));
        }
        json capture = json::array();
        for (auto const& c : s.captures)
        {
            capture.push_back({{"from", c.from_state},
                               {"to", c.to_state},
                               {"carrier", carrier_name(c.captured)},
                               {"coefficient", c.coefficient}});
        }
        json sj = {{"name", s.name},
                   {"concentration_ppb", s.total_concentration},
                   {"states", states},
                   {"photo", photo},
                   {"capture", capture}};
        if (!s.initial_state.empty())
            sj["initial_state"] = s.initial_state;
        if (s.is_trap)
        {
            sj["trap"] = true;
            sj["release_lifetime"] = s.release_lifetime;
        }
        species.push_back(std::move(sj));
    }

    json tunneling = json::array();
    for (auto const& t : m.tunneling)
    {
        tunneling.push_back({{"donor", t.donor_species},
                             {"from", t.from_state},
                             {"to", t.to_state},
                             {"trap", t.trap_species},
                             {"coefficient", t.coefficient},
                             {"saturation_intensity", t.saturation_intensity},
                             {"band_nm", {t.band_min, t.band_max}}});
    }

    json transport = {{"diffusion_electron", m.transport.diffusion_electron},
                      {"diffusion_hole", m.transport.diffusion_hole},
                      {"permittivity", m.transport.permittivity}};
    if (m.transport.mobility_electron)
        transport["mobility_electron"] = *m.transport.mobility_electron;
    if (m.transport.mobility_hole)
        transport["mobility_hole"] = *m.transport.mobility_hole;

    json out = {{"species", species}, {"transport", transport}};
    if (!tunneling.empty())
        out["tunneling"] = tunneling;
    return out;
}

//---------------------------------------------------------------------------//
json engine_to_json(EngineOptions const& e)
{
    return {{"boundary",
             e.boundary == Boundary::absorbing ? "absorbing" : "reflecting"},
            {"cfl_safety", e.cfl_safety},
            {"max_substep", e.max_substep},
            {"space_charge", e.space_charge},
            {"poisson_interval", e.poisson_interval},
            {"poisson_tolerance", e.poisson.tolerance},
            {"poisson_max_iterations", e.poisson.max_iterations},
            {"stability_bound", e.kinetics.stability_bound},
            {"max_subcycles", e.kinetics.max_subcycles},
            {"beam_cutoff", e.beam_cutoff},
            {"settle_floor", e.settle_floor}};
}

//---------------------------------------------------------------------------//
RunConfig parse_run_config(json const& doc)
{
    Node root(doc, "");
    root.only({"schema_version",
               "name",
               "description",
               "figure",
               "seed",
               "grid",
               "model",
               "engine",
               "initial",
               "protocol",
               "telegraph"});
    auto const version = root.integer("schema_version");
    if (version != config_schema_version)
        config_error("schema_version",
                     "unsupported version " + std::to_string(version)
                         + " (expected "
                         + std::to_string(config_schema_version) + ")");

    RunConfig cfg;
    cfg.document = doc;
    cfg.name = root.string("name", "run");
    if (root.has("seed"))
    {
        auto const& s = root.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long>() >= 0))
            config_error("seed", "expected non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (root.has("grid"))
        cfg.grid = parse_grid(root.child("grid"));
    if (root.has("engine"))
        cfg.engine = parse_engine(root.child("engine"));
    if (root.has("model"))
    {
        cfg.model = parse_model(root.at("model"));
        // Validate eagerly so model errors report as configuration errors
        with_path("model", [&] { return validate_model(cfg.model); });
    }
    if (root.has("initial"))
    {
        auto const& arr = root.array("initial");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.preparations.push_back(
                parse_preparation(Node(arr[i], join("initial", i))));
    }
    if (root.has("protocol"))
    {
        if (!root.has("model"))
            config_error("model", "a protocol requires a model");
        auto const& arr = root.array("protocol");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.protocol.push_back(
                parse_step(Node(arr[i], join("protocol", i)), cfg.grid));
    }
    if (root.has("telegraph"))
        cfg.telegraph = parse_telegraph(root.child("telegraph"));
    if (cfg.protocol.empty() && !cfg.telegraph)
        config_error("protocol", "configuration defines nothing to run");
    return cfg;
}

//---------------------------------------------------------------------------//
std::string config_hash(json const& doc)
{
    char buf[17];
    std::snprintf(buf,
                  sizeof(buf),
                  "%016llx",
                  static_cast<unsigned long long>(fnv1a(doc.dump())));
    return buf;
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
