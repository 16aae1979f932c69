//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Cli.cc
//---------------------------------------------------------------------------//
#include "dcsim/Cli.hh"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "dcsim/Analysis.hh"
#include "dcsim/Config.hh"
#include "dcsim/Simulation.hh"

#ifndef DCSIM_VERSION
#    define DCSIM_VERSION "unknown"
#endif

using nlohmann::json;
namespace fs = std::filesystem;

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
std::string indexed_name(char const* stem, std::size_t index, char const* ext)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%03zu.%s", stem, index, ext);
    return buf;
}

//! Channel names become part of file names
std::string file_token(std::string const& s)
{
    std::string out;
    for (char c : s)
    {
        bool const plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')
                           || (c >= '0' && c <= '9') || c == '_' || c == '.';
        if (plain)
            out += c;
        else if (c == '-')
            out += "m";
        else if (c == '+')
            out += "p";
        else
            out += '_';
    }
    return out;
}

//---------------------------------------------------------------------------//
// Artifact emission during a run
//---------------------------------------------------------------------------//
class ArtifactWriter
{
  public:
    ArtifactWriter(fs::path dir, ModelRegistry const* reg)
        : dir_(std::move(dir)), reg_(reg)
    {
    }

    void operator()(ProtocolOutput const& out)
    {
        if (auto const* img = std::get_if<ReadoutImage>(&out))
        {
            std::string const name = indexed_name("image", count_++, "dcs");
            GridDump dump;
            dump.nx = static_cast<std::uint32_t>(img->nx);
            dump.ny = static_cast<std::uint32_t>(img->ny);
            dump.planes.push_back(img->counts);
            write_grid_dump((dir_ / name).string(), dump);
            artifacts_.push_back(image_artifact(*img, name));

            auto& s = series_[img->channel];
            s[0].push_back(img->time);
            s[1].push_back(img->mean());
            s[2].push_back(*std::max_element(img->counts.begin(),
                                             img->counts.end()));
        }
        else if (auto const* snap = std::get_if<SnapshotRecord>(&out))
        {
            std::string const name = indexed_name("snapshot", count_++, "dcs");
            write_grid_dump((dir_ / name).string(), state_dump(snap->state));
            Artifact a;
            a.path = name;
            a.kind = "snapshot";
            a.label = snap->label;
            a.time = snap->time;
            a.extra = {{"planes", state_plane_names(*reg_)},
                       {"dx", snap->state.grid.dx}};
            artifacts_.push_back(std::move(a));
        }
    }

    //! Per-channel readout time series
    void finish_series()
    {
        for (auto const& [channel, cols] : series_)
        {
            CsvTable t;
            t.header = {"time", "mean", "max"};
            t.columns.assign(cols.begin(), cols.end());
            std::string const name = "series_" + file_token(channel) + ".csv";
            write_csv((dir_ / name).string(), t);
            Artifact a;
            a.path = name;
            a.kind = "series";
            a.channel = channel;
            a.time = cols[0].empty() ? 0 : cols[0].back();
            artifacts_.push_back(std::move(a));
        }
    }

    void telegraph(TelegraphResult const& tr, TelegraphStudy const& study)
    {
        auto trace = [&](TelegraphTrace const& t, std::string const& which) {
            CsvTable tab;
            tab.header = {"time", "bright"};
            tab.columns.resize(2);
            for (std::size_t i = 0; i < t.times.size(); ++i)
            {
                tab.columns[0].push_back(t.times[i]);
                tab.columns[1].push_back(t.bright[i] ? 1 : 0);
            }
            emit_csv("trace_" + which + ".csv", "trace", which, tab, t.duration)
                .extra
                = {{"duration", t.duration}};
        };
        auto counts = [&](std::vector<double> const& c, std::string const& which) {
            CsvTable tab;
            tab.header = {"time", "kcps"};
            tab.columns.resize(2);
            for (std::size_t i = 0; i < c.size(); ++i)
            {
                tab.columns[0].push_back(i * study.bin);
                tab.columns[1].push_back(c[i]);
            }
            emit_csv("counts_" + which + ".csv", "counts", which, tab, study.duration)
                .extra
                = {{"bin", study.bin}};
        };
        auto hist = [&](Histogram const& h, std::string const& which) {
            CsvTable tab;
            tab.header = {"kcps", "count"};
            tab.columns.resize(2);
            for (std::size_t k = 0; k < h.counts.size(); ++k)
            {
                tab.columns[0].push_back(h.center(k));
                tab.columns[1].push_back(static_cast<double>(h.counts[k]));
            }
            emit_csv("histogram_" + which + ".csv", "histogram", which, tab, study.duration)
                .extra
                = {{"bin_width", h.bin_width}};
        };
        trace(tr.reference, "reference");
        trace(tr.remote, "remote");
        counts(tr.reference_counts, "reference");
        counts(tr.remote_counts, "remote");
        hist(tr.reference_histogram, "reference");
        hist(tr.remote_histogram, "remote");
    }

    std::vector<Artifact>& artifacts() { return artifacts_; }

  private:
    fs::path dir_;
    ModelRegistry const* reg_;
    std::size_t count_{0};
    std::vector<Artifact> artifacts_;
    std::map<std::string, std::array<std::vector<double>, 3>> series_;

    Artifact& emit_csv(std::string const& name,
                       char const* kind,
                       std::string const& label,
                       CsvTable const& tab,
                       double time)
    {
        write_csv((dir_ / name).string(), tab);
        Artifact a;
        a.path = name;
        a.kind = kind;
        a.label = label;
        a.time = time;
        artifacts_.push_back(std::move(a));
        return artifacts_.back();
    }
};

//---------------------------------------------------------------------------//
// Analysis helpers
//---------------------------------------------------------------------------//
struct StoredRun
{
    fs::path dir;
    RunManifest manifest;

    std::string file(Artifact const& a) const { return (dir / a.path).string(); }

    //! Images of a channel ordered by protocol time
    std::vector<ReadoutImage> images(std::string const& channel,
                                     std::string const& label = {}) const
    {
        std::vector<ReadoutImage> out;
        for (auto const& a : manifest.artifacts)
        {
            if (a.kind != "image" || a.channel != channel)
                continue;
            if (!label.empty() && a.label != label)
                continue;
            out.push_back(load_image(read_grid_dump(file(a)), a));
        }
        require(!out.empty(),
                ErrorCode::missing_artifact,
                "no image artifact for channel '" + channel + "'"
                    + (label.empty() ? "" : " with label '" + label + "'"));
        std::stable_sort(out.begin(), out.end(), [](auto const& x, auto const& y) {
            return x.time < y.time;
        });
        return out;
    }

    Artifact const& find(std::string const& kind, std::string const& label) const
    {
        for (auto const& a : manifest.artifacts)
        {
            if (a.kind == kind && a.label == label)
                return a;
        }
        throw Error(ErrorCode::missing_artifact,
                    "no " + kind + " artifact labeled '" + label + "'");
    }
};

std::array<double, 2> center_of(json const& a)
{
    if (!a.contains("center"))
        return {0, 0};
    return a.at("center").get<std::array<double, 2>>();
}

EdgeThreshold threshold_of(json const& a)
{
    json const t = a.value("threshold", json{{"fraction", 0.5}});
    if (t.contains("kcps"))
        return EdgeThreshold::kcps(t.at("kcps").get<double>());
    return EdgeThreshold::of_peak(t.value("fraction", 0.5));
}

double default_bin(ReadoutImage const& img, json const& a)
{
    return a.value("bin_width", img.pitch);
}

json profile_analysis(StoredRun const& run,
                      json const& a,
                      std::string const& name,
                      fs::path const& out_dir)
{
    auto const imgs = run.images(a.at("channel").get<std::string>(),
                                 a.value("label", std::string{}));
    auto const& img = imgs.back();
    auto const c = center_of(a);
    RadialProfile p = radial_profile(img, c[0], c[1], default_bin(img, a));
    CsvTable t;
    t.header = {"radius", "mean", "pixels"};
    t.columns = {p.radii, p.mean, {}};
    for (auto n : p.pixels)
        t.columns[2].push_back(static_cast<double>(n));
    std::string const csv = "profile_" + file_token(name) + ".csv";
    write_csv((out_dir / csv).string(), t);

    json rep = {{"parameters",
                 {{"peak", *std::max_element(p.mean.begin(), p.mean.end())},
                  {"center_value", p.mean.front()}}},
                {"profile_csv", csv},
                {"time", img.time}};
    auto const imax = std::max_element(p.mean.begin(), p.mean.end())
                      - p.mean.begin();
    rep["parameters"]["peak_radius"] = p.radii[static_cast<std::size_t>(imax)];
    try
    {
        rep["parameters"]["edge_radius"] = torus_edge_radius(p, threshold_of(a));
    }
    catch (Error const& e)
    {
        if (e.code() != ErrorCode::no_crossing)
            throw;
        rep["parameters"]["edge_radius"] = nullptr;
    }
    return rep;
}

json power_law_analysis(StoredRun const& run, json const& a)
{
    auto const imgs = run.images(a.at("channel").get<std::string>());
    auto const c = center_of(a);
    double const t_min = a.value("t_min", 0.0);
    double const t_max = a.value("t_max", 1e300);
    std::vector<double> t, sigma;
    json skipped = json::array();
    for (auto const& img : imgs)
    {
        if (img.time < t_min || img.time > t_max)
            continue;
        auto const p = radial_profile(img, c[0], c[1], default_bin(img, a));
        try
        {
            sigma.push_back(torus_edge_radius(p, threshold_of(a)));
            t.push_back(img.time);
        }
        catch (Error const& e)
        {
            if (e.code() != ErrorCode::no_crossing)
                throw;
            skipped.push_back(img.time);
        }
    }
    std::optional<double> fixed;
    if (a.contains("fixed_n") && !a.at("fixed_n").is_null())
        fixed = a.at("fixed_n").get<double>();
    PowerLawFit const f = fit_power_law(t, sigma, fixed);
    return {{"parameters", {{"D", f.D}, {"n", f.n}}},
            {"uncertainties", {{"n", f.n_stderr}}},
            {"residual_norm", f.residual_norm},
            {"points", {{"time", t}, {"edge_radius", sigma}}},
            {"skipped_times", skipped}};
}

json biexp_analysis(StoredRun const& run, json const& a)
{
    auto const imgs = run.images(a.at("channel").get<std::string>());
    std::vector<double> t, y;
    for (auto const& img : imgs)
    {
        t.push_back(img.time);
        y.push_back(img.mean());
    }
    // Decay clock starts at the first readout
    double const t0 = a.value("t0", 0.0);
    for (double& v : t)
        v -= t0;
    BiExpFit const f = fit_biexponential(t, y);
    return {{"parameters",
             {{"A1", f.A1},
              {"k1", f.k1},
              {"A2", f.A2},
              {"k2", f.k2},
              {"offset", f.offset}}},
            {"single_exponential", f.single_exponential},
            {"residual_norm", f.residual_norm},
            {"iterations", f.iterations}};
}

json anticorrelation_analysis(StoredRun const& run, json const& a)
{
    auto const ia = run.images(a.at("a").get<std::string>()).back();
    auto const ib = run.images(a.at("b").get<std::string>()).back();
    auto const c = center_of(a);
    auto const mask = annulus_mask(
        ia, c[0], c[1], a.value("r_inner", 0.0), a.value("r_outer", 1e300));
    std::size_t const n = static_cast<std::size_t>(
        std::count(mask.begin(), mask.end(), char{1}));
    return {{"parameters", {{"r", anticorrelation(ia, ib, mask)}}},
            {"pixels", n}};
}

json occupancy_analysis(StoredRun const& run, json const& a)
{
    std::string const which = a.value("trace", std::string{"reference"});
    Artifact const& art = run.find("trace", which);
    CsvTable const tab = read_csv(run.file(art));
    TelegraphTrace tr;
    tr.times = tab.column("time");
    for (double b : tab.column("bright"))
        tr.bright.push_back(b > 0.5 ? 1 : 0);
    tr.duration = art.extra.value("duration", art.time);
    OccupancyOptions opt;
    opt.seed = a.value("seed", std::uint64_t{0});
    auto const est = estimate_occupancy(tr, opt);
    return {{"parameters", {{"fraction", est.fraction}}},
            {"uncertainties", {{"fraction", est.std_error}}},
            {"events", est.events}};
}

}  // namespace

//---------------------------------------------------------------------------//
ExitCode exit_code_for(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::stability_violation:
        case ErrorCode::non_convergence:
        case ErrorCode::step_out_of_bounds:
        case ErrorCode::unknown_channel:
            return ExitCode::engine;
        case ErrorCode::empty_annulus:
        case ErrorCode::no_crossing:
        case ErrorCode::degenerate_input:
        case ErrorCode::zero_variance:
        case ErrorCode::insufficient_events:
        case ErrorCode::missing_artifact:
            return ExitCode::analysis;
        default:
            return ExitCode::config;
    }
}

json error_report(ErrorCode code, std::string const& message)
{
    char const* category = "config";
    switch (exit_code_for(code))
    {
        case ExitCode::engine: category = "engine"; break;
        case ExitCode::analysis: category = "analysis"; break;
        default: break;
    }
    return {{"error",
             {{"code", std::string(to_string(code))},
              {"category", category},
              {"exit_code", static_cast<int>(exit_code_for(code))},
              {"message", message}}}};
}

//---------------------------------------------------------------------------//
json resolve_config(std::string const& config_or_preset)
{
    std::error_code ec;
    if (fs::is_regular_file(config_or_preset, ec))
        return load_json_file(config_or_preset);
    if (is_preset(config_or_preset))
        return preset_document(config_or_preset);
    throw Error(ErrorCode::config_error,
                "'" + config_or_preset
                    + "' is neither a readable configuration file nor a "
                      "preset name");
}

RunManifest cmd_run(std::string const& config_or_preset, RunOptions const& options)
{
    RunManifest manifest;
    manifest.start_time = utc_timestamp();
    manifest.engine_version = DCSIM_VERSION;

    json doc = resolve_config(config_or_preset);
    for (auto const& o : options.overrides)
        apply_override(doc, o);
    if (options.seed)
        doc["seed"] = *options.seed;
    RunConfig const cfg = parse_run_config(doc);

    manifest.name = cfg.name;
    manifest.config_hash = config_hash(doc);
    manifest.seed = cfg.seed;
    manifest.overrides = options.overrides;
    manifest.config = doc;

    fs::path const dir(options.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec && fs::is_directory(dir),
            ErrorCode::io_error,
            "cannot create output directory '" + options.out_dir + "'");

    std::optional<ModelRegistry> reg;
    if (!cfg.protocol.empty())
        reg.emplace(validate_model(cfg.model));
    ArtifactWriter writer(dir, reg ? &*reg : nullptr);

    if (!cfg.protocol.empty())
    {
        SimulationState state
            = make_initial_state(*reg, cfg.grid, cfg.preparations);
        ProtocolRunner runner(*reg, cfg.engine);
        for (auto const& step : cfg.protocol)
            runner.execute(state, step, std::ref(writer));
        writer.finish_series();
    }
    if (cfg.telegraph)
        writer.telegraph(run_telegraph(*cfg.telegraph, cfg.seed), *cfg.telegraph);

    manifest.artifacts = std::move(writer.artifacts());
    manifest.end_time = utc_timestamp();
    write_manifest((dir / "manifest.json").string(), manifest);
    return manifest;
}

//---------------------------------------------------------------------------//
json cmd_analyze(std::string const& manifest_path,
                 std::string const& spec,
                 std::optional<std::string> out_dir)
{
    StoredRun run;
    run.manifest = read_manifest(manifest_path);
    run.dir = fs::path(manifest_path).parent_path();
    for (auto const& a : run.manifest.artifacts)
    {
        std::error_code ec;
        require(fs::is_regular_file(run.dir / a.path, ec),
                ErrorCode::missing_artifact,
                "artifact file '" + run.file(a) + "' is missing");
    }

    std::error_code ec;
    json const sdoc = fs::is_regular_file(spec, ec)
                          ? load_json_file(spec)
                          : parse_json_text(spec, "<analysis spec>");
    require(sdoc.is_object() && sdoc.contains("analyses")
                && sdoc.at("analyses").is_array(),
            ErrorCode::config_error,
            "analysis spec needs an 'analyses' list");

    fs::path const dir = out_dir ? fs::path(*out_dir) : run.dir;
    fs::create_directories(dir, ec);

    json reports = json::array();
    auto const& list = sdoc.at("analyses");
    for (std::size_t i = 0; i < list.size(); ++i)
    {
        json const& a = list[i];
        std::string const where = "analyses." + std::to_string(i);
        require(a.is_object() && a.contains("type"),
                ErrorCode::config_error,
                where + ": missing 'type'");
        std::string const type = a.at("type").get<std::string>();
        std::string const name = a.value("name", type + "_" + std::to_string(i));
        json rep;
        try
        {
            if (type == "radial_profile")
                rep = profile_analysis(run, a, name, dir);
            else if (type == "power_law")
                rep = power_law_analysis(run, a);
            else if (type == "biexponential")
                rep = biexp_analysis(run, a);
            else if (type == "anticorrelation")
                rep = anticorrelation_analysis(run, a);
            else if (type == "occupancy")
                rep = occupancy_analysis(run, a);
            else
                throw Error(ErrorCode::config_error,
                            where + ": unknown analysis type '" + type + "'");
        }
        catch (json::exception const& e)
        {
            throw Error(ErrorCode::config_error, where + ": " + e.what());
        }
        rep["name"] = name;
        rep["type"] = type;
        reports.push_back(std::move(rep));
    }

    json out = {{"run", run.manifest.name},
                {"config_hash", run.manifest.config_hash},
                {"reports", reports}};
    write_text_file((dir / "reports.json").string(), out.dump(2) + "\n");
    return out;
}

//---------------------------------------------------------------------------//
std::vector<PresetInfo> const& cmd_presets()
{
    return preset_catalog();
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
