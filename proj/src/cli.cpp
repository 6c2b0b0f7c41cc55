#include "synopsis/cli.hpp"

#include "synopsis/errors.hpp"
#include "synopsis/io.hpp"
#include "synopsis/netpbm.hpp"
#include "synopsis/render.hpp"
#include "synopsis/synth.hpp"
#include "synopsis/tracker.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>

namespace synopsis {

using nlohmann::json;

namespace {

enum class LogLevel { quiet, info, debug };

/// SYNOPSIS_LOG=quiet|info|debug, default quiet.
LogLevel log_level() {
    const char* v = std::getenv("SYNOPSIS_LOG");
    if (!v) return LogLevel::quiet;
    const std::string s(v);
    if (s == "debug") return LogLevel::debug;
    if (s == "info" || s == "1") return LogLevel::info;
    return LogLevel::quiet;
}

class Log {
public:
    explicit Log(std::ostream& err) : err_(err), level_(log_level()) {}
    void info(const std::string& msg) const {
        if (level_ >= LogLevel::info) err_ << "[info] " << msg << '\n';
    }
    void debug(const std::string& msg) const {
        if (level_ >= LogLevel::debug) err_ << "[debug] " << msg << '\n';
    }

private:
    std::ostream& err_;
    LogLevel level_;
};

FrameRate parse_fps(const std::string& s) {
    FrameRate r{0, 1};
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    const auto a = std::from_chars(num.data(), num.data() + num.size(), r.num);
    const auto b = std::from_chars(den.data(), den.data() + den.size(), r.den);
    if (a.ec != std::errc{} || a.ptr != num.data() + num.size() || b.ec != std::errc{} ||
        b.ptr != den.data() + den.size() || r.num <= 0 || r.den <= 0) {
        throw ValidationError("bad frame rate '" + s + "', expected N or N/D");
    }
    return r;
}

struct ParamFlags {
    Params params;
    std::string mode = "transitive";
    std::string sigma = "sqrt_area";

    void add(CLI::App* cmd) {
        cmd->add_option("--alpha", params.alpha, "spatio-temporal grouping threshold")->capture_default_str();
        cmd->add_option("--beta", params.beta, "chronological grouping threshold in frames")->capture_default_str();
        cmd->add_option("--chrono-constant", params.chrono_constant, "cost of a changed start offset")
            ->capture_default_str();
        cmd->add_option("--collision-weight", params.collision_weight, "weight of the collision term")
            ->capture_default_str();
        cmd->add_option("--budget", params.collision_budget, "max cross-group box overlap per frame, px^2")
            ->capture_default_str();
        cmd->add_option("--mode", mode, "grouping mode")
            ->check(CLI::IsMember({"literal", "transitive"}))
            ->capture_default_str();
        cmd->add_option("--sigma", sigma, "distance scale")
            ->check(CLI::IsMember({"area", "sqrt_area"}))
            ->capture_default_str();
    }

    Params resolve() {
        params.grouping_mode = parse_grouping_mode(mode);
        params.sigma_mode = parse_sigma_mode(sigma);
        params.validate();
        return params;
    }
};

json groups_json(const GroupingResult& g) {
    json out = json::array();
    for (const auto& group : g.groups) out.push_back(group.members);
    return out;
}

/// Scene background: explicit file, else the path recorded in the database
/// (relative to the database file), else flat gray.
RgbImage resolve_background(const TubeDatabase& db, const std::filesystem::path& db_path,
                            const std::string& flag, bool required) {
    if (!flag.empty()) return read_rgb(flag);
    if (const auto& bg = db.scene().background) {
        std::filesystem::path p(*bg);
        if (p.is_relative()) p = db_path.parent_path() / p;
        return read_rgb(p);
    }
    if (required) throw ValidationError("stitch mode needs --background or a background in the tube database");
    return RgbImage(db.scene().width, db.scene().height, 128, 128, 128);
}

void require_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw ValidationError("no such file: " + path);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Log log(err);
    CLI::App app{"Video synopsis: tube grouping, rigid shifting and rendering"};
    app.name("synopsis");
    app.require_subcommand(1);

    // track
    auto* track = app.add_subcommand("track", "extract tubes from a directory of PGM frames");
    std::string frames_dir;
    std::string output;
    TrackerConfig tracker;
    std::string fps = "25";
    track->add_option("frames_dir", frames_dir, "directory of 000000.pgm, 000001.pgm, ...")->required();
    track->add_option("-o,--output", output, "tube database to write")->required();
    track->add_option("--learning-rate", tracker.learning_rate)->capture_default_str();
    track->add_option("--k", tracker.k, "foreground threshold in standard deviations")->capture_default_str();
    track->add_option("--stddev-floor", tracker.stddev_floor)->capture_default_str();
    track->add_option("--bootstrap-frames", tracker.bootstrap_frames, "frames in the median background")
        ->capture_default_str();
    track->add_option("--min-area", tracker.min_area, "smallest blob kept, px")->capture_default_str();
    track->add_option("--gate", tracker.gate_radius, "association gate radius, px")->capture_default_str();
    track->add_option("--max-missed", tracker.max_missed)->capture_default_str();
    track->add_option("--min-length", tracker.min_length, "shortest track kept, frames")->capture_default_str();
    track->add_option("--process-noise", tracker.noise.process)->capture_default_str();
    track->add_option("--measurement-noise", tracker.noise.measurement)->capture_default_str();
    track->add_option("--fps", fps, "frame rate as N or N/D")->capture_default_str();

    // group
    auto* group = app.add_subcommand("group", "partition tubes into groups");
    std::string tubes_path;
    ParamFlags group_params;
    group->add_option("tubes", tubes_path, "tube database")->required();
    group_params.add(group);

    // schedule
    auto* schedule = app.add_subcommand("schedule", "group tubes and pack them into a short synopsis");
    ParamFlags schedule_params;
    schedule->add_option("tubes", tubes_path, "tube database")->required();
    schedule->add_option("-o,--output", output, "schedule file to write")->required();
    schedule_params.add(schedule);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "length/energy curve over one parameter");
    ParamFlags sweep_params;
    std::string axis = "alpha";
    std::vector<double> values;
    sweep_cmd->add_option("tubes", tubes_path, "tube database")->required();
    sweep_cmd->add_option("--axis", axis, "parameter to vary")
        ->check(CLI::IsMember({"alpha", "beta", "budget"}))
        ->capture_default_str();
    sweep_cmd->add_option("--values", values, "ascending, comma separated")->delimiter(',')->required();
    sweep_cmd->add_option("-o,--output", output, "CSV to write")->required();
    sweep_params.add(sweep_cmd);

    // render
    auto* render = app.add_subcommand("render", "draw the synopsis as PPM frames");
    std::string schedule_path;
    std::string render_mode = "boxes";
    std::string source_frames;
    std::string background;
    SolverOptions solver;
    render->add_option("tubes", tubes_path, "tube database")->required();
    render->add_option("schedule", schedule_path, "schedule file")->required();
    render->add_option("--mode", render_mode)->check(CLI::IsMember({"boxes", "stitch"}))->capture_default_str();
    render->add_option("-o,--output", output, "output directory")->required();
    render->add_option("--frames", source_frames, "source frames, needed for stitch");
    render->add_option("--background", background, "background PGM/PPM");
    render->add_option("--max-iters", solver.max_iters, "Poisson solver sweep limit")->capture_default_str();
    render->add_option("--tolerance", solver.tolerance, "Poisson solver residual target")->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic tube database");
    std::string spec_path;
    std::string synth_frames;
    std::optional<std::uint64_t> seed;
    synth->add_option("spec", spec_path, "scene spec JSON")->required();
    synth->add_option("-o,--output", output, "tube database to write")->required();
    synth->add_option("--frames-dir", synth_frames, "also write PGM frames and background.pgm here");
    synth->add_option("--seed", seed, "override the spec seed");

    // energy
    auto* energy = app.add_subcommand("energy", "recompute the energy of a schedule");
    energy->add_option("tubes", tubes_path, "tube database")->required();
    energy->add_option("schedule", schedule_path, "schedule file")->required();

    std::vector<const char*> argv{"synopsis"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
            app.get_subcommand_no_throw(args.front()) == nullptr) {
            err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
            return 1;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    json summary;
    try {
        if (*track) {
            tracker.fps = parse_fps(fps);
            const auto frames = read_frame_sequence(frames_dir);
            log.info("read " + std::to_string(frames.size()) + " frames");
            const TubeDatabase db = track_frames(frames, tracker);
            save_tube_db(db, output);
            summary = {{"command", "track"},
                       {"frames", frames.size()},
                       {"tubes", db.size()},
                       {"output", output},
                       {"hash", content_hash(db)}};
        } else if (*group) {
            const Params p = group_params.resolve();
            require_file(tubes_path);
            const TubeDatabase db = load_tube_db(tubes_path);
            const GroupingResult g = group_tubes(db, p);
            summary = {{"command", "group"},
                       {"tubes", db.size()},
                       {"alpha", p.alpha},
                       {"beta", p.beta},
                       {"mode", to_string(p.grouping_mode)},
                       {"group_count", g.groups.size()},
                       {"groups", groups_json(g)}};
        } else if (*schedule) {
            const Params p = schedule_params.resolve();
            require_file(tubes_path);
            const TubeDatabase db = load_tube_db(tubes_path);
            const DistanceCache cache(db, p.sigma_mode);
            const GroupingResult g = group_tubes(db, p, &cache);
            log.info(std::to_string(g.groups.size()) + " groups");
            const SynopsisSchedule s = minimize_length(db, g, p, &cache);
            save_schedule(s, db, output);
            summary = {{"command", "schedule"},
                       {"tubes", db.size()},
                       {"group_count", g.groups.size()},
                       {"original_span", db.original_span()},
                       {"length", s.length},
                       {"energy", energy_to_json(s.energy)},
                       {"max_cross_group_overlap", max_cross_group_overlap(db, s.mapping, s.groups)},
                       {"output", output}};
            summary["energy"].erase("pairs");
        } else if (*sweep_cmd) {
            const Params p = sweep_params.resolve();
            require_file(tubes_path);
            const TubeDatabase db = load_tube_db(tubes_path);
            const auto rows = sweep(db, parse_sweep_axis(axis), values, p);
            export_curve_csv(rows, output);
            json jr = json::array();
            for (const auto& r : rows) jr.push_back({r.value, r.length, r.energy});
            summary = {{"command", "sweep"},
                       {"axis", axis},
                       {"original_span", db.original_span()},
                       {"rows", std::move(jr)},
                       {"output", output}};
        } else if (*render) {
            if (solver.max_iters < 1 || !(solver.tolerance > 0.0)) {
                throw ValidationError("--max-iters must be >= 1 and --tolerance > 0");
            }
            require_file(tubes_path);
            require_file(schedule_path);
            const TubeDatabase db = load_tube_db(tubes_path);
            const SynopsisSchedule s = load_schedule(schedule_path, db);
            std::vector<RgbImage> frames;
            if (render_mode == "boxes") {
                frames = render_boxes(db, s, resolve_background(db, tubes_path, background, false));
            } else {
                if (source_frames.empty()) throw ValidationError("stitch mode needs --frames");
                frames = render_stitched(db, s, resolve_background(db, tubes_path, background, true), source_frames,
                                         solver);
            }
            const std::size_t n = write_rendered_frames(frames, output);
            summary = {{"command", "render"}, {"mode", render_mode}, {"frames", n}, {"output", output}};
        } else if (*synth) {
            require_file(spec_path);
            SceneSpec spec = load_scene_spec(spec_path);
            if (seed) spec.seed = *seed;
            SynthScene scene = synth_scene(spec);
            TubeDatabase db = scene.db;
            if (!synth_frames.empty()) {
                write_frame_sequence(render_scene_frames(scene, spec), synth_frames);
                const auto bg_path = std::filesystem::path(synth_frames) / "background.pgm";
                write_pgm(scene_background(spec), bg_path);
                SceneInfo info = db.scene();
                info.background = std::filesystem::absolute(bg_path).lexically_normal().string();
                std::vector<Tube> tubes;
                for (const auto& [id, t] : db.tubes()) tubes.push_back(t);
                db = TubeDatabase(std::move(info), std::move(tubes));
            }
            save_tube_db(db, output);
            summary = {{"command", "synth"},
                       {"objects", scene.objects.size()},
                       {"tubes", db.size()},
                       {"original_span", db.original_span()},
                       {"output", output},
                       {"hash", content_hash(db)}};
        } else if (*energy) {
            require_file(tubes_path);
            require_file(schedule_path);
            const TubeDatabase db = load_tube_db(tubes_path);
            const SynopsisSchedule s = load_schedule(schedule_path, db);
            const EnergyBreakdown e = total_energy(db, s.mapping, s.params);
            summary = {{"command", "energy"},
                       {"length", synopsis_length(db, s.mapping)},
                       {"energy", energy_to_json(e)},
                       {"matches_schedule", e == s.energy}};
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const OutOfRangeError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const StaleReferenceError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return 2;
    }
    out << summary.dump() << '\n';
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace synopsis
