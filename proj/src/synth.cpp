#include "synopsis/synth.hpp"

#include "synopsis/errors.hpp"
#include "synopsis/io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

namespace synopsis {

using nlohmann::json;

namespace {

BoundingBox object_box(const SceneObject& o, Frame t) {
    const double dt = static_cast<double>(t - o.entry_frame);
    return BoundingBox{t, static_cast<int>(std::lround(o.x + o.vx * dt)), static_cast<int>(std::lround(o.y + o.vy * dt)),
                       o.w, o.h};
}

bool inside(const BoundingBox& b, int width, int height) {
    return b.x >= 0 && b.y >= 0 && b.x + b.w <= width && b.y + b.h <= height;
}

/// Frames during which the object is fully in view: from its first such frame
/// up to the frame before it first leaves again.
std::vector<BoundingBox> visible_boxes(const SceneObject& o, const SceneSpec& spec) {
    std::vector<BoundingBox> out;
    for (Frame t = std::max<Frame>(o.entry_frame, 0); t < spec.duration; ++t) {
        const BoundingBox b = object_box(o, t);
        if (inside(b, spec.width, spec.height)) {
            out.push_back(b);
        } else if (!out.empty()) {
            break;
        }
    }
    return out;
}

SceneObject random_object(const SceneSpec& spec, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size(8, std::max(8, std::min(24, std::min(spec.width, spec.height) / 4)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SceneObject o;
    o.w = size(rng);
    o.h = size(rng);
    o.entry_frame = static_cast<Frame>(unit(rng) * 0.75 * static_cast<double>(spec.duration));
    o.x = unit(rng) * (spec.width - o.w);
    o.y = unit(rng) * (spec.height - o.h);
    const double speed = 0.5 + 2.5 * unit(rng);
    const double heading = 2.0 * std::numbers::pi * unit(rng);
    o.vx = speed * std::cos(heading);
    o.vy = speed * std::sin(heading);
    o.intensity = static_cast<std::uint8_t>(180 + static_cast<int>(unit(rng) * 70.0));
    return o;
}

} // namespace

void SceneSpec::validate() const {
    if (width < 4 || height < 4) throw ValidationError("scene must be at least 4x4");
    if (duration < 1) throw ValidationError("duration must be >= 1 frame");
    if (fps.num <= 0 || fps.den <= 0) throw ValidationError("fps must be positive");
    if (!(fragmentation_rate >= 0.0 && fragmentation_rate <= 100.0)) {
        throw ValidationError("fragmentation rate must lie in [0, 100]");
    }
    if (random_objects < 0) throw ValidationError("random_objects must be >= 0");
    if (!(noise_stddev >= 0.0)) throw ValidationError("noise_stddev must be >= 0");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const auto& o = objects[i];
        if (o.w < 1 || o.h < 1 || o.w > width || o.h > height) {
            throw ValidationError("object " + std::to_string(i) + ": size must fit the scene");
        }
        if (!std::isfinite(o.x) || !std::isfinite(o.y) || !std::isfinite(o.vx) || !std::isfinite(o.vy)) {
            throw ValidationError("object " + std::to_string(i) + ": non-finite motion");
        }
    }
}

SceneSpec scene_spec_from_json(const json& j) {
    SceneSpec spec;
    try {
        spec.width = j.value("width", spec.width);
        spec.height = j.value("height", spec.height);
        spec.duration = j.value("duration", spec.duration);
        if (j.contains("fps")) {
            spec.fps = FrameRate{j.at("fps").at(0).get<std::int64_t>(), j.at("fps").at(1).get<std::int64_t>()};
        }
        spec.seed = j.value("seed", spec.seed);
        spec.fragmentation_rate = j.value("fragmentation_rate", spec.fragmentation_rate);
        spec.random_objects = j.value("random_objects", spec.random_objects);
        spec.noise_stddev = j.value("noise_stddev", spec.noise_stddev);
        for (const auto& jo : j.value("objects", json::array())) {
            SceneObject o;
            o.entry_frame = jo.value("entry_frame", Frame{0});
            o.x = jo.at("entry").at(0).get<double>();
            o.y = jo.at("entry").at(1).get<double>();
            o.vx = jo.at("velocity").at(0).get<double>();
            o.vy = jo.at("velocity").at(1).get<double>();
            o.w = jo.at("size").at(0).get<int>();
            o.h = jo.at("size").at(1).get<int>();
            o.intensity = static_cast<std::uint8_t>(jo.value("intensity", 220));
            spec.objects.push_back(o);
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scene spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

json scene_spec_to_json(const SceneSpec& spec) {
    json objects = json::array();
    for (const auto& o : spec.objects) {
        objects.push_back({{"entry_frame", o.entry_frame},
                           {"entry", {o.x, o.y}},
                           {"velocity", {o.vx, o.vy}},
                           {"size", {o.w, o.h}},
                           {"intensity", o.intensity}});
    }
    return {{"width", spec.width},
            {"height", spec.height},
            {"duration", spec.duration},
            {"fps", {spec.fps.num, spec.fps.den}},
            {"seed", spec.seed},
            {"fragmentation_rate", spec.fragmentation_rate},
            {"random_objects", spec.random_objects},
            {"noise_stddev", spec.noise_stddev},
            {"objects", std::move(objects)}};
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
    try {
        return scene_spec_from_json(json::parse(read_text_file(path)));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

SynthScene synth_scene(const SceneSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    SynthScene out;
    out.objects = spec.objects;
    for (int i = 0; i < spec.random_objects; ++i) {
        out.objects.push_back(random_object(spec, rng));
    }

    std::bernoulli_distribution breaks(spec.fragmentation_rate / 100.0);
    std::vector<Tube> tubes;
    TubeId next_id = 1;
    for (std::size_t oi = 0; oi < out.objects.size(); ++oi) {
        const auto boxes = visible_boxes(out.objects[oi], spec);
        std::vector<BoundingBox> fragment;
        for (std::size_t k = 0; k < boxes.size(); ++k) {
            // A break drops frame k and starts a new fragment at k + 1.
            const bool can_break = !fragment.empty() && k + 1 < boxes.size();
            if (can_break && breaks(rng)) {
                out.source_object[next_id] = oi;
                tubes.emplace_back(next_id++, std::move(fragment));
                fragment.clear();
                continue;
            }
            fragment.push_back(boxes[k]);
        }
        if (!fragment.empty()) {
            out.source_object[next_id] = oi;
            tubes.emplace_back(next_id++, std::move(fragment));
        }
    }

    SceneInfo scene;
    scene.width = spec.width;
    scene.height = spec.height;
    scene.fps = spec.fps;
    out.db = TubeDatabase(std::move(scene), std::move(tubes));
    return out;
}

GrayFrame scene_background(const SceneSpec& spec) {
    GrayFrame bg(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const double v = 60.0 + 20.0 * std::sin(x / 17.0) + 15.0 * std::cos(y / 13.0);
            bg.at(x, y) = static_cast<std::uint8_t>(std::lround(v));
        }
    }
    return bg;
}

std::vector<GrayFrame> render_scene_frames(const SynthScene& scene, const SceneSpec& spec) {
    spec.validate();
    const GrayFrame bg = scene_background(spec);
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> noise(0.0, spec.noise_stddev > 0.0 ? spec.noise_stddev : 1.0);

    std::vector<std::optional<FrameInterval>> lifetimes;
    for (const auto& o : scene.objects) {
        const auto visible = visible_boxes(o, spec);
        lifetimes.push_back(visible.empty() ? std::nullopt
                                            : std::optional{FrameInterval{visible.front().frame, visible.back().frame}});
    }

    std::vector<GrayFrame> frames;
    frames.reserve(static_cast<std::size_t>(spec.duration));
    for (Frame t = 0; t < spec.duration; ++t) {
        GrayFrame f = bg;
        for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
            const auto& o = scene.objects[oi];
            const auto& life = lifetimes[oi];
            if (!life || t < life->first || t > life->last) continue;
            const BoundingBox b = object_box(o, t);
            for (int y = std::max(b.y, 0); y < std::min(b.y + b.h, spec.height); ++y) {
                for (int x = std::max(b.x, 0); x < std::min(b.x + b.w, spec.width); ++x) {
                    f.at(x, y) = o.intensity;
                }
            }
        }
        if (spec.noise_stddev > 0.0) {
            for (auto& p : f.pixels) {
                p = static_cast<std::uint8_t>(std::clamp(std::lround(p + noise(rng)), 0L, 255L));
            }
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

} // namespace synopsis
