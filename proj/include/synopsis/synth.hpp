#pragma once

#include "synopsis/image.hpp"
#include "synopsis/tube.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

namespace synopsis {

/// A square-ish object moving in a straight line from its entry frame until it
/// leaves the scene or the clip ends.
struct SceneObject {
    Frame entry_frame = 0;
    double x = 0.0;  // top-left at entry
    double y = 0.0;
    double vx = 0.0;  // px per frame
    double vy = 0.0;
    int w = 10;
    int h = 10;
    std::uint8_t intensity = 220;
};

struct SceneSpec {
    int width = 320;
    int height = 240;
    Frame duration = 300;
    FrameRate fps;
    std::uint64_t seed = 1;
    /// Expected number of tracking breaks per 100 frames of an object's life.
    double fragmentation_rate = 0.0;
    std::vector<SceneObject> objects;
    /// Extra objects drawn from the seed on top of `objects`.
    int random_objects = 0;
    /// Gaussian pixel noise for rendered frames.
    double noise_stddev = 0.0;

    void validate() const;
};

SceneSpec scene_spec_from_json(const nlohmann::json& j);
nlohmann::json scene_spec_to_json(const SceneSpec& spec);
SceneSpec load_scene_spec(const std::filesystem::path& path);

struct SynthScene {
    TubeDatabase db;
    std::vector<SceneObject> objects;           // explicit objects followed by random ones
    std::map<TubeId, std::size_t> source_object; // tube id -> index into objects
};

/// Deterministic under the seed. Rate 0 gives one tube per object that is ever
/// fully in view; otherwise tracks break with a one-frame gap between fragments.
SynthScene synth_scene(const SceneSpec& spec);

/// Grayscale frames 0..duration-1: textured background plus every object at
/// its true position, including frames dropped by fragmentation.
std::vector<GrayFrame> render_scene_frames(const SynthScene& scene, const SceneSpec& spec);

/// The object-free background used by render_scene_frames (without noise).
GrayFrame scene_background(const SceneSpec& spec);

} // namespace synopsis
