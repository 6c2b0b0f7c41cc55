#include "doctest.h"

#include "synopsis/errors.hpp"
#include "synopsis/synth.hpp"

using namespace synopsis;

TEST_CASE("single object without fragmentation") {
    SceneSpec spec;
    spec.duration = 50;
    spec.objects.push_back(SceneObject{0, 10, 10, 1.5, 0.5, 12, 12, 220});
    const SynthScene scene = synth_scene(spec);
    REQUIRE(scene.db.size() == 1);
    CHECK(scene.db.tubes().begin()->second.length() <= 50);
    CHECK(scene.db.tubes().begin()->second.length() == 50);
}

TEST_CASE("objects are tubes only while fully in view") {
    SceneSpec spec;
    spec.width = 100;
    spec.height = 50;
    spec.duration = 100;
    spec.objects.push_back(SceneObject{0, -20, 10, 2, 0, 10, 10, 220});
    const SynthScene scene = synth_scene(spec);
    REQUIRE(scene.db.size() == 1);
    // x = -20 + 2t inside [0, 90] for t in [10, 55]
    CHECK(scene.db.tubes().begin()->second.span() == FrameInterval{10, 55});
}

TEST_CASE("seeded generation is deterministic") {
    SceneSpec spec;
    spec.random_objects = 12;
    spec.fragmentation_rate = 1.0;
    spec.seed = 42;
    const SynthScene a = synth_scene(spec);
    const SynthScene b = synth_scene(spec);
    CHECK(a.db == b.db);
    CHECK(a.source_object == b.source_object);
    spec.seed = 43;
    CHECK_FALSE(synth_scene(spec).db == a.db);
}

TEST_CASE("fragmentation splits tracks") {
    SceneSpec spec;
    spec.duration = 200;
    spec.fragmentation_rate = 1.0;
    spec.seed = 3;
    for (int i = 0; i < 5; ++i) spec.objects.push_back(SceneObject{i * 5, 20.0 + 50 * i, 20, 0.2, 0.5, 10, 10, 220});
    const SynthScene scene = synth_scene(spec);
    CHECK(scene.db.size() > spec.objects.size());

    spec.fragmentation_rate = 0.0;
    CHECK(synth_scene(spec).db.size() == spec.objects.size());

    // fragments of one object never overlap and keep the object's path
    std::map<std::size_t, Frame> last_end;
    for (const auto& [id, t] : scene.db.tubes()) {
        const std::size_t o = scene.source_object.at(id);
        if (last_end.count(o)) CHECK(t.start_frame() == last_end[o] + 2);
        last_end[o] = t.end_frame();
    }
}

TEST_CASE("rendered frames show the objects") {
    SceneSpec spec;
    spec.width = 80;
    spec.height = 60;
    spec.duration = 10;
    spec.objects.push_back(SceneObject{0, 10, 10, 1, 1, 8, 8, 240});
    const SynthScene scene = synth_scene(spec);
    const auto frames = render_scene_frames(scene, spec);
    REQUIRE(frames.size() == 10);
    CHECK(frames[0].at(12, 12) == 240);
    CHECK(frames[9].at(20, 20) == 240);
    CHECK(frames[0].at(40, 40) == scene_background(spec).at(40, 40));
}

TEST_CASE("scene spec validation and json") {
    SceneSpec spec;
    spec.fragmentation_rate = 150;
    CHECK_THROWS_AS(synth_scene(spec), ValidationError);

    SceneSpec good;
    good.random_objects = 2;
    good.objects.push_back(SceneObject{3, 1, 2, 0.5, -0.5, 6, 7, 200});
    const SceneSpec back = scene_spec_from_json(scene_spec_to_json(good));
    CHECK(synth_scene(back).db == synth_scene(good).db);

    CHECK_THROWS_AS(scene_spec_from_json(nlohmann::json::parse(R"({"objects":[{"entry":[1]}]})")), ValidationError);
}
