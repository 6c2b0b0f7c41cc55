#include "doctest.h"
#include "support.hpp"

#include "synopsis/errors.hpp"
#include "synopsis/io.hpp"
#include "synopsis/netpbm.hpp"

#include <fstream>

using namespace synopsis;
using synopsis::testing::make_db;
using synopsis::testing::make_tube;
using synopsis::testing::random_db;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "synopsis_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("minimal tube database") {
    const std::string text = R"({"format":"synopsis-tubedb","version":1,
        "scene":{"width":64,"height":48,"fps":[30000,1001]},
        "tubes":[{"id":4,"boxes":[[12,1,2,3,4]]}]})";
    const TubeDatabase db = parse_tube_db(text);
    REQUIRE(db.size() == 1);
    CHECK(db.tube(4).box_at(12) == BoundingBox{12, 1, 2, 3, 4});
    CHECK(db.scene().fps == FrameRate{30000, 1001});
    CHECK_FALSE(db.scene().background);
}

TEST_CASE("bad tube database files") {
    const std::string gap = R"({"format":"synopsis-tubedb","version":1,
        "scene":{"width":64,"height":48,"fps":[25,1]},
        "tubes":[{"id":9,"boxes":[[0,1,2,3,4],[2,1,2,3,4]]}]})";
    try {
        parse_tube_db(gap);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("9") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_tube_db("{not json"), ValidationError);
    CHECK_THROWS_AS(parse_tube_db(R"({"format":"other","version":1})"), ValidationError);
    CHECK_THROWS_AS(parse_tube_db(R"({"format":"synopsis-tubedb","version":2,"scene":{},"tubes":[]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_tube_db(R"({"format":"synopsis-tubedb","version":1,
        "scene":{"width":64,"height":48,"fps":[25,1]},"tubes":[{"id":1,"boxes":[[0,1,2]]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(load_tube_db(scratch("does_not_exist.json")), ValidationError);
}

TEST_CASE("tube database round trips") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 20; ++round) {
        TubeDatabase db = random_db(rng, std::uniform_int_distribution<int>(0, 15)(rng));
        if (round % 3 == 0) {
            SceneInfo info = db.scene();
            info.background = "bg/plate.pgm";
            info.fps = FrameRate{30000, 1001};
            std::vector<Tube> tubes;
            for (const auto& [id, t] : db.tubes()) tubes.push_back(t);
            db = TubeDatabase(info, std::move(tubes));
        }
        const auto path = scratch("db.json");
        save_tube_db(db, path);
        const TubeDatabase back = load_tube_db(path);
        CHECK(back == db);
        CHECK(serialize_tube_db(back) == serialize_tube_db(db));
        CHECK(content_hash(back) == content_hash(db));
    }

    const TubeDatabase empty(testing::make_scene(), {});
    CHECK(parse_tube_db(serialize_tube_db(empty)) == empty);
}

TEST_CASE("content hash") {
    const TubeDatabase a = make_db({make_tube(1, 0, 5, 0, 0)});
    const TubeDatabase b = make_db({make_tube(1, 0, 5, 1, 0)});
    CHECK(content_hash(a).size() == 16);
    CHECK(content_hash(a) != content_hash(b));
    CHECK(content_hash(a) == content_hash(parse_tube_db(serialize_tube_db(a))));
}

TEST_CASE("schedule round trips byte for byte") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 15; ++round) {
        const TubeDatabase db = random_db(rng, std::uniform_int_distribution<int>(0, 12)(rng));
        Params p;
        p.alpha = std::uniform_real_distribution<double>(0, 4)(rng);
        p.beta = std::uniform_real_distribution<double>(0, 40)(rng);
        p.collision_weight = 0.3;
        p.chrono_constant = 2.5;
        p.grouping_mode = round % 2 ? GroupingMode::literal : GroupingMode::transitive;
        p.sigma_mode = round % 3 ? SigmaMode::sqrt_area : SigmaMode::area;
        const SynopsisSchedule s = minimize_length(db, group_tubes(db, p), p);

        const std::string text = serialize_schedule(s, db);
        const SynopsisSchedule back = parse_schedule(text, db);
        CHECK(back == s);
        CHECK(serialize_schedule(back, db) == text);

        const auto path = scratch("schedule.json");
        save_schedule(s, db, path);
        CHECK(load_schedule(path, db) == s);
        CHECK(read_text_file(path) == text);
    }
}

TEST_CASE("schedule against an edited database is stale") {
    const TubeDatabase db = make_db({make_tube(1, 0, 5, 0, 0), make_tube(2, 10, 5, 20, 0)});
    const TubeDatabase edited = make_db({make_tube(1, 0, 5, 0, 0), make_tube(2, 10, 6, 20, 0)});
    const SynopsisSchedule s = minimize_length(db, singleton_groups(db), Params{});
    CHECK_THROWS_AS(parse_schedule(serialize_schedule(s, db), edited), StaleReferenceError);
}

TEST_CASE("params json") {
    Params p;
    p.alpha = 1.25;
    p.grouping_mode = GroupingMode::literal;
    p.sigma_mode = SigmaMode::area;
    CHECK(params_from_json(params_to_json(p)) == p);
    auto j = params_to_json(p);
    j["alpha"] = -2.0;
    CHECK_THROWS_AS(params_from_json(j), ValidationError);
}

TEST_CASE("curve csv") {
    CHECK(format_curve_csv({}) == "param,length,energy\n");

    const std::vector<SweepRow> rows{{0.0, 120, 3.14159265}, {2.5, 100, 1234567.0}, {1e-7, 80, 0.0}};
    const std::string text = format_curve_csv(rows);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(text.find("3.14159\n") != std::string::npos);

    const auto path = scratch("curve.csv");
    export_curve_csv(rows, path);
    const auto loaded = load_curve_csv(path);
    REQUIRE(loaded.size() == 3);
    CHECK(loaded[1].length == 100);
    CHECK(format_curve_csv(loaded) == text);

    const auto again = scratch("curve2.csv");
    export_curve_csv(loaded, again);
    CHECK(read_text_file(again) == read_text_file(path));

    write_text_file(again, "x,y\n");
    CHECK_THROWS_AS(load_curve_csv(again), ValidationError);
    write_text_file(again, "param,length,energy\n1,2\n");
    CHECK_THROWS_AS(load_curve_csv(again), ValidationError);
}

TEST_CASE("netpbm") {
    GrayFrame g(7, 5);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) g.pixels[i] = static_cast<std::uint8_t>(i * 7);
    const auto pgm = scratch("g.pgm");
    write_pgm(g, pgm);
    CHECK(read_pgm(pgm) == g);

    RgbImage c(3, 4);
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = static_cast<std::uint8_t>(255 - i);
    const auto ppm = scratch("c.ppm");
    write_ppm(c, ppm);
    CHECK(read_ppm(ppm) == c);
    CHECK(read_rgb(ppm) == c);
    CHECK(read_rgb(pgm) == RgbImage::from_gray(g));
    CHECK_THROWS_AS(read_pgm(ppm), ValidationError);

    // comments in the header are allowed
    const auto commented = scratch("comment.pgm");
    {
        std::ofstream out(commented, std::ios::binary);
        out << "P5\n# made by hand\n2 1\n255\n";
        out.put(static_cast<char>(10));
        out.put(static_cast<char>(20));
    }
    const GrayFrame small = read_pgm(commented);
    CHECK(small.width == 2);
    CHECK(small.pixels == std::vector<std::uint8_t>{10, 20});

    write_text_file(commented, "P5\n2 2\n255\n");
    CHECK_THROWS_AS(read_pgm(commented), ValidationError);
}

TEST_CASE("frame sequences") {
    const auto dir = scratch("seq");
    std::filesystem::remove_all(dir);
    std::vector<GrayFrame> frames{GrayFrame(4, 3, 1), GrayFrame(4, 3, 2), GrayFrame(4, 3, 3)};
    write_frame_sequence(frames, dir);
    CHECK(std::filesystem::exists(dir / "000002.pgm"));
    CHECK(read_frame_sequence(dir) == frames);

    std::filesystem::remove(dir / "000001.pgm");
    CHECK_THROWS_AS(read_frame_sequence(dir), ValidationError);
    CHECK_THROWS_AS(read_frame_sequence(scratch("no_such_dir")), ValidationError);
}
