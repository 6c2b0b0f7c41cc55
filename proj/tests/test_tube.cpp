#include "doctest.h"
#include "support.hpp"

#include "synopsis/energy.hpp"
#include "synopsis/errors.hpp"

using namespace synopsis;
using synopsis::testing::make_db;
using synopsis::testing::make_tube;

TEST_CASE("box centers") {
    const Tube a(1, {BoundingBox{4, 0, 0, 10, 10}});
    CHECK(tube_center(a, 4).x == 5.0);
    CHECK(tube_center(a, 4).y == 5.0);

    const Tube b(2, {BoundingBox{0, 3, 7, 4, 2}});
    CHECK(tube_center(b, 0).x == 5.0);
    CHECK(tube_center(b, 0).y == 8.0);

    CHECK_THROWS_AS(tube_center(a, 5), OutOfRangeError);
    CHECK_THROWS_AS(tube_center(a, 3), OutOfRangeError);
}

TEST_CASE("span intersection") {
    const Tube a = make_tube(1, 0, 11, 0, 0);
    const Tube b = make_tube(2, 5, 16, 0, 0);
    const Tube c = make_tube(3, 11, 10, 0, 0);

    const auto ab = tube_span_intersection(a, b);
    REQUIRE(ab);
    CHECK(*ab == FrameInterval{5, 10});
    CHECK_FALSE(tube_span_intersection(a, c));

    const Mapping m({{1, 100}, {2, 0}});
    CHECK_FALSE(tube_span_intersection(a, b, &m));
    // moving b along with a keeps the shared stretch
    const Mapping both({{1, 100}, {2, 100}});
    CHECK(*tube_span_intersection(a, b, &both) == FrameInterval{105, 110});
}

TEST_CASE("tube contiguity and box validation") {
    CHECK_THROWS_AS(Tube(1, {}), ValidationError);
    CHECK_THROWS_AS(Tube(1, {BoundingBox{0, 0, 0, 5, 5}, BoundingBox{2, 0, 0, 5, 5}}), ValidationError);
    CHECK_THROWS_AS(Tube(1, {BoundingBox{0, 0, 0, 0, 5}}), ValidationError);
    CHECK_THROWS_AS(Tube(1, {BoundingBox{-3, 0, 0, 5, 5}, BoundingBox{-2, 0, 0, 5, 5}}), ValidationError);
}

TEST_CASE("database validation") {
    CHECK_THROWS_AS(make_db({make_tube(1, 0, 5, 0, 0), make_tube(1, 3, 5, 0, 0)}), ValidationError);
    CHECK_THROWS_AS(make_db({make_tube(1, 0, 5, 95, 0)}), ValidationError);
    CHECK_THROWS_AS(make_db({make_tube(1, 0, 5, 0, 0)}, 0, 10), ValidationError);

    const TubeDatabase db = make_db({make_tube(7, 10, 5, 0, 0), make_tube(3, 2, 4, 0, 0)});
    CHECK(db.ids() == std::vector<TubeId>{3, 7});
    CHECK(*db.extent() == FrameInterval{2, 14});
    CHECK(db.original_span() == 13);
    CHECK(TubeDatabase().original_span() == 0);
    CHECK_THROWS_AS(db.tube(4), ValidationError);
}

TEST_CASE("mapping validation") {
    const TubeDatabase db = make_db({make_tube(1, 10, 5, 0, 0), make_tube(2, 0, 5, 0, 0)});
    CHECK_NOTHROW(validate_mapping(db, identity_mapping(db)));
    CHECK_NOTHROW(validate_mapping(db, Mapping({{1, -10}, {2, 0}})));
    CHECK_THROWS_AS(validate_mapping(db, Mapping({{1, -11}, {2, 0}})), ValidationError);
    CHECK_THROWS_AS(validate_mapping(db, Mapping(std::map<TubeId, Frame>{{1, 0}})), ValidationError);
    CHECK_THROWS_AS(validate_mapping(db, Mapping({{1, 0}, {2, 0}, {3, 0}})), ValidationError);
}

TEST_CASE("intersection area") {
    CHECK(intersection_area({0, 0, 0, 10, 10}, {0, 5, 5, 10, 10}) == 25.0);
    CHECK(intersection_area({0, 0, 0, 10, 10}, {0, 10, 0, 10, 10}) == 0.0);
    CHECK(intersection_area({0, 0, 0, 10, 10}, {0, 2, 2, 3, 3}) == 9.0);
}

TEST_CASE("params validation and enum names") {
    Params p;
    CHECK_NOTHROW(p.validate());
    p.alpha = -1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = Params{};
    p.collision_budget = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(), ValidationError);

    CHECK(parse_grouping_mode(to_string(GroupingMode::literal)) == GroupingMode::literal);
    CHECK(parse_sigma_mode(to_string(SigmaMode::area)) == SigmaMode::area);
    CHECK_THROWS_AS(parse_grouping_mode("chain"), ValidationError);
}
