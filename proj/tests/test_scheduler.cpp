#include "doctest.h"
#include "support.hpp"

#include "synopsis/errors.hpp"
#include "synopsis/scheduler.hpp"

#include <functional>

using namespace synopsis;
using synopsis::testing::make_db;
using synopsis::testing::make_tube;
using synopsis::testing::random_db;

namespace {

/// Walks every synopsis frame and every cross-group pair active in it.
double scan_cross_overlap(const TubeDatabase& db, const Mapping& m, const GroupingResult& g) {
    const auto member = g.membership();
    Frame lo = std::numeric_limits<Frame>::max(), hi = std::numeric_limits<Frame>::min();
    for (const auto& [id, t] : db.tubes()) {
        lo = std::min(lo, t.start_frame() + m.shift(id));
        hi = std::max(hi, t.end_frame() + m.shift(id));
    }
    double worst = 0.0;
    for (Frame s = lo; s <= hi; ++s) {
        for (const auto& [ia, a] : db.tubes()) {
            if (!a.covers(s - m.shift(ia))) continue;
            for (const auto& [ib, b] : db.tubes()) {
                if (ib <= ia || member.at(ia) == member.at(ib) || !b.covers(s - m.shift(ib))) continue;
                worst = std::max(worst, intersection_area(a.box_at(s - m.shift(ia)), b.box_at(s - m.shift(ib))));
            }
        }
    }
    return worst;
}

/// Tries every offset combination directly; only for tiny instances.
Frame enumerate_optimal(const TubeDatabase& db, const GroupingResult& g, const Params& p, Frame max_offset) {
    Frame best = std::numeric_limits<Frame>::max();
    std::vector<Frame> offsets(g.groups.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == g.groups.size()) {
            Mapping m;
            for (std::size_t i = 0; i < g.groups.size(); ++i) {
                Frame gs = std::numeric_limits<Frame>::max();
                for (TubeId id : g.groups[i].members) gs = std::min(gs, db.tube(id).start_frame());
                for (TubeId id : g.groups[i].members) m.set(id, offsets[i] - gs);
            }
            if (scan_cross_overlap(db, m, g) <= p.collision_budget) best = std::min(best, synopsis_length(db, m));
            return;
        }
        for (Frame o = 0; o <= max_offset; ++o) {
            offsets[k] = o;
            rec(k + 1);
        }
    };
    rec(0);
    return best;
}

Params with_budget(double budget) {
    Params p;
    p.collision_budget = budget;
    return p;
}

} // namespace

TEST_CASE("single tube packs to zero") {
    const TubeDatabase db = make_db({make_tube(1, 100, 50, 0, 0)});
    const SynopsisSchedule s = minimize_length(db, singleton_groups(db), Params{});
    CHECK(s.mapping.shift(1) == -100);
    CHECK(s.length == 50);
    CHECK(s.energy.total == 0.0);
}

TEST_CASE("spatially disjoint tubes share the start") {
    const TubeDatabase db = make_db({make_tube(1, 0, 30, 0, 0), make_tube(2, 100, 40, 50, 50)});
    const SynopsisSchedule s = minimize_length(db, singleton_groups(db), Params{});
    CHECK(s.mapping.shift(1) == 0);
    CHECK(s.mapping.shift(2) == -100);
    CHECK(s.length == 40);
    CHECK(brute_force_optimal_length(db, singleton_groups(db), Params{}, 200) == 40);
}

TEST_CASE("identical boxes are placed back to back") {
    const TubeDatabase db = make_db({make_tube(1, 0, 20, 10, 10), make_tube(2, 50, 20, 10, 10)});
    const SynopsisSchedule s = minimize_length(db, singleton_groups(db), Params{});
    CHECK(s.mapping.shift(1) == 0);
    CHECK(s.mapping.shift(2) + 50 == 20);
    CHECK(s.length == 40);
    CHECK(brute_force_optimal_length(db, singleton_groups(db), Params{}, 100) == 40);
    CHECK(brute_force_optimal_length(db, singleton_groups(db), with_budget(100), 100) == 20);
}

TEST_CASE("groups move rigidly") {
    // 1 and 2 start together, 3 overlaps them in space later on
    const TubeDatabase db =
        make_db({make_tube(1, 10, 20, 0, 0), make_tube(2, 15, 20, 40, 0), make_tube(3, 200, 10, 0, 0)});
    Params p;
    p.beta = 10;
    const GroupingResult g = group_tubes(db, p);
    REQUIRE(g.groups.size() == 2);
    const SynopsisSchedule s = minimize_length(db, g, p);
    CHECK(s.mapping.shift(1) == s.mapping.shift(2));
    CHECK(s.length == 30);
    CHECK(s.energy.pairs.size() == 3);
    CHECK(s.groups == g);
    CHECK(s.params == p);
}

TEST_CASE("empty database") {
    const TubeDatabase db(testing::make_scene(), {});
    const SynopsisSchedule s = minimize_length(db, singleton_groups(db), Params{});
    CHECK(s.length == 0);
    CHECK(s.energy.total == 0.0);
    const std::vector<double> values{0.0, 1.0, 5.0};
    for (auto axis : {SweepAxis::alpha, SweepAxis::beta, SweepAxis::budget}) {
        const auto rows = sweep(db, axis, values, Params{});
        REQUIRE(rows.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i] == SweepRow{values[i], 0, 0.0});
    }
}

TEST_CASE("evaluate schedule") {
    const TubeDatabase db = make_db({make_tube(1, 0, 10, 0, 0), make_tube(2, 30, 10, 50, 50)});
    const SynopsisSchedule id = evaluate_schedule(db, identity_mapping(db), Params{});
    CHECK(id.length == db.original_span());
    CHECK(id.energy.total == 0.0);
    CHECK(id.groups == singleton_groups(db));

    const SynopsisSchedule packed = minimize_length(db, singleton_groups(db), Params{});
    const SynopsisSchedule again = evaluate_schedule(db, packed.mapping, Params{});
    CHECK(again.length == packed.length);
    CHECK(again.energy == packed.energy);

    CHECK_THROWS_AS(evaluate_schedule(db, Mapping({{1, -1}, {2, 0}}), Params{}), ValidationError);
}

TEST_CASE("brute force bounds") {
    const TubeDatabase db = make_db({make_tube(1, 5, 20, 0, 0), make_tube(2, 8, 30, 40, 0)});
    Params p;
    p.beta = 10;
    CHECK(brute_force_optimal_length(db, group_tubes(db, p), p, 50) == 33);

    std::vector<Tube> many;
    for (int i = 1; i <= 7; ++i) many.push_back(make_tube(i, 10 * i, 5, 0, 0));
    const TubeDatabase big = make_db(std::move(many));
    CHECK_THROWS_AS(brute_force_optimal_length(big, singleton_groups(big), Params{}, 10), SizeError);
}

TEST_CASE("brute force agrees with direct enumeration") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 12; ++round) {
        const TubeDatabase db = random_db(rng, std::uniform_int_distribution<int>(1, 3)(rng), 30, 40, 40, 12);
        const Params p = with_budget(std::uniform_int_distribution<int>(0, 1)(rng) * 30.0);
        const GroupingResult g = singleton_groups(db);
        CHECK(brute_force_optimal_length(db, g, p, 30) == enumerate_optimal(db, g, p, 30));
    }
}

TEST_CASE("schedule invariants on random databases") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 40; ++round) {
        const TubeDatabase db = random_db(rng, std::uniform_int_distribution<int>(1, 20)(rng));
        Params p;
        p.alpha = std::uniform_real_distribution<double>(0, 4)(rng);
        p.beta = std::uniform_real_distribution<double>(0, 40)(rng);
        p.collision_budget = std::uniform_int_distribution<int>(0, 3)(rng) * 20.0;
        p.grouping_mode = round % 2 ? GroupingMode::literal : GroupingMode::transitive;
        const GroupingResult g = group_tubes(db, p);
        const SynopsisSchedule s = minimize_length(db, g, p);

        CHECK_NOTHROW(validate_mapping(db, s.mapping));
        CHECK(s.length == synopsis_length(db, s.mapping));
        CHECK(scan_cross_overlap(db, s.mapping, g) <= p.collision_budget);
        CHECK(max_cross_group_overlap(db, s.mapping, g) == scan_cross_overlap(db, s.mapping, g));
        CHECK(s.energy == total_energy(db, s.mapping, p));

        const auto member = g.membership();
        for (const auto& t : s.energy.pairs) {
            if (member.at(t.a) != member.at(t.b)) continue;
            CHECK(t.temporal == 0.0);
            CHECK(t.chrono == 0.0);
        }

        // with a budget that admits the original layout, packing never loses length
        Params loose = p;
        loose.collision_budget = scan_cross_overlap(db, identity_mapping(db), g);
        CHECK(minimize_length(db, g, loose).length <= db.original_span());
    }
}

TEST_CASE("sweep endpoints") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 5; ++round) {
        const TubeDatabase db = random_db(rng, 12);
        const DistanceCache cache(db, SigmaMode::sqrt_area);
        const double top = static_cast<double>(db.original_span()) + 1;
        const std::vector<double> betas{0.0, 5.0, 20.0, top};
        const auto rows = sweep(db, SweepAxis::beta, betas, Params{});
        REQUIRE(rows.size() == betas.size());
        CHECK(rows.back().length == db.original_span());
        CHECK(rows.back().energy == 0.0);
        for (const auto& r : rows) {
            CHECK(r.energy >= 0.0);
            if (r.length == db.original_span()) CHECK(r.energy == 0.0);
        }

        const double dmax = cache.max_finite_interaction().value_or(1.0);
        const std::vector<double> alphas{0.0, 1.0, dmax + 0.5, dmax + 10, dmax * 100};
        const auto arows = sweep(db, SweepAxis::alpha, alphas, Params{});
        CHECK(arows[2].length == arows[3].length);
        CHECK(arows[3].length == arows[4].length);

        // sequential evaluation gives the same rows
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            Params p;
            p.alpha = alphas[i];
            const SynopsisSchedule s = minimize_length(db, group_tubes(db, p), p);
            CHECK(arows[i] == SweepRow{alphas[i], s.length, s.energy.total});
        }
    }

    const TubeDatabase db = random_db(rng, 3);
    const std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS_AS(sweep(db, SweepAxis::alpha, bad, Params{}), ValidationError);
    CHECK(parse_sweep_axis("budget") == SweepAxis::budget);
    CHECK_THROWS_AS(parse_sweep_axis("length"), ValidationError);
}
