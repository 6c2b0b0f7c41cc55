#pragma once

#include "synopsis/energy.hpp"
#include "synopsis/grouping.hpp"
#include "synopsis/tube.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace synopsis {

struct SynopsisSchedule {
    Mapping mapping;
    Frame length = 0;
    EnergyBreakdown energy;
    GroupingResult groups;
    Params params;

    friend bool operator==(const SynopsisSchedule&, const SynopsisSchedule&) = default;
};

/// max shifted end - min shifted start + 1, or 0 for an empty database.
Frame synopsis_length(const TubeDatabase& db, const Mapping& m);

/// Largest per-frame box intersection between tubes of different groups.
double max_cross_group_overlap(const TubeDatabase& db, const Mapping& m, const GroupingResult& g);

/// Packs groups, in chronological order, with one rigid shift each so that no
/// cross-group pair of boxes overlaps by more than the collision budget.
///
/// Each group takes the feasible offset that keeps the running synopsis
/// shortest; ties go to the earliest offset at or after the current synopsis
/// start. When packing cannot beat the original length and the original layout
/// respects the budget, the original timing is kept.
SynopsisSchedule minimize_length(const TubeDatabase& db, const GroupingResult& g, const Params& p,
                                 const DistanceCache* cache = nullptr);

/// Scores an external mapping without changing it. Groups are reported as singletons.
SynopsisSchedule evaluate_schedule(const TubeDatabase& db, const Mapping& m, const Params& p);

inline constexpr std::size_t kBruteForceMaxGroups = 6;

/// Exact minimum synopsis length over all per-group offsets in [0, max_offset]
/// meeting the collision budget. SizeError above kBruteForceMaxGroups groups.
Frame brute_force_optimal_length(const TubeDatabase& db, const GroupingResult& g, const Params& p, Frame max_offset);

enum class SweepAxis { alpha, beta, budget };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view s);

struct SweepRow {
    double value = 0.0;
    Frame length = 0;
    double energy = 0.0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Groups and packs once per value. The alpha axis pins beta to 0, the beta axis
/// pins alpha to 0, the budget axis varies collision_budget. Values must be
/// ascending; rows come back in input order.
std::vector<SweepRow> sweep(const TubeDatabase& db, SweepAxis axis, std::span<const double> values, const Params& p);

} // namespace synopsis
