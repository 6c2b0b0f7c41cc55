#include "synopsis/scheduler.hpp"

#include "synopsis/errors.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <future>
#include <limits>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>

namespace synopsis {

namespace {

/// A group with member boxes expressed relative to the group's earliest start.
struct PackedGroup {
    std::size_t index = 0;
    Frame base = 0;    // earliest member start, original time
    Frame length = 0;  // frames from base to the latest member end
    TubeId smallest = 0;
    std::vector<std::pair<Frame, BoundingBox>> boxes;  // (frame - base, box)
};

std::vector<PackedGroup> pack_groups(const TubeDatabase& db, const GroupingResult& g) {
    std::vector<PackedGroup> out;
    out.reserve(g.groups.size());
    for (std::size_t i = 0; i < g.groups.size(); ++i) {
        PackedGroup pg;
        pg.index = i;
        pg.smallest = g.groups[i].smallest();
        pg.base = std::numeric_limits<Frame>::max();
        Frame last = std::numeric_limits<Frame>::min();
        for (TubeId id : g.groups[i].members) {
            const Tube& t = db.tube(id);
            pg.base = std::min(pg.base, t.start_frame());
            last = std::max(last, t.end_frame());
        }
        pg.length = last - pg.base + 1;
        for (TubeId id : g.groups[i].members) {
            for (const auto& b : db.tube(id).boxes()) {
                pg.boxes.emplace_back(b.frame - pg.base, b);
            }
        }
        out.push_back(std::move(pg));
    }
    return out;
}

std::vector<std::size_t> chronological_order(const std::vector<PackedGroup>& groups) {
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        if (groups[l].base != groups[r].base) return groups[l].base < groups[r].base;
        return groups[l].smallest < groups[r].smallest;
    });
    return order;
}

Mapping normalized_identity(const TubeDatabase& db) {
    Mapping m;
    const auto extent = db.extent();
    for (const auto& [id, t] : db.tubes()) {
        m.set(id, extent ? -extent->first : 0);
    }
    return m;
}

/// Offsets at which the group would break the budget against already placed boxes.
std::set<Frame> forbidden_offsets(const PackedGroup& group,
                                  const std::unordered_map<Frame, std::vector<BoundingBox>>& occupancy,
                                  double budget) {
    std::set<Frame> out;
    for (const auto& [synopsis_frame, placed] : occupancy) {
        for (const auto& [rel, box] : group.boxes) {
            const Frame offset = synopsis_frame - rel;
            if (out.count(offset) != 0) continue;
            for (const auto& other : placed) {
                if (intersection_area(box, other) > budget) {
                    out.insert(offset);
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace

Frame synopsis_length(const TubeDatabase& db, const Mapping& m) {
    if (db.empty()) {
        return 0;
    }
    Frame first = std::numeric_limits<Frame>::max();
    Frame last = std::numeric_limits<Frame>::min();
    for (const auto& [id, t] : db.tubes()) {
        const Frame shift = m.shift(id);
        first = std::min(first, t.start_frame() + shift);
        last = std::max(last, t.end_frame() + shift);
    }
    return last - first + 1;
}

double max_cross_group_overlap(const TubeDatabase& db, const Mapping& m, const GroupingResult& g) {
    const auto membership = g.membership();
    std::map<Frame, std::vector<std::pair<std::size_t, const BoundingBox*>>> by_frame;
    for (const auto& [id, t] : db.tubes()) {
        const std::size_t group = membership.at(id);
        const Frame shift = m.shift(id);
        for (const auto& b : t.boxes()) {
            by_frame[b.frame + shift].emplace_back(group, &b);
        }
    }
    double worst = 0.0;
    for (const auto& [frame, boxes] : by_frame) {
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            for (std::size_t j = i + 1; j < boxes.size(); ++j) {
                if (boxes[i].first != boxes[j].first) {
                    worst = std::max(worst, intersection_area(*boxes[i].second, *boxes[j].second));
                }
            }
        }
    }
    return worst;
}

SynopsisSchedule minimize_length(const TubeDatabase& db, const GroupingResult& g, const Params& p,
                                 const DistanceCache* cache) {
    p.validate();
    validate_partition(db, g);

    SynopsisSchedule out;
    out.groups = g;
    out.params = p;
    if (db.empty()) {
        return out;
    }

    const auto groups = pack_groups(db, g);
    std::vector<Frame> offsets(groups.size(), 0);
    std::unordered_map<Frame, std::vector<BoundingBox>> occupancy;
    Frame lo = 0;
    Frame hi = -1;
    bool first = true;

    for (std::size_t idx : chronological_order(groups)) {
        const PackedGroup& group = groups[idx];
        Frame chosen = 0;
        if (!first) {
            const auto forbidden = forbidden_offsets(group, occupancy, p.collision_budget);
            // Offsets outside [lo - length, hi + 1] only lengthen the synopsis.
            Frame best_extent = std::numeric_limits<Frame>::max();
            bool best_forward = false;
            for (Frame o = lo - group.length; o <= hi + 1; ++o) {
                if (forbidden.count(o) != 0) continue;
                const Frame extent = std::max(hi, o + group.length - 1) - std::min(lo, o) + 1;
                const bool forward = o >= lo;
                const bool better = extent < best_extent ||
                                    (extent == best_extent && forward && !best_forward) ||
                                    (extent == best_extent && !forward && !best_forward);
                if (better) {
                    best_extent = extent;
                    best_forward = forward;
                    chosen = o;
                }
            }
        }
        first = false;
        offsets[idx] = chosen;
        lo = std::min(lo, chosen);
        hi = std::max(hi, chosen + group.length - 1);
        for (const auto& [rel, box] : group.boxes) {
            occupancy[chosen + rel].push_back(box);
        }
    }

    for (const auto& group : groups) {
        const Frame shift = offsets[group.index] - lo - group.base;
        for (TubeId id : g.groups[group.index].members) {
            out.mapping.set(id, shift);
        }
    }
    out.length = synopsis_length(db, out.mapping);

    if (out.length >= db.original_span()) {
        Mapping original = normalized_identity(db);
        if (max_cross_group_overlap(db, original, g) <= p.collision_budget) {
            out.mapping = std::move(original);
            out.length = db.original_span();
        }
    }
    out.energy = total_energy(db, out.mapping, p, {}, cache);
    return out;
}

SynopsisSchedule evaluate_schedule(const TubeDatabase& db, const Mapping& m, const Params& p) {
    p.validate();
    validate_mapping(db, m);
    SynopsisSchedule out;
    out.mapping = m;
    out.length = synopsis_length(db, m);
    out.energy = total_energy(db, m, p);
    out.groups = singleton_groups(db);
    out.params = p;
    return out;
}

namespace {

using Bits = boost::dynamic_bitset<>;

/// Exact feasibility search for a fixed synopsis length.
class PackingSearch {
public:
    PackingSearch(const std::vector<PackedGroup>& groups, double budget, Frame max_offset)
        : groups_(groups), max_offset_(max_offset), conflicts_(groups.size() * groups.size()) {
        // conflicts_[i * k + j] lists r = o_j - o_i that overlap beyond the budget.
        const std::size_t k = groups.size();
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                std::set<Frame> rel;
                for (const auto& [ri, bi] : groups[i].boxes) {
                    for (const auto& [rj, bj] : groups[j].boxes) {
                        if (intersection_area(bi, bj) > budget) {
                            rel.insert(ri - rj);
                        }
                    }
                }
                conflicts_[i * k + j].assign(rel.begin(), rel.end());
                for (Frame r : rel) conflicts_[j * k + i].push_back(-r);
                std::sort(conflicts_[j * k + i].begin(), conflicts_[j * k + i].end());
            }
        }
    }

    bool feasible(Frame length) {
        const std::size_t k = groups_.size();
        std::vector<Bits> domains(k);
        for (std::size_t i = 0; i < k; ++i) {
            const Frame top = std::min(max_offset_, length - groups_[i].length);
            if (top < 0) return false;
            domains[i] = Bits(static_cast<std::size_t>(max_offset_ + 1));
            for (Frame o = 0; o <= top; ++o) domains[i].set(static_cast<std::size_t>(o));
        }
        std::vector<bool> assigned(k, false);
        return search(domains, assigned, 0);
    }

private:
    bool search(const std::vector<Bits>& domains, std::vector<bool>& assigned, std::size_t depth) {
        const std::size_t k = groups_.size();
        if (depth == k) return true;
        std::size_t var = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (!assigned[i] && (var == k || domains[i].count() < domains[var].count())) var = i;
        }
        assigned[var] = true;
        for (auto v = domains[var].find_first(); v != Bits::npos; v = domains[var].find_next(v)) {
            std::vector<Bits> next = domains;
            bool alive = true;
            for (std::size_t j = 0; j < k && alive; ++j) {
                if (assigned[j]) continue;
                for (Frame r : conflicts_[var * k + j]) {
                    const Frame pos = static_cast<Frame>(v) + r;
                    if (pos >= 0 && pos <= max_offset_) next[j].reset(static_cast<std::size_t>(pos));
                }
                alive = next[j].any();
            }
            if (alive && search(next, assigned, depth + 1)) {
                assigned[var] = false;
                return true;
            }
        }
        assigned[var] = false;
        return false;
    }

    const std::vector<PackedGroup>& groups_;
    Frame max_offset_;
    std::vector<std::vector<Frame>> conflicts_;
};

} // namespace

Frame brute_force_optimal_length(const TubeDatabase& db, const GroupingResult& g, const Params& p, Frame max_offset) {
    p.validate();
    validate_partition(db, g);
    if (g.groups.size() > kBruteForceMaxGroups) {
        throw SizeError("brute-force packing supports at most " + std::to_string(kBruteForceMaxGroups) +
                        " groups, got " + std::to_string(g.groups.size()));
    }
    if (max_offset < 0) {
        throw ValidationError("max_offset must be >= 0");
    }
    if (db.empty()) {
        return 0;
    }
    const auto groups = pack_groups(db, g);
    Frame lower = 0;
    for (const auto& group : groups) lower = std::max(lower, group.length);

    PackingSearch search(groups, p.collision_budget, max_offset);
    for (Frame length = lower; length <= max_offset + lower; ++length) {
        if (search.feasible(length)) {
            return length;
        }
    }
    throw ValidationError("no placement within max_offset " + std::to_string(max_offset) + " meets the budget");
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::beta: return "beta";
    case SweepAxis::budget: return "budget";
    }
    return "alpha";
}

SweepAxis parse_sweep_axis(std::string_view s) {
    if (s == "alpha") return SweepAxis::alpha;
    if (s == "beta") return SweepAxis::beta;
    if (s == "budget") return SweepAxis::budget;
    throw ValidationError("unknown sweep axis '" + std::string(s) + "'");
}

std::vector<SweepRow> sweep(const TubeDatabase& db, SweepAxis axis, std::span<const double> values, const Params& p) {
    if (values.empty()) {
        throw ValidationError("sweep needs at least one value");
    }
    if (!std::is_sorted(values.begin(), values.end())) {
        throw ValidationError("sweep values must be ascending");
    }
    std::vector<Params> points;
    for (double v : values) {
        Params q = p;
        switch (axis) {
        case SweepAxis::alpha: q.alpha = v; q.beta = 0.0; break;
        case SweepAxis::beta: q.beta = v; q.alpha = 0.0; break;
        case SweepAxis::budget: q.collision_budget = v; break;
        }
        q.validate();
        points.push_back(q);
    }

    const DistanceCache cache(db, p.sigma_mode);
    const auto run_point = [&](std::size_t i) {
        const auto grouping = group_tubes(db, points[i], &cache);
        const auto schedule = minimize_length(db, grouping, points[i], &cache);
        return SweepRow{values[i], schedule.length, schedule.energy.total};
    };
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (std::size_t begin = 0; begin < points.size(); begin += workers) {
        const std::size_t end = std::min(points.size(), begin + workers);
        std::vector<std::future<SweepRow>> pending;
        for (std::size_t i = begin; i < end; ++i) {
            pending.push_back(std::async(std::launch::async, run_point, i));
        }
        for (auto& f : pending) rows.push_back(f.get());
    }
    return rows;
}

} // namespace synopsis
