#include "synopsis/energy.hpp"

#include "synopsis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synopsis {

namespace {

double center_distance(const BoundingBox& a, const BoundingBox& b) {
    const Point ca = a.center();
    const Point cb = b.center();
    return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

OriginalPair compute_original(const Tube& a, const Tube& b, SigmaMode mode) {
    OriginalPair out;
    out.overlap = span_intersection(a, 0, b, 0).has_value();
    out.interaction = d_interaction(a, 0, b, 0, mode);
    out.start_gap = a.start_frame() - b.start_frame();
    return out;
}

double chrono_side(Frame gap, bool overlap, double violation) {
    if (overlap) {
        return 0.0;
    }
    return static_cast<double>(gap) * violation;
}

} // namespace

double frame_distance(const Tube& a, const Tube& b, Frame f) {
    return center_distance(a.box_at(f), b.box_at(f));
}

double sigma_area(const Tube& a, const Tube& b, SigmaMode mode) {
    const double mean = 0.5 * (a.mean_area() + b.mean_area());
    return mode == SigmaMode::area ? mean : std::sqrt(mean);
}

double interaction_distance(const Tube& a, Frame shift_a, const Tube& b, Frame shift_b, SigmaMode mode) {
    const auto shared = span_intersection(a, shift_a, b, shift_b);
    if (!shared) {
        return kNoInteraction;
    }
    double closest = std::numeric_limits<double>::infinity();
    for (Frame s = shared->first; s <= shared->last; ++s) {
        closest = std::min(closest, center_distance(a.box_at(s - shift_a), b.box_at(s - shift_b)));
    }
    return std::exp(closest / sigma_area(a, b, mode));
}

double interaction_distance(const Tube& a, const Tube& b, const Mapping* m, const Params& p) {
    if (m == nullptr) {
        return interaction_distance(a, 0, b, 0, p.sigma_mode);
    }
    return interaction_distance(a, m->shift(a.id()), b, m->shift(b.id()), p.sigma_mode);
}

double d_interaction(const Tube& a, Frame shift_a, const Tube& b, Frame shift_b, SigmaMode mode) {
    const double d = interaction_distance(a, shift_a, b, shift_b, mode);
    return d == kNoInteraction ? 0.0 : d;
}

double d_interaction(const Tube& a, const Tube& b, const Mapping* m, const Params& p) {
    const double d = interaction_distance(a, b, m, p);
    return d == kNoInteraction ? 0.0 : d;
}

double temporal_consistency_cost(const Tube& a, const Tube& b, const Mapping& m, const Params& p) {
    const double before = d_interaction(a, b, nullptr, p);
    const double after = d_interaction(a, b, &m, p);
    return std::abs(before - after);
}

double chrono_distance(const Tube& a, const Tube& b, ChronoSide side, const Mapping& m, double chrono_constant) {
    const Frame shift_a = m.shift(a.id());
    const Frame shift_b = m.shift(b.id());
    const Frame original_gap = b.start_frame() - a.start_frame();
    const Frame synopsis_gap = original_gap + shift_b - shift_a;
    const double violation = original_gap == synopsis_gap ? 0.0 : chrono_constant;
    if (side == ChronoSide::original) {
        return chrono_side(original_gap, span_intersection(a, 0, b, 0).has_value(), violation);
    }
    return chrono_side(synopsis_gap, span_intersection(a, shift_a, b, shift_b).has_value(), violation);
}

double chronological_cost(const Tube& a, const Tube& b, const Mapping& m, const Params& p) {
    return std::abs(chrono_distance(a, b, ChronoSide::original, m, p.chrono_constant) -
                    chrono_distance(a, b, ChronoSide::synopsis, m, p.chrono_constant));
}

double collision_cost(const Tube& a, const Tube& b, const Mapping& m, const Params& p, const SceneInfo& scene) {
    if (p.collision_weight == 0.0) {
        return 0.0;
    }
    const Frame shift_a = m.shift(a.id());
    const Frame shift_b = m.shift(b.id());
    const auto shared = span_intersection(a, shift_a, b, shift_b);
    if (!shared) {
        return 0.0;
    }
    double sum = 0.0;
    for (Frame s = shared->first; s <= shared->last; ++s) {
        sum += intersection_area(a.box_at(s - shift_a), b.box_at(s - shift_b));
    }
    return p.collision_weight * sum / scene.area();
}

double activity_cost(std::span<const Exclusion> excluded, const TubeDatabase& db) {
    double sum = 0.0;
    for (const auto& e : excluded) {
        const Tube& t = db.tube(e.tube);
        if (e.frames.first > e.frames.last || !t.covers(e.frames.first) || !t.covers(e.frames.last)) {
            throw OutOfRangeError("excluded interval [" + std::to_string(e.frames.first) + ", " +
                                  std::to_string(e.frames.last) + "] outside tube " + std::to_string(e.tube));
        }
        for (Frame f = e.frames.first; f <= e.frames.last; ++f) {
            sum += t.box_at(f).area();
        }
    }
    return sum / db.scene().area();
}

DistanceCache::DistanceCache(const TubeDatabase& db, SigmaMode mode) : mode_(mode) {
    const auto& tubes = db.tubes();
    for (auto i = tubes.begin(); i != tubes.end(); ++i) {
        for (auto j = std::next(i); j != tubes.end(); ++j) {
            const double raw = interaction_distance(i->second, 0, j->second, 0, mode);
            OriginalPair facts;
            facts.overlap = raw != kNoInteraction;
            facts.interaction = facts.overlap ? raw : 0.0;
            facts.start_gap = i->second.start_frame() - j->second.start_frame();
            table_.emplace(std::pair{i->first, j->first}, facts);
            raw_interaction_.emplace(std::pair{i->first, j->first}, raw);
        }
    }
}

OriginalPair DistanceCache::get(TubeId a, TubeId b) const {
    const bool swapped = b < a;
    const auto it = table_.find(swapped ? std::pair{b, a} : std::pair{a, b});
    if (it == table_.end()) {
        throw ValidationError("no cached pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    OriginalPair out = it->second;
    if (swapped) {
        out.start_gap = -out.start_gap;
    }
    return out;
}

std::optional<double> DistanceCache::max_finite_interaction() const {
    std::optional<double> best;
    for (const auto& [key, d] : raw_interaction_) {
        if (d != kNoInteraction && (!best || d > *best)) best = d;
    }
    return best;
}

std::optional<double> DistanceCache::min_finite_interaction() const {
    std::optional<double> best;
    for (const auto& [key, d] : raw_interaction_) {
        if (d != kNoInteraction && (!best || d < *best)) best = d;
    }
    return best;
}

EnergyBreakdown total_energy(const TubeDatabase& db, const Mapping& m, const Params& p,
                             std::span<const Exclusion> excluded, const DistanceCache* cache) {
    if (cache != nullptr && cache->mode() != p.sigma_mode) {
        cache = nullptr;
    }
    EnergyBreakdown out;
    out.activity = activity_cost(excluded, db);
    const auto& tubes = db.tubes();
    for (auto i = tubes.begin(); i != tubes.end(); ++i) {
        const Tube& a = i->second;
        const Frame shift_a = m.shift(a.id());
        for (auto j = std::next(i); j != tubes.end(); ++j) {
            const Tube& b = j->second;
            const Frame shift_b = m.shift(b.id());
            const OriginalPair orig = cache ? cache->get(a.id(), b.id()) : compute_original(a, b, p.sigma_mode);

            PairTerms terms{a.id(), b.id(), 0.0, 0.0, 0.0};
            const bool rigid = shift_a == shift_b;
            // Equal shifts keep relative timing and geometry: both differences vanish.
            if (!rigid) {
                terms.temporal = std::abs(orig.interaction - d_interaction(a, shift_a, b, shift_b, p.sigma_mode));
                const Frame synopsis_gap = orig.start_gap + shift_a - shift_b;
                const bool synopsis_overlap = span_intersection(a, shift_a, b, shift_b).has_value();
                terms.chrono = std::abs(chrono_side(orig.start_gap, orig.overlap, p.chrono_constant) -
                                        chrono_side(synopsis_gap, synopsis_overlap, p.chrono_constant));
            }
            terms.collision = collision_cost(a, b, m, p, db.scene());

            out.temporal += terms.temporal;
            out.chrono += terms.chrono;
            out.collision += terms.collision;
            out.pairs.push_back(terms);
        }
    }
    out.total = out.activity + out.temporal + out.chrono + out.collision;
    return out;
}

} // namespace synopsis
