#pragma once

#include "synopsis/tube.hpp"

#include <limits>
#include <map>
#include <span>
#include <utility>

namespace synopsis {

/// Returned by interaction_distance when two spans never meet.
inline constexpr double kNoInteraction = std::numeric_limits<double>::infinity();

/// Euclidean distance between the two box centers at original frame f.
double frame_distance(const Tube& a, const Tube& b, Frame f);

/// Size normalizer for a pair: mean of the two time-averaged areas, or its
/// square root in sqrt_area mode.
double sigma_area(const Tube& a, const Tube& b, SigmaMode mode);

/// exp(min_t dist(t) / sigma) over the shared frames of the shifted spans.
/// Each tube is read at its own original frame (synopsis frame minus its shift).
/// kNoInteraction when the shifted spans are disjoint.
double interaction_distance(const Tube& a, Frame shift_a, const Tube& b, Frame shift_b, SigmaMode mode);
double interaction_distance(const Tube& a, const Tube& b, const Mapping* m, const Params& p);

/// Interaction with the disjoint case mapped to 0.
double d_interaction(const Tube& a, Frame shift_a, const Tube& b, Frame shift_b, SigmaMode mode);
double d_interaction(const Tube& a, const Tube& b, const Mapping* m, const Params& p);

/// |d(original) - d(synopsis)| for the interaction distance.
double temporal_consistency_cost(const Tube& a, const Tube& b, const Mapping& m, const Params& p);

enum class ChronoSide { original, synopsis };

/// Signed start gap start(b) - start(a) on the chosen side times the
/// order-violation constant; zero when the spans of that side overlap or the
/// start offset is unchanged by the mapping.
double chrono_distance(const Tube& a, const Tube& b, ChronoSide side, const Mapping& m, double chrono_constant);

/// |chrono_distance(original) - chrono_distance(synopsis)|.
double chronological_cost(const Tube& a, const Tube& b, const Mapping& m, const Params& p);

/// collision_weight * sum over shared synopsis frames of box overlap / scene area.
double collision_cost(const Tube& a, const Tube& b, const Mapping& m, const Params& p, const SceneInfo& scene);

/// Frames of a tube left out of the synopsis.
struct Exclusion {
    TubeId tube = 0;
    FrameInterval frames;
};

/// Sum of excluded box area over scene area.
double activity_cost(std::span<const Exclusion> excluded, const TubeDatabase& db);

/// Original-time facts for a tube pair that every mapping reuses.
struct OriginalPair {
    double interaction = 0.0;  // d_interaction with no shifts
    bool overlap = false;      // original spans intersect
    Frame start_gap = 0;       // start(a) - start(b)
};

/// Eagerly computed table of OriginalPair for every unordered pair of a database.
/// Read-only after construction, so it may be shared between threads.
class DistanceCache {
public:
    DistanceCache(const TubeDatabase& db, SigmaMode mode);

    /// Facts for (a, b); the sign of start_gap follows the argument order.
    OriginalPair get(TubeId a, TubeId b) const;
    SigmaMode mode() const { return mode_; }

    /// Largest finite original interaction distance over all pairs, or nullopt.
    std::optional<double> max_finite_interaction() const;
    std::optional<double> min_finite_interaction() const;

private:
    SigmaMode mode_;
    std::map<std::pair<TubeId, TubeId>, OriginalPair> table_;
    std::map<std::pair<TubeId, TubeId>, double> raw_interaction_;
};

/// Full E(M): every unordered pair once (ascending ids) plus activity cost.
EnergyBreakdown total_energy(const TubeDatabase& db, const Mapping& m, const Params& p,
                             std::span<const Exclusion> excluded = {}, const DistanceCache* cache = nullptr);

} // namespace synopsis
