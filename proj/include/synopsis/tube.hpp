#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synopsis {

using Frame = std::int64_t;
using TubeId = std::int64_t;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned object extent at one frame. (x, y) is the top-left corner.
struct BoundingBox {
    Frame frame = 0;
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    double area() const { return static_cast<double>(w) * static_cast<double>(h); }
    Point center() const { return {x + w / 2.0, y + h / 2.0}; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Pixel area shared by two boxes, ignoring their frame fields.
double intersection_area(const BoundingBox& a, const BoundingBox& b);

/// Closed frame interval [first, last].
struct FrameInterval {
    Frame first = 0;
    Frame last = 0;

    Frame length() const { return last - first + 1; }
    friend bool operator==(const FrameInterval&, const FrameInterval&) = default;
};

/// One tracked object: a box for every frame in [start_frame, end_frame].
class Tube {
public:
    /// Throws ValidationError unless boxes are non-empty, consecutive and have w, h >= 1.
    Tube(TubeId id, std::vector<BoundingBox> boxes);

    TubeId id() const { return id_; }
    std::span<const BoundingBox> boxes() const { return boxes_; }
    Frame start_frame() const { return boxes_.front().frame; }
    Frame end_frame() const { return boxes_.back().frame; }
    Frame length() const { return static_cast<Frame>(boxes_.size()); }
    FrameInterval span() const { return {start_frame(), end_frame()}; }
    bool covers(Frame f) const { return f >= start_frame() && f <= end_frame(); }

    /// Box at original frame f; OutOfRangeError outside the span.
    const BoundingBox& box_at(Frame f) const;

    /// Box area averaged over the tube's lifetime.
    double mean_area() const;

    friend bool operator==(const Tube&, const Tube&) = default;

private:
    TubeId id_;
    std::vector<BoundingBox> boxes_;
};

struct FrameRate {
    std::int64_t num = 25;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const FrameRate&, const FrameRate&) = default;
};

struct SceneInfo {
    int width = 0;
    int height = 0;
    FrameRate fps;
    std::optional<std::string> background;

    double area() const { return static_cast<double>(width) * static_cast<double>(height); }
    friend bool operator==(const SceneInfo&, const SceneInfo&) = default;
};

/// The original video as a set of tubes. Immutable once constructed.
class TubeDatabase {
public:
    TubeDatabase() = default;

    /// Throws ValidationError on duplicate ids, non-positive scene size or fps,
    /// or any box leaving the scene.
    TubeDatabase(SceneInfo scene, std::vector<Tube> tubes);

    const SceneInfo& scene() const { return scene_; }
    const std::map<TubeId, Tube>& tubes() const { return tubes_; }
    std::size_t size() const { return tubes_.size(); }
    bool empty() const { return tubes_.empty(); }
    bool contains(TubeId id) const { return tubes_.count(id) != 0; }
    const Tube& tube(TubeId id) const;
    std::vector<TubeId> ids() const;

    /// Earliest start to latest end, or nullopt for an empty database.
    std::optional<FrameInterval> extent() const;
    /// Number of frames covered by extent(); 0 when empty.
    Frame original_span() const;

    friend bool operator==(const TubeDatabase&, const TubeDatabase&) = default;

private:
    SceneInfo scene_;
    std::map<TubeId, Tube> tubes_;
};

/// Tube ids frozen together; members are kept in ascending order.
struct Group {
    std::vector<TubeId> members;

    TubeId smallest() const { return members.front(); }
    friend bool operator==(const Group&, const Group&) = default;
};

/// Per-tube integer frame shift. Synopsis start of tube b is start_frame + shift.
class Mapping {
public:
    Mapping() = default;
    explicit Mapping(std::map<TubeId, Frame> shifts) : shifts_(std::move(shifts)) {}

    Frame shift(TubeId id) const;
    bool has(TubeId id) const { return shifts_.count(id) != 0; }
    void set(TubeId id, Frame shift) { shifts_[id] = shift; }
    const std::map<TubeId, Frame>& shifts() const { return shifts_; }

    friend bool operator==(const Mapping&, const Mapping&) = default;

private:
    std::map<TubeId, Frame> shifts_;
};

Mapping identity_mapping(const TubeDatabase& db);

/// Every tube mapped exactly once, no unknown ids, no shifted start below 0.
void validate_mapping(const TubeDatabase& db, const Mapping& m);

struct PairTerms {
    TubeId a = 0;
    TubeId b = 0;
    double temporal = 0.0;
    double chrono = 0.0;
    double collision = 0.0;

    friend bool operator==(const PairTerms&, const PairTerms&) = default;
};

struct EnergyBreakdown {
    double activity = 0.0;
    double temporal = 0.0;
    double chrono = 0.0;
    double collision = 0.0;
    double total = 0.0;
    std::vector<PairTerms> pairs;

    friend bool operator==(const EnergyBreakdown&, const EnergyBreakdown&) = default;
};

enum class GroupingMode { literal, transitive };
enum class SigmaMode { area, sqrt_area };

std::string_view to_string(GroupingMode mode);
std::string_view to_string(SigmaMode mode);
GroupingMode parse_grouping_mode(std::string_view s);
SigmaMode parse_sigma_mode(std::string_view s);

struct Params {
    double alpha = 0.0;             // spatio-temporal grouping threshold
    double beta = 0.0;              // chronological grouping threshold, frames
    double chrono_constant = 1.0;   // cost of a changed start offset
    double collision_weight = 0.0;  // 0 keeps E(M) to the interaction + chronology terms
    double collision_budget = 0.0;  // max cross-group overlap per frame while packing, px^2
    GroupingMode grouping_mode = GroupingMode::transitive;
    SigmaMode sigma_mode = SigmaMode::sqrt_area;

    /// Throws ValidationError for negative or non-finite values.
    void validate() const;

    friend bool operator==(const Params&, const Params&) = default;
};

/// Box center of t at original frame f.
Point tube_center(const Tube& t, Frame f);

/// Intersection of the two spans after applying the given shifts.
std::optional<FrameInterval> span_intersection(const Tube& a, Frame shift_a, const Tube& b, Frame shift_b);

/// Intersection of original spans, or of shifted spans when a mapping is given.
std::optional<FrameInterval> tube_span_intersection(const Tube& a, const Tube& b, const Mapping* m = nullptr);

} // namespace synopsis
