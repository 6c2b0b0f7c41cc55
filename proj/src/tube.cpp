#include "synopsis/tube.hpp"

#include "synopsis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synopsis {

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.x + a.w, b.x + b.w);
    const int y1 = std::min(a.y + a.h, b.y + b.h);
    if (x1 <= x0 || y1 <= y0) {
        return 0.0;
    }
    return static_cast<double>(x1 - x0) * static_cast<double>(y1 - y0);
}

Tube::Tube(TubeId id, std::vector<BoundingBox> boxes) : id_(id), boxes_(std::move(boxes)) {
    const std::string where = "tube " + std::to_string(id_);
    if (boxes_.empty()) {
        throw ValidationError(where + ": no boxes");
    }
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
        const auto& b = boxes_[i];
        if (b.w < 1 || b.h < 1) {
            throw ValidationError(where + ", record " + std::to_string(i) + ": box extent must be >= 1");
        }
        if (b.frame < 0) {
            throw ValidationError(where + ", record " + std::to_string(i) + ": negative frame");
        }
        if (i > 0) {
            const Frame prev = boxes_[i - 1].frame;
            if (b.frame == prev) {
                throw ValidationError(where + ", record " + std::to_string(i) + ": duplicate frame " +
                                      std::to_string(b.frame));
            }
            if (b.frame != prev + 1) {
                throw ValidationError(where + ", record " + std::to_string(i) + ": frame gap after " +
                                      std::to_string(prev));
            }
        }
    }
}

const BoundingBox& Tube::box_at(Frame f) const {
    if (!covers(f)) {
        throw OutOfRangeError("frame " + std::to_string(f) + " outside tube " + std::to_string(id_) + " span [" +
                              std::to_string(start_frame()) + ", " + std::to_string(end_frame()) + "]");
    }
    return boxes_[static_cast<std::size_t>(f - start_frame())];
}

double Tube::mean_area() const {
    double sum = 0.0;
    for (const auto& b : boxes_) {
        sum += b.area();
    }
    return sum / static_cast<double>(boxes_.size());
}

TubeDatabase::TubeDatabase(SceneInfo scene, std::vector<Tube> tubes) : scene_(std::move(scene)) {
    if (scene_.width < 1 || scene_.height < 1) {
        throw ValidationError("scene dimensions must be positive");
    }
    if (scene_.fps.num <= 0 || scene_.fps.den <= 0) {
        throw ValidationError("fps must be a positive rational");
    }
    for (auto& t : tubes) {
        const TubeId id = t.id();
        const auto boxes = t.boxes();
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            const auto& b = boxes[i];
            if (b.x < 0 || b.y < 0 || b.x + b.w > scene_.width || b.y + b.h > scene_.height) {
                throw ValidationError("tube " + std::to_string(id) + ", record " + std::to_string(i) +
                                      ": box outside scene");
            }
        }
        if (!tubes_.emplace(id, std::move(t)).second) {
            throw ValidationError("tube " + std::to_string(id) + ": duplicate id");
        }
    }
}

const Tube& TubeDatabase::tube(TubeId id) const {
    const auto it = tubes_.find(id);
    if (it == tubes_.end()) {
        throw ValidationError("unknown tube id " + std::to_string(id));
    }
    return it->second;
}

std::vector<TubeId> TubeDatabase::ids() const {
    std::vector<TubeId> out;
    out.reserve(tubes_.size());
    for (const auto& [id, t] : tubes_) {
        out.push_back(id);
    }
    return out;
}

std::optional<FrameInterval> TubeDatabase::extent() const {
    if (tubes_.empty()) {
        return std::nullopt;
    }
    FrameInterval span{tubes_.begin()->second.start_frame(), tubes_.begin()->second.end_frame()};
    for (const auto& [id, t] : tubes_) {
        span.first = std::min(span.first, t.start_frame());
        span.last = std::max(span.last, t.end_frame());
    }
    return span;
}

Frame TubeDatabase::original_span() const {
    const auto e = extent();
    return e ? e->length() : 0;
}

Frame Mapping::shift(TubeId id) const {
    const auto it = shifts_.find(id);
    if (it == shifts_.end()) {
        throw ValidationError("mapping has no shift for tube " + std::to_string(id));
    }
    return it->second;
}

Mapping identity_mapping(const TubeDatabase& db) {
    Mapping m;
    for (const auto& [id, t] : db.tubes()) {
        m.set(id, 0);
    }
    return m;
}

void validate_mapping(const TubeDatabase& db, const Mapping& m) {
    for (const auto& [id, shift] : m.shifts()) {
        if (!db.contains(id)) {
            throw ValidationError("mapping references unknown tube " + std::to_string(id));
        }
    }
    for (const auto& [id, t] : db.tubes()) {
        if (!m.has(id)) {
            throw ValidationError("mapping has no shift for tube " + std::to_string(id));
        }
        if (t.start_frame() + m.shift(id) < 0) {
            throw ValidationError("tube " + std::to_string(id) + " shifted to negative start " +
                                  std::to_string(t.start_frame() + m.shift(id)));
        }
    }
}

std::string_view to_string(GroupingMode mode) {
    return mode == GroupingMode::literal ? "literal" : "transitive";
}

std::string_view to_string(SigmaMode mode) {
    return mode == SigmaMode::area ? "area" : "sqrt_area";
}

GroupingMode parse_grouping_mode(std::string_view s) {
    if (s == "literal") return GroupingMode::literal;
    if (s == "transitive") return GroupingMode::transitive;
    throw ValidationError("unknown grouping mode '" + std::string(s) + "'");
}

SigmaMode parse_sigma_mode(std::string_view s) {
    if (s == "area") return SigmaMode::area;
    if (s == "sqrt_area") return SigmaMode::sqrt_area;
    throw ValidationError("unknown sigma mode '" + std::string(s) + "'");
}

void Params::validate() const {
    const auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError(std::string(name) + " must be finite and >= 0");
        }
    };
    check(alpha, "alpha");
    check(beta, "beta");
    check(collision_weight, "collision_weight");
    check(collision_budget, "collision_budget");
    if (!std::isfinite(chrono_constant)) {
        throw ValidationError("chrono_constant must be finite");
    }
}

Point tube_center(const Tube& t, Frame f) {
    return t.box_at(f).center();
}

std::optional<FrameInterval> span_intersection(const Tube& a, Frame shift_a, const Tube& b, Frame shift_b) {
    const Frame first = std::max(a.start_frame() + shift_a, b.start_frame() + shift_b);
    const Frame last = std::min(a.end_frame() + shift_a, b.end_frame() + shift_b);
    if (first > last) {
        return std::nullopt;
    }
    return FrameInterval{first, last};
}

std::optional<FrameInterval> tube_span_intersection(const Tube& a, const Tube& b, const Mapping* m) {
    if (m == nullptr) {
        return span_intersection(a, 0, b, 0);
    }
    return span_intersection(a, m->shift(a.id()), b, m->shift(b.id()));
}

} // namespace synopsis
