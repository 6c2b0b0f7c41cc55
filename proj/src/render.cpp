#include "synopsis/render.hpp"

#include "synopsis/errors.hpp"
#include "synopsis/netpbm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

namespace synopsis {

namespace {

// 3x5 digit glyphs, one row per 3-bit value, most significant bit on the left.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits{{
    {7, 5, 5, 5, 7},
    {2, 6, 2, 2, 7},
    {7, 1, 7, 4, 7},
    {7, 1, 7, 1, 7},
    {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7},
    {7, 4, 7, 5, 7},
    {7, 1, 2, 2, 2},
    {7, 5, 7, 5, 7},
    {7, 5, 7, 1, 7},
}};

double fraction(double v) {
    return v - std::floor(v);
}

Rgb hsv_to_rgb(double h, double s, double v) {
    const double sector = fraction(h) * 6.0;
    const int i = static_cast<int>(sector) % 6;
    const double f = sector - std::floor(sector);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    double r = 0, g = 0, b = 0;
    switch (i) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
    }
    const auto to8 = [](double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); };
    return {to8(r), to8(g), to8(b)};
}

void put(RgbImage& img, int x, int y, const Rgb& c) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    for (int k = 0; k < 3; ++k) img.at(x, y, k) = c[k];
}

void draw_rect(RgbImage& img, const BoundingBox& b, const Rgb& c) {
    for (int x = b.x; x < b.x + b.w; ++x) {
        put(img, x, b.y, c);
        put(img, x, b.y + b.h - 1, c);
    }
    for (int y = b.y; y < b.y + b.h; ++y) {
        put(img, b.x, y, c);
        put(img, b.x + b.w - 1, y, c);
    }
}

void draw_label(RgbImage& img, int x, int y, Frame value, const Rgb& fill) {
    const std::string text = std::to_string(value);
    const int w = static_cast<int>(text.size()) * 4 + 1;
    const int h = 7;
    x = std::clamp(x, 0, std::max(0, img.width - w));
    y = std::clamp(y - h, 0, std::max(0, img.height - h));
    for (int yy = y; yy < y + h; ++yy) {
        for (int xx = x; xx < x + w; ++xx) put(img, xx, yy, fill);
    }
    const Rgb ink{255, 255, 255};
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto& glyph = kDigits[static_cast<std::size_t>(text[i] - '0')];
        for (int row = 0; row < 5; ++row) {
            for (int col = 0; col < 3; ++col) {
                if (glyph[static_cast<std::size_t>(row)] & (4 >> col)) {
                    put(img, x + 1 + static_cast<int>(i) * 4 + col, y + 1 + row, ink);
                }
            }
        }
    }
}

struct Active {
    const Tube* tube;
    Frame original;  // frame of the tube's own timeline shown at this synopsis time
    TubeId leader;
};

/// Active tubes per synopsis frame, ascending tube id within a frame.
std::vector<std::vector<Active>> active_by_frame(const TubeDatabase& db, const SynopsisSchedule& schedule) {
    validate_mapping(db, schedule.mapping);
    std::map<TubeId, TubeId> leader;
    for (const auto& g : schedule.groups.groups) {
        for (TubeId id : g.members) leader[id] = g.smallest();
    }
    const Frame length = synopsis_length(db, schedule.mapping);
    std::vector<std::vector<Active>> out(static_cast<std::size_t>(length));
    Frame origin = std::numeric_limits<Frame>::max();
    for (const auto& [id, t] : db.tubes()) origin = std::min(origin, t.start_frame() + schedule.mapping.shift(id));
    for (const auto& [id, t] : db.tubes()) {
        const Frame shift = schedule.mapping.shift(id);
        const auto it = leader.find(id);
        for (Frame s = t.start_frame() + shift; s <= t.end_frame() + shift; ++s) {
            out[static_cast<std::size_t>(s - origin)].push_back(Active{&t, s - shift, it != leader.end() ? it->second : id});
        }
    }
    return out;
}

void require_scene_size(const TubeDatabase& db, const RgbImage& background) {
    background.validate();
    if (background.width != db.scene().width || background.height != db.scene().height) {
        throw ValidationError("background is " + std::to_string(background.width) + "x" +
                              std::to_string(background.height) + ", scene is " + std::to_string(db.scene().width) +
                              "x" + std::to_string(db.scene().height));
    }
}

} // namespace

double group_hue(TubeId smallest_member) {
    return fraction(0.11 + static_cast<double>(smallest_member) * 0.6180339887498949);
}

Rgb tube_color(TubeId id, TubeId group_smallest_member) {
    const double value = 0.7 + 0.3 * fraction(static_cast<double>(id) * 0.7548776662466927);
    return hsv_to_rgb(group_hue(group_smallest_member), 0.9, value);
}

double hue_of(const Rgb& c) {
    const double r = c[0] / 255.0, g = c[1] / 255.0, b = c[2] / 255.0;
    const double hi = std::max({r, g, b});
    const double lo = std::min({r, g, b});
    const double d = hi - lo;
    if (d <= 0.0) return 0.0;
    double h = 0.0;
    if (hi == r) {
        h = (g - b) / d;
    } else if (hi == g) {
        h = 2.0 + (b - r) / d;
    } else {
        h = 4.0 + (r - g) / d;
    }
    return fraction(h / 6.0);
}

std::vector<RgbImage> render_boxes(const TubeDatabase& db, const SynopsisSchedule& schedule,
                                   const RgbImage& background) {
    require_scene_size(db, background);
    std::vector<RgbImage> frames;
    for (const auto& active : active_by_frame(db, schedule)) {
        RgbImage canvas = background;
        for (const auto& a : active) {
            const Rgb color = tube_color(a.tube->id(), a.leader);
            const BoundingBox& box = a.tube->box_at(a.original);
            draw_rect(canvas, box, color);
            draw_label(canvas, box.x, box.y, a.tube->start_frame(), color);
        }
        frames.push_back(std::move(canvas));
    }
    return frames;
}

RgbImage load_source_frame(const std::filesystem::path& dir, Frame frame) {
    for (const char* ext : {"ppm", "pgm"}) {
        const auto path = dir / frame_file_name(frame, ext);
        if (std::filesystem::exists(path)) {
            return read_rgb(path);
        }
    }
    throw ValidationError("missing source frame " + std::to_string(frame) + " in " + dir.string());
}

std::vector<RgbImage> render_stitched(const TubeDatabase& db, const SynopsisSchedule& schedule,
                                      const RgbImage& background, const std::filesystem::path& frames_dir,
                                      const SolverOptions& solver) {
    require_scene_size(db, background);
    std::map<Frame, RgbImage> sources;
    const auto source = [&](Frame f) -> const RgbImage& {
        auto it = sources.find(f);
        if (it == sources.end()) {
            RgbImage img = load_source_frame(frames_dir, f);
            if (img.width != background.width || img.height != background.height) {
                throw ValidationError("source frame " + std::to_string(f) + " does not match the scene size");
            }
            it = sources.emplace(f, std::move(img)).first;
        }
        return it->second;
    };

    std::vector<RgbImage> frames;
    for (const auto& active : active_by_frame(db, schedule)) {
        RgbImage canvas = background;
        for (const auto& a : active) {
            const BoundingBox& box = a.tube->box_at(a.original);
            if (box.w < 3 || box.h < 3) continue;  // no interior left after the margin
            canvas = poisson_blend(canvas, Patch::from_box(source(a.original), box), solver).image;
        }
        frames.push_back(std::move(canvas));
        // Synopsis frames walk forward through each source, so older frames are rarely revisited.
        if (sources.size() > 256) sources.clear();
    }
    return frames;
}

std::size_t write_rendered_frames(const std::vector<RgbImage>& frames, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06zu.ppm", i);
        write_ppm(frames[i], dir / name);
    }
    return frames.size();
}

} // namespace synopsis
