#pragma once

#include "synopsis/tube.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace synopsis::testing {

/// Box of size w x h moving by (vx, vy) per frame from (x, y) at `start`.
inline Tube make_tube(TubeId id, Frame start, Frame length, int x, int y, int w = 10, int h = 10, int vx = 0,
                      int vy = 0) {
    std::vector<BoundingBox> boxes;
    for (Frame k = 0; k < length; ++k) {
        boxes.push_back(BoundingBox{start + k, x + vx * static_cast<int>(k), y + vy * static_cast<int>(k), w, h});
    }
    return Tube(id, std::move(boxes));
}

inline SceneInfo make_scene(int w = 100, int h = 100) {
    SceneInfo s;
    s.width = w;
    s.height = h;
    return s;
}

inline TubeDatabase make_db(std::vector<Tube> tubes, int w = 100, int h = 100) {
    return TubeDatabase(make_scene(w, h), std::move(tubes));
}

/// Random walkers inside a w x h scene; boxes stay in bounds.
inline TubeDatabase random_db(std::mt19937_64& rng, int n, Frame horizon = 200, int w = 160, int h = 120,
                              Frame max_len = 60) {
    std::uniform_int_distribution<int> size(4, 20);
    std::uniform_int_distribution<int> step(-2, 2);
    std::vector<Tube> tubes;
    for (int i = 0; i < n; ++i) {
        const int bw = size(rng);
        const int bh = size(rng);
        const Frame len = std::uniform_int_distribution<Frame>(1, std::min(max_len, horizon))(rng);
        const Frame start = std::uniform_int_distribution<Frame>(0, horizon - len)(rng);
        int x = std::uniform_int_distribution<int>(0, w - bw)(rng);
        int y = std::uniform_int_distribution<int>(0, h - bh)(rng);
        std::vector<BoundingBox> boxes;
        for (Frame k = 0; k < len; ++k) {
            boxes.push_back(BoundingBox{start + k, x, y, bw, bh});
            x = std::clamp(x + step(rng), 0, w - bw);
            y = std::clamp(y + step(rng), 0, h - bh);
        }
        tubes.emplace_back(i + 1, std::move(boxes));
    }
    return TubeDatabase(make_scene(w, h), std::move(tubes));
}

} // namespace synopsis::testing
