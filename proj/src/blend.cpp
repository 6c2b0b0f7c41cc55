#include "synopsis/blend.hpp"

#include "synopsis/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace synopsis {

void Patch::validate() const {
    source.validate();
    if (mask.width != source.width || mask.height != source.height ||
        mask.bits.size() != static_cast<std::size_t>(source.width) * source.height) {
        throw ValidationError("patch mask does not match patch size");
    }
    for (int yy = 0; yy < mask.height; ++yy) {
        for (int xx = 0; xx < mask.width; ++xx) {
            const bool border = xx == 0 || yy == 0 || xx == mask.width - 1 || yy == mask.height - 1;
            if (border && mask.at(xx, yy)) {
                throw ValidationError("patch mask touches the patch border");
            }
        }
    }
}

Patch Patch::from_box(const RgbImage& frame, const BoundingBox& box) {
    if (box.x < 0 || box.y < 0 || box.x + box.w > frame.width || box.y + box.h > frame.height) {
        throw ValidationError("patch box outside source frame");
    }
    Patch p;
    p.x = box.x;
    p.y = box.y;
    p.source = RgbImage(box.w, box.h);
    p.mask = Mask(box.w, box.h);
    for (int yy = 0; yy < box.h; ++yy) {
        for (int xx = 0; xx < box.w; ++xx) {
            for (int c = 0; c < 3; ++c) {
                p.source.at(xx, yy, c) = frame.at(box.x + xx, box.y + yy, c);
            }
            if (xx > 0 && yy > 0 && xx < box.w - 1 && yy < box.h - 1) {
                p.mask.set(xx, yy);
            }
        }
    }
    return p;
}

BlendResult poisson_blend(const RgbImage& background, const Patch& patch, const SolverOptions& solver) {
    background.validate();
    patch.validate();
    if (patch.x < 0 || patch.y < 0 || patch.x + patch.source.width > background.width ||
        patch.y + patch.source.height > background.height) {
        throw ValidationError("patch placement outside background");
    }

    BlendResult out;
    out.field.assign(background.data.begin(), background.data.end());

    struct Cell {
        int px, py;                     // patch coordinates
        std::size_t field;              // index of channel 0 in out.field
        std::array<std::size_t, 4> nb;  // neighbor indices in out.field
        std::array<double, 3> guidance; // source Laplacian per channel
    };
    std::vector<Cell> cells;
    const auto fidx = [&](int x, int y) { return (static_cast<std::size_t>(y) * background.width + x) * 3; };
    for (int py = 1; py + 1 < patch.source.height; ++py) {
        for (int px = 1; px + 1 < patch.source.width; ++px) {
            if (!patch.mask.at(px, py)) continue;
            const int x = patch.x + px;
            const int y = patch.y + py;
            Cell cell{px, py, fidx(x, y), {fidx(x - 1, y), fidx(x + 1, y), fidx(x, y - 1), fidx(x, y + 1)}, {}};
            for (int c = 0; c < 3; ++c) {
                const double centre = patch.source.at(px, py, c);
                cell.guidance[c] = 4.0 * centre - patch.source.at(px - 1, py, c) - patch.source.at(px + 1, py, c) -
                                   patch.source.at(px, py - 1, c) - patch.source.at(px, py + 1, c);
            }
            cells.push_back(cell);
        }
    }

    auto& f = out.field;
    const auto residual = [&] {
        double worst = 0.0;
        for (const auto& cell : cells) {
            for (int c = 0; c < 3; ++c) {
                const double lap = 4.0 * f[cell.field + c] - f[cell.nb[0] + c] - f[cell.nb[1] + c] -
                                   f[cell.nb[2] + c] - f[cell.nb[3] + c];
                worst = std::max(worst, std::abs(lap - cell.guidance[c]));
            }
        }
        return worst;
    };

    out.residual = residual();
    while (out.residual >= solver.tolerance && out.iterations < solver.max_iters) {
        for (const auto& cell : cells) {
            for (int c = 0; c < 3; ++c) {
                f[cell.field + c] = 0.25 * (f[cell.nb[0] + c] + f[cell.nb[1] + c] + f[cell.nb[2] + c] +
                                            f[cell.nb[3] + c] + cell.guidance[c]);
            }
        }
        ++out.iterations;
        out.residual = residual();
    }
    out.converged = out.residual < solver.tolerance;

    out.image = background;
    for (const auto& cell : cells) {
        for (int c = 0; c < 3; ++c) {
            const double v = std::clamp(std::round(f[cell.field + c]), 0.0, 255.0);
            out.image.data[cell.field + c] = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

} // namespace synopsis
