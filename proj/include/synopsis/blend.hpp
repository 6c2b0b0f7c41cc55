#pragma once

#include "synopsis/image.hpp"
#include "synopsis/tube.hpp"

#include <vector>

namespace synopsis {

/// Source pixels to clone, a mask over them, and where they land in the target.
struct Patch {
    RgbImage source;
    Mask mask;
    int x = 0;
    int y = 0;

    /// Mask must match the source size and leave a one-pixel unmasked border.
    void validate() const;

    /// Crop `box` out of `frame`; mask is the box minus a one-pixel margin.
    /// The patch lands at the box's own position.
    static Patch from_box(const RgbImage& frame, const BoundingBox& box);
};

struct SolverOptions {
    int max_iters = 10000;
    double tolerance = 1e-5;  // max Laplacian residual
};

struct BlendResult {
    RgbImage image;
    /// Unclamped solution, 3 doubles per pixel over the whole background.
    std::vector<double> field;
    int iterations = 0;
    /// max |Lap(result) - Lap(source)| over masked pixels at termination.
    double residual = 0.0;
    bool converged = true;
};

/// Seamless cloning: inside the mask the result's 4-neighbor Laplacian matches
/// the source's, with the target as Dirichlet boundary. Gauss-Seidel in raster
/// order, all three channels per sweep. Pixels outside the mask are copied.
BlendResult poisson_blend(const RgbImage& background, const Patch& patch, const SolverOptions& solver = {});

} // namespace synopsis
