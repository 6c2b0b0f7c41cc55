#pragma once

#include "synopsis/blend.hpp"
#include "synopsis/image.hpp"
#include "synopsis/scheduler.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace synopsis {

using Rgb = std::array<std::uint8_t, 3>;

/// Hue in [0, 1) shared by all members of the group led by `smallest_member`.
double group_hue(TubeId smallest_member);

/// Deterministic color: group hue, brightness varied by tube id.
Rgb tube_color(TubeId id, TubeId group_smallest_member);

/// Hue in [0, 1) of an RGB color (0 for grays).
double hue_of(const Rgb& c);

/// One frame per synopsis time 0..L-1: each active tube as a rectangle outline
/// in its color plus a label with its original start frame.
std::vector<RgbImage> render_boxes(const TubeDatabase& db, const SynopsisSchedule& schedule,
                                   const RgbImage& background);

/// Source frame `frame` from `dir` as 000123.ppm or 000123.pgm.
RgbImage load_source_frame(const std::filesystem::path& dir, Frame frame);

/// One frame per synopsis time: each active tube's box is cut from its source
/// frame and Poisson-blended into the background at its original position, in
/// ascending tube id.
std::vector<RgbImage> render_stitched(const TubeDatabase& db, const SynopsisSchedule& schedule,
                                      const RgbImage& background, const std::filesystem::path& frames_dir,
                                      const SolverOptions& solver = {});

/// Writes frame_000000.ppm, frame_000001.ppm, ... and returns the count.
std::size_t write_rendered_frames(const std::vector<RgbImage>& frames, const std::filesystem::path& dir);

} // namespace synopsis
