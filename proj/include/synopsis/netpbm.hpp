#pragma once

#include "synopsis/image.hpp"

#include <filesystem>
#include <vector>

namespace synopsis {

/// Binary PGM (P5), maxval 255.
GrayFrame read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayFrame& frame, const std::filesystem::path& path);

/// Binary PPM (P6), maxval 255.
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& image, const std::filesystem::path& path);

/// Reads P5 or P6; gray input is replicated into three channels.
RgbImage read_rgb(const std::filesystem::path& path);

/// Frame file name for an index: zero-padded to six digits plus extension.
std::string frame_file_name(long long index, const char* extension);

/// All <digits>.pgm files of a directory, ordered by index. Indices must run
/// 0, 1, 2, ... without gaps; the vector position is the frame index.
std::vector<GrayFrame> read_frame_sequence(const std::filesystem::path& dir);

/// Writes frames as 000000.pgm, 000001.pgm, ...
void write_frame_sequence(const std::vector<GrayFrame>& frames, const std::filesystem::path& dir);

} // namespace synopsis
