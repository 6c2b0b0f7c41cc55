#pragma once

#include <cstdint>
#include <vector>

namespace synopsis {

/// 8-bit single-channel image, row-major.
struct GrayFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayFrame() = default;
    GrayFrame(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const { return pixels[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels[index(x, y)]; }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }

    /// Throws ValidationError when pixels.size() != width * height.
    void validate() const;

    friend bool operator==(const GrayFrame&, const GrayFrame&) = default;
};

/// 8-bit RGB image, row-major with interleaved channels.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);

    std::size_t index(int x, int y, int c) const { return (static_cast<std::size_t>(y) * width + x) * 3 + c; }
    std::uint8_t at(int x, int y, int c) const { return data[index(x, y, c)]; }
    std::uint8_t& at(int x, int y, int c) { return data[index(x, y, c)]; }

    void validate() const;
    static RgbImage from_gray(const GrayFrame& g);

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Binary image; nonzero means set.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v = true) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t count() const;

    friend bool operator==(const Mask&, const Mask&) = default;
};

} // namespace synopsis
