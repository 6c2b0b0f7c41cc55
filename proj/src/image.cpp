#include "synopsis/image.hpp"

#include "synopsis/errors.hpp"

#include <algorithm>

namespace synopsis {

GrayFrame::GrayFrame(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

void GrayFrame::validate() const {
    if (width < 1 || height < 1 || pixels.size() != static_cast<std::size_t>(width) * height) {
        throw ValidationError("gray frame size does not match its dimensions");
    }
}

RgbImage::RgbImage(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
}

void RgbImage::validate() const {
    if (width < 1 || height < 1 || data.size() != static_cast<std::size_t>(width) * height * 3) {
        throw ValidationError("rgb image size does not match its dimensions");
    }
}

RgbImage RgbImage::from_gray(const GrayFrame& g) {
    RgbImage out(g.width, g.height);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) {
        out.data[i * 3] = out.data[i * 3 + 1] = out.data[i * 3 + 2] = g.pixels[i];
    }
    return out;
}

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

} // namespace synopsis
