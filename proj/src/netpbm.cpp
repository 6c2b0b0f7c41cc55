#include "synopsis/netpbm.hpp"

#include "synopsis/errors.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace synopsis {

namespace {

struct Header {
    std::string magic;
    int width = 0;
    int height = 0;
    int maxval = 0;
};

int read_header_int(std::istream& in, const std::filesystem::path& path) {
    // Skip whitespace and '#' comments between header tokens.
    while (true) {
        const int c = in.peek();
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = 0;
    if (!(in >> value)) {
        throw ValidationError(path.string() + ": malformed netpbm header");
    }
    return value;
}

Header read_header(std::istream& in, const std::filesystem::path& path) {
    Header h;
    in >> h.magic;
    h.width = read_header_int(in, path);
    h.height = read_header_int(in, path);
    h.maxval = read_header_int(in, path);
    in.get();  // single whitespace before the raster
    if (h.width < 1 || h.height < 1 || h.maxval != 255) {
        throw ValidationError(path.string() + ": only 8-bit images with positive size are supported");
    }
    return h;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    return in;
}

void write_raw(const std::filesystem::path& path, const char* magic, int w, int h, const std::uint8_t* data,
               std::size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << magic << '\n' << w << ' ' << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

void read_raster(std::istream& in, std::vector<std::uint8_t>& dst, const std::filesystem::path& path) {
    in.read(reinterpret_cast<char*>(dst.data()), static_cast<std::streamsize>(dst.size()));
    if (static_cast<std::size_t>(in.gcount()) != dst.size()) {
        throw ValidationError(path.string() + ": truncated raster");
    }
}

} // namespace

GrayFrame read_pgm(const std::filesystem::path& path) {
    auto in = open_in(path);
    const Header h = read_header(in, path);
    if (h.magic != "P5") {
        throw ValidationError(path.string() + ": expected binary PGM (P5)");
    }
    GrayFrame frame(h.width, h.height);
    read_raster(in, frame.pixels, path);
    return frame;
}

void write_pgm(const GrayFrame& frame, const std::filesystem::path& path) {
    frame.validate();
    write_raw(path, "P5", frame.width, frame.height, frame.pixels.data(), frame.pixels.size());
}

RgbImage read_ppm(const std::filesystem::path& path) {
    auto in = open_in(path);
    const Header h = read_header(in, path);
    if (h.magic != "P6") {
        throw ValidationError(path.string() + ": expected binary PPM (P6)");
    }
    RgbImage image(h.width, h.height);
    read_raster(in, image.data, path);
    return image;
}

void write_ppm(const RgbImage& image, const std::filesystem::path& path) {
    image.validate();
    write_raw(path, "P6", image.width, image.height, image.data.data(), image.data.size());
}

RgbImage read_rgb(const std::filesystem::path& path) {
    std::string magic;
    {
        auto in = open_in(path);
        in >> magic;
    }
    if (magic == "P5") {
        return RgbImage::from_gray(read_pgm(path));
    }
    return read_ppm(path);
}

std::string frame_file_name(long long index, const char* extension) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%06lld.%s", index, extension);
    return buf;
}

std::vector<GrayFrame> read_frame_sequence(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw ValidationError(dir.string() + " is not a directory");
    }
    std::map<long long, std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".pgm") continue;
        const auto stem = entry.path().stem().string();
        if (stem.empty() || stem.find_first_not_of("0123456789") != std::string::npos) continue;
        files.emplace(std::stoll(stem), entry.path());
    }
    std::vector<GrayFrame> frames;
    long long expected = 0;
    for (const auto& [index, path] : files) {
        if (index != expected) {
            throw ValidationError(dir.string() + ": frame " + std::to_string(expected) + " missing");
        }
        frames.push_back(read_pgm(path));
        ++expected;
    }
    return frames;
}

void write_frame_sequence(const std::vector<GrayFrame>& frames, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        write_pgm(frames[i], dir / frame_file_name(static_cast<long long>(i), "pgm"));
    }
}

} // namespace synopsis
