#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace treemark {

/// Row-major 8-bit images. Pixel (0,0) is the top-left corner, x grows to the
/// right and y grows downward.

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // interleaved r,g,b; size = 3*width*height

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(3) * w * h, 0) {
    if (w < 1 || h < 1) throw std::invalid_argument("RgbImage: dimensions must be >= 1");
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  const std::uint8_t* at(int x, int y) const {
    return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  std::uint8_t* at(int x, int y) {
    return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size = width*height, values in [0,255]

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("GrayImage: dimensions must be >= 1");
  }

  std::size_t size() const { return pixels.size(); }

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // size = width*height; 1 = foreground, 0 = background

  BinaryImage() = default;
  BinaryImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("BinaryImage: dimensions must be >= 1");
  }

  std::size_t size() const { return bits.size(); }

  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return bits[static_cast<std::size_t>(y) * width + x];
  }

  std::int64_t foreground_count() const {
    std::int64_t n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
  }

  bool operator==(const BinaryImage& other) const = default;
};

}  // namespace treemark
