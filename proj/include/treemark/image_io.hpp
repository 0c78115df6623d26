#pragma once

#include <string>

#include "treemark/image.hpp"

namespace treemark {

/// Reads a PNG, PGM (P2/P5) or PPM (P3/P6) file. Grayscale and paletted
/// sources are expanded to RGB so the rest of the pipeline sees one format.
RgbImage load_image(const std::string& path);

void save_pgm(const GrayImage& img, const std::string& path);
void save_ppm(const RgbImage& img, const std::string& path);
void save_png_gray(const GrayImage& img, const std::string& path);
void save_png_rgb(const RgbImage& img, const std::string& path);

/// Dispatches on the file extension (.png vs .pgm/.ppm).
void save_image(const GrayImage& img, const std::string& path);
void save_image(const RgbImage& img, const std::string& path);

GrayImage binary_to_gray(const BinaryImage& img);
RgbImage gray_to_rgb(const GrayImage& img);

/// Foreground = pixels with intensity >= 128 (inputs are expected to be
/// clean 0/255 images when this shortcut is used).
BinaryImage gray_to_binary(const GrayImage& img);

}  // namespace treemark
