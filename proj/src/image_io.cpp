#include "treemark/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace treemark {

namespace {

bool has_suffix(const std::string& s, const char* suffix) {
  std::string lower;
  lower.reserve(s.size());
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  const std::size_t n = std::strlen(suffix);
  return lower.size() >= n && lower.compare(lower.size() - n, n, suffix) == 0;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

RgbImage load_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open image file: " + path);

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
    throw std::runtime_error("not a PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("PNG decode error: " + path);
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  RgbImage img(static_cast<int>(w), static_cast<int>(h));
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = img.data.data() + static_cast<std::size_t>(3) * w * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

int pnm_next_token(std::istream& in) {
  // Skips whitespace and '#' comments, then parses one non-negative integer.
  while (true) {
    int c = in.peek();
    if (c == EOF) throw std::runtime_error("truncated PNM header");
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("malformed PNM header");
  return value;
}

RgbImage load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image file: " + path);

  char p = 0, t = 0;
  in.get(p);
  in.get(t);
  if (p != 'P' || (t != '2' && t != '3' && t != '5' && t != '6'))
    throw std::runtime_error("unsupported PNM type in " + path);

  const int w = pnm_next_token(in);
  const int h = pnm_next_token(in);
  const int maxval = pnm_next_token(in);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255)
    throw std::runtime_error("unsupported PNM geometry in " + path);

  const bool color = (t == '3' || t == '6');
  const std::size_t samples = static_cast<std::size_t>(w) * h * (color ? 3 : 1);
  std::vector<std::uint8_t> raw(samples);

  if (t == '5' || t == '6') {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(samples));
    if (static_cast<std::size_t>(in.gcount()) != samples)
      throw std::runtime_error("truncated PNM payload in " + path);
  } else {
    for (std::size_t i = 0; i < samples; ++i) raw[i] = static_cast<std::uint8_t>(pnm_next_token(in));
  }

  RgbImage img(w, h);
  for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
    const std::uint8_t r = color ? raw[3 * i] : raw[i];
    const std::uint8_t g = color ? raw[3 * i + 1] : raw[i];
    const std::uint8_t b = color ? raw[3 * i + 2] : raw[i];
    img.data[3 * i] = r;
    img.data[3 * i + 1] = g;
    img.data[3 * i + 2] = b;
  }
  return img;
}

void write_png(const std::string& path, int w, int h, int color_type, const std::uint8_t* data,
               std::size_t stride) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot write image file: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("PNG encode error: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = const_cast<png_bytep>(data + stride * static_cast<std::size_t>(y));
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

RgbImage load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open image file: " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.close();
  if (magic[0] == 'P' && magic[1] >= '1' && magic[1] <= '6') return load_pnm(path);
  return load_png(path);
}

void save_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

void save_ppm(const RgbImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
}

void save_png_gray(const GrayImage& img, const std::string& path) {
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, img.pixels.data(),
            static_cast<std::size_t>(img.width));
}

void save_png_rgb(const RgbImage& img, const std::string& path) {
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, img.data.data(),
            static_cast<std::size_t>(3) * img.width);
}

void save_image(const GrayImage& img, const std::string& path) {
  if (has_suffix(path, ".png"))
    save_png_gray(img, path);
  else
    save_pgm(img, path);
}

void save_image(const RgbImage& img, const std::string& path) {
  if (has_suffix(path, ".png"))
    save_png_rgb(img, path);
  else
    save_ppm(img, path);
}

GrayImage binary_to_gray(const BinaryImage& img) {
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.bits.size(); ++i) out.pixels[i] = img.bits[i] ? 255 : 0;
  return out;
}

RgbImage gray_to_rgb(const GrayImage& img) {
  RgbImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = img.pixels[i];
  }
  return out;
}

BinaryImage gray_to_binary(const GrayImage& img) {
  BinaryImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) out.bits[i] = img.pixels[i] >= 128 ? 1 : 0;
  return out;
}

}  // namespace treemark
