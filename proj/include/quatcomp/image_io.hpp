#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// 8-bit RGB raster, row-major interleaved.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// 8-bit single-channel raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Binary PPM: "P6", whitespace-separated width, height and maxval 255, one
/// whitespace byte, then width*height RGB triples. Throws IoError.
RgbImage decode_ppm(const std::string& bytes);
std::string encode_ppm(const RgbImage& image);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

/// Binary PGM ("P5", maxval 255).
GrayImage decode_pgm(const std::string& bytes);
std::string encode_pgm(const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Pixel (row, col) becomes R i + G j + B k.
QMatrixd to_qmatrix(const RgbImage& image);

/// Components clamped to [0, 255] and rounded half-to-even.
RgbImage to_image(const QMatrixd& theta);

}  // namespace quatcomp
