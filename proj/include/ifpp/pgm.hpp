#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ifpp/density.hpp"

namespace ifpp {

/// Greyscale raster as stored in a PGM file: row 0 is the top of the image.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major, height * width

  std::uint16_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// Reads a binary (P5) or ASCII (P2) PGM. Samples wider than one byte are
/// big-endian. Throws ParseError with the 1-based line of the fault.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm_file(const std::filesystem::path& path);

/// Writes P5 (binary) or P2 (ASCII) PGM.
void write_pgm(std::ostream& out, const GrayImage& image, bool binary = true);

/// Grid density from pixel intensities. The image is flipped so its top row
/// covers the largest x2; values are floor-clamped and normalized.
DensityModel density_from_image(const GrayImage& image);
DensityModel load_image_density(std::istream& in);

}  // namespace ifpp
