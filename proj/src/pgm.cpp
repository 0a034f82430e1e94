#include "ifpp/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "ifpp/errors.hpp"

namespace ifpp {

namespace {

class PgmScanner {
 public:
  explicit PgmScanner(std::istream& in) : in_(in) {}

  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError("PGM: " + what, line_); }

  int get() {
    const int c = in_.get();
    if (c == '\n') ++line_;
    return c;
  }

  // Skips whitespace and '#' comments, then reads a decimal integer.
  std::uint64_t read_uint(const char* what) {
    int c = get();
    for (;;) {
      if (c == '#') {
        while (c != '\n' && c != EOF) c = get();
      } else if (c != EOF && std::isspace(c)) {
        c = get();
      } else {
        break;
      }
    }
    if (c == EOF) fail(std::string("unexpected end of data reading ") + what);
    if (!std::isdigit(c)) fail(std::string("expected ") + what);
    std::uint64_t value = 0;
    while (c != EOF && std::isdigit(c)) {
      value = value * 10 + static_cast<std::uint64_t>(c - '0');
      if (value > 0xFFFFFFFFu) fail(std::string(what) + " is too large");
      c = get();
    }
    if (c != EOF && !std::isspace(c) && c != '#') fail(std::string("malformed ") + what);
    if (c == '#') {
      while (c != '\n' && c != EOF) c = get();
    }
    return value;
  }

  std::istream& stream() { return in_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

}  // namespace

GrayImage read_pgm(std::istream& in) {
  PgmScanner scan(in);
  const int m0 = scan.get();
  const int m1 = scan.get();
  if (m0 != 'P' || (m1 != '2' && m1 != '5')) scan.fail("bad magic number (expected P2 or P5)");
  const bool binary = m1 == '5';

  GrayImage image;
  image.width = scan.read_uint("width");
  image.height = scan.read_uint("height");
  const auto maxval = scan.read_uint("maxval");
  if (image.width == 0 || image.height == 0) scan.fail("image has zero size");
  if (maxval == 0 || maxval > 65535) scan.fail("maxval must be in 1..65535");
  image.maxval = static_cast<std::uint32_t>(maxval);

  const std::size_t count = image.width * image.height;
  image.pixels.resize(count);
  if (binary) {
    // read_uint consumed exactly one whitespace byte after maxval.
    const bool wide = image.maxval > 255;
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t v = 0;
      for (int b = 0; b < (wide ? 2 : 1); ++b) {
        const int c = in.get();
        if (c == EOF) scan.fail("truncated raster: got " + std::to_string(i) + " of " + std::to_string(count) + " samples");
        v = (v << 8) | static_cast<std::uint32_t>(c);
      }
      if (v > image.maxval) scan.fail("sample exceeds maxval");
      image.pixels[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = scan.read_uint("sample");
      if (v > image.maxval) scan.fail("sample exceeds maxval");
      image.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  return image;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_pgm(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + std::to_string(e.line()) + ": " + e.what(), e.line());
  }
}

void write_pgm(std::ostream& out, const GrayImage& image, bool binary) {
  out << (binary ? "P5" : "P2") << '\n' << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  const bool wide = image.maxval > 255;
  for (std::size_t r = 0; r < image.height; ++r) {
    for (std::size_t c = 0; c < image.width; ++c) {
      const std::uint16_t v = image.at(r, c);
      if (binary) {
        if (wide) out.put(static_cast<char>(v >> 8));
        out.put(static_cast<char>(v & 0xFF));
      } else {
        out << v << (c + 1 == image.width ? '\n' : ' ');
      }
    }
  }
}

DensityModel density_from_image(const GrayImage& image) {
  std::vector<double> values(image.width * image.height);
  for (std::size_t r = 0; r < image.height; ++r) {
    const std::size_t src = image.height - 1 - r;
    for (std::size_t c = 0; c < image.width; ++c) values[r * image.width + c] = image.at(src, c);
  }
  return DensityModel::grid2d(image.height, image.width, std::move(values));
}

DensityModel load_image_density(std::istream& in) { return density_from_image(read_pgm(in)); }

}  // namespace ifpp
