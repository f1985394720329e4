#include "gridsmooth/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "gridsmooth/experiment.hpp"

namespace gridsmooth {
namespace {

// Largest accepted pixel count; keeps width * height * 2 well inside size_t.
constexpr std::size_t kMaxPixels = std::size_t{1} << 28;

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_number(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  if (!std::isdigit(in.peek())) throw PgmError(std::string("pgm: malformed header, expected ") + what);
  std::size_t value = 0;
  while (std::isdigit(in.peek())) {
    const auto digit = static_cast<std::size_t>(in.get() - '0');
    if (value > (std::numeric_limits<std::uint32_t>::max() - digit) / 10)
      throw PgmError(std::string("pgm: ") + what + " overflows");
    value = value * 10 + digit;
  }
  return value;
}

}  // namespace

PgmImage read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') throw PgmError("pgm: not a binary greymap (P5)");
  PgmImage image;
  image.width = read_header_number(in, "width");
  image.height = read_header_number(in, "height");
  const std::size_t maxval = read_header_number(in, "maxval");
  if (image.width == 0 || image.height == 0) throw PgmError("pgm: zero image dimension");
  if (image.width > kMaxPixels / image.height) throw PgmError("pgm: image dimensions overflow");
  if (maxval == 0 || maxval > 65535) throw PgmError("pgm: maxval must be in 1..65535");
  image.maxval = static_cast<std::uint32_t>(maxval);
  if (!std::isspace(in.get())) throw PgmError("pgm: malformed header, missing separator before raster");

  const std::size_t count = image.width * image.height;
  const std::size_t bytes_per_pixel = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(count * bytes_per_pixel);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw PgmError("pgm: truncated raster");
  image.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = bytes_per_pixel == 1 ? raw[i] : (std::uint32_t{raw[2 * i]} << 8) | raw[2 * i + 1];
    if (v > maxval) throw PgmError("pgm: pixel value exceeds maxval");
    image.pixels[i] = static_cast<std::uint16_t>(v);
  }
  return image;
}

PgmImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image '" + path + "'");
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const PgmImage& image) {
  if (image.maxval == 0 || image.maxval > 65535) throw PgmError("pgm: maxval must be in 1..65535");
  if (image.pixels.size() != image.width * image.height) throw PgmError("pgm: pixel count does not match dimensions");
  out << "P5\n" << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  const bool wide = image.maxval >= 256;
  std::vector<unsigned char> raw;
  raw.reserve(image.pixels.size() * (wide ? 2 : 1));
  for (const std::uint16_t v : image.pixels) {
    if (v > image.maxval) throw PgmError("pgm: pixel value exceeds maxval");
    if (wide) raw.push_back(static_cast<unsigned char>(v >> 8));
    raw.push_back(static_cast<unsigned char>(v & 0xff));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void write_pgm(const std::string& path, const PgmImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image '" + path + "'");
  write_pgm(out, image);
  if (!out) throw IoError("error while writing image '" + path + "'");
}

}  // namespace gridsmooth
