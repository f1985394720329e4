#pragma once

// Binary greymap (P5) files. 8-bit when maxval < 256, otherwise two bytes
// per pixel, most significant byte first.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsmooth {

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> pixels;  ///< row-major, height rows of width pixels
};

PgmImage read_pgm(std::istream& in);
PgmImage read_pgm(const std::string& path);
void write_pgm(std::ostream& out, const PgmImage& image);
void write_pgm(const std::string& path, const PgmImage& image);

}  // namespace gridsmooth
