#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vost {

//! 8-bit grayscale image, row-major.
struct ImageGray {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  uint8_t at(int x, int y) const {
    return data[static_cast<size_t>(y) * static_cast<size_t>(width) +
                static_cast<size_t>(x)];
  }
  bool operator==(const ImageGray&) const = default;
};

//! Read PGM (P2 ASCII or P5 binary), 8-bit, maxval 255.
ImageGray read_pgm(std::istream& in);
ImageGray read_pgm_file(const std::string& path);

//! Write binary PGM (P5); byte-exact round trip with read_pgm.
void write_pgm(const ImageGray& img, std::ostream& out);
void write_pgm_file(const ImageGray& img, const std::string& path);

//! 10*log10(255^2 / MSE) in dB; +infinity when the images are identical.
double psnr(const ImageGray& a, const ImageGray& b);

} // namespace vost
