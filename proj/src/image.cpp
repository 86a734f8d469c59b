#include "vost/image.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vost/errors.hpp"

namespace vost {

namespace {

//! Next whitespace/comment-delimited token of a PGM header.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw parse_error("pgm: unexpected end of header");
  return tok;
}

int parse_int(const std::string& tok, const char* what) {
  try {
    size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error(std::string("pgm: bad ") + what + " '" + tok + "'");
  }
}

} // namespace

ImageGray read_pgm(std::istream& in) {
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5")
    throw parse_error("pgm: expected P2 or P5, got '" + magic + "'");
  ImageGray img;
  img.width = parse_int(next_token(in), "width");
  img.height = parse_int(next_token(in), "height");
  const int maxval = parse_int(next_token(in), "maxval");
  if (img.width <= 0 || img.height <= 0)
    throw parse_error("pgm: non-positive dimensions");
  if (maxval != 255) throw parse_error("pgm: only maxval 255 is supported");
  const size_t n =
      static_cast<size_t>(img.width) * static_cast<size_t>(img.height);
  img.data.resize(n);
  if (magic == "P5") {
    // header ends with exactly one whitespace byte (already consumed)
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
      throw parse_error("pgm: truncated pixel data");
  } else {
    for (size_t i = 0; i < n; ++i) {
      const int v = parse_int(next_token(in), "pixel");
      if (v < 0 || v > 255) throw parse_error("pgm: pixel out of range");
      img.data[i] = static_cast<uint8_t>(v);
    }
  }
  return img;
}

ImageGray read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open image '" + path + "'");
  return read_pgm(in);
}

void write_pgm(const ImageGray& img, std::ostream& out) {
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
}

void write_pgm_file(const ImageGray& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  write_pgm(img, out);
}

double psnr(const ImageGray& a, const ImageGray& b) {
  if (a.width != b.width || a.height != b.height)
    throw numeric_error("psnr: image dimensions differ");
  double sse = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(a.data.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace vost
