#include "entromin/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

namespace entromin {

namespace {

// Next whitespace-separated header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok += static_cast<char>(c);
  }
  return tok;
}

Index parse_positive(const std::string& tok, const std::filesystem::path& path, const char* what) {
  try {
    size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw FormatError(path.string() + ": bad PGM " + what + " '" + tok + "'");
  }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open image " + path.string());
  if (header_token(in) != "P5") throw FormatError(path.string() + ": not a binary PGM (P5) file");
  GrayImage img;
  img.width = parse_positive(header_token(in), path, "width");
  img.height = parse_positive(header_token(in), path, "height");
  const Index maxval = parse_positive(header_token(in), path, "maxval");
  if (maxval > 255) throw FormatError(path.string() + ": only 8-bit PGM is supported");
  const auto count = static_cast<size_t>(img.width * img.height);
  std::string raw(count, '\0');
  in.read(raw.data(), static_cast<std::streamsize>(count));
  if (static_cast<size_t>(in.gcount()) != count) throw FormatError(path.string() + ": truncated pixel data");
  img.pixels.resize(static_cast<Index>(count));
  for (size_t i = 0; i < count; ++i) img.pixels[static_cast<Index>(i)] = static_cast<unsigned char>(raw[i]);
  if (maxval != 255) img.pixels *= 255.0 / static_cast<double>(maxval);
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  check_length("write_pgm", image.width * image.height, image.pixels.size());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write image " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::string raw(static_cast<size_t>(image.pixels.size()), '\0');
  for (Index i = 0; i < image.pixels.size(); ++i) {
    raw[static_cast<size_t>(i)] = static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(image.pixels[i]), 0L, 255L)));
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

GrayImage crop_square(const GrayImage& image, Index side) {
  if (side <= 0 || side > image.width || side > image.height) {
    throw DomainError("crop_square: side " + std::to_string(side) + " does not fit a " + std::to_string(image.width) +
                      "x" + std::to_string(image.height) + " image");
  }
  GrayImage out;
  out.width = out.height = side;
  out.pixels.resize(side * side);
  for (Index r = 0; r < side; ++r) out.pixels.segment(r * side, side) = image.pixels.segment(r * image.width, side);
  return out;
}

}  // namespace entromin
