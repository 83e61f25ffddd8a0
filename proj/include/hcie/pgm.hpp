#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hcie/error.hpp"
#include "hcie/image.hpp"

namespace hcie::pgm {

namespace detail {

/// Reads the next header token, skipping whitespace and '#' comments.
inline std::string next_token(std::istream& in) {
  std::string tok;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return tok;
}

inline long parse_header_int(std::istream& in, const std::string& what) {
  const std::string tok = next_token(in);
  require(!tok.empty(), errc::format, "truncated header: missing " + what);
  for (char c : tok)
    require(std::isdigit(static_cast<unsigned char>(c)), errc::format,
            "malformed header: bad " + what + " '" + tok + "'");
  return std::stol(tok);
}

}  // namespace detail

/// Reads a binary (P5) image. The level count becomes maxval+1.
inline Image read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io, "cannot open " + path.string());
  const std::string magic = detail::next_token(in);
  require(magic == "P5", errc::format, "not a binary PGM (magic '" + magic + "')");
  const long width = detail::parse_header_int(in, "width");
  const long height = detail::parse_header_int(in, "height");
  const long maxval = detail::parse_header_int(in, "maxval");
  require(width >= 1 && height >= 1, errc::format, "non-positive dimensions");
  require(maxval >= 1, errc::format, "maxval must be positive");
  require(maxval <= 255, errc::format,
          "unsupported maxval " + std::to_string(maxval) + " (only 8-bit images are supported)");
  // The single whitespace byte after maxval was consumed by the tokenizer.
  std::vector<char> raw(static_cast<std::size_t>(width) * height);
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  require(in.gcount() == static_cast<std::streamsize>(raw.size()), errc::format,
          "truncated payload in " + path.string());
  std::vector<pixel_t> px(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    px[i] = static_cast<std::uint8_t>(raw[i]);
    require(px[i] <= maxval, errc::format,
            "pixel value exceeds maxval in " + path.string());
  }
  return Image(static_cast<int>(height), static_cast<int>(width),
               static_cast<std::uint32_t>(maxval + 1), std::move(px));
}

/// Writes a binary (P5) image with maxval = levels - 1.
inline void write(const std::filesystem::path& path, const Image& img) {
  require(img.levels() <= 256, errc::domain,
          "cannot write image with more than 256 levels as 8-bit PGM");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io, "cannot create " + path.string());
  out << "P5\n" << img.cols() << " " << img.rows() << "\n" << (img.levels() - 1) << "\n";
  std::vector<char> raw(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) raw[i] = static_cast<char>(img.value(i) & 0xFF);
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  require(out.good(), errc::io, "write failed for " + path.string());
}

}  // namespace hcie::pgm
