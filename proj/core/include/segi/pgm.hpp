#pragma once

#include <filesystem>
#include <iosfwd>

#include "segi/image.hpp"

namespace segi {

enum class PgmEncoding { ascii, binary };

/// Reads an 8-bit portable graymap (P2 or P5). Value v maps to v / maxval.
Image read_pgm(const std::filesystem::path& path);
Image read_pgm(std::istream& in);

/// Writes an 8-bit portable graymap with maxval 255. Pixels are rounded to
/// the nearest level, so binary images are written as 0/255.
void write_pgm(const std::filesystem::path& path, const Image& image,
               PgmEncoding encoding = PgmEncoding::binary);
void write_pgm(std::ostream& out, const Image& image,
               PgmEncoding encoding = PgmEncoding::binary);

}  // namespace segi
