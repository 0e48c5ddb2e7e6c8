#include "segi/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "segi/error.hpp"

namespace segi {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (c == '#') in.unget();
  if (token.empty()) throw InvalidInput("pgm: unexpected end of header");
  return token;
}

int parse_positive(const std::string& token, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || value < 1) {
    throw InvalidInput(std::string("pgm: bad ") + what + " '" + token + "'");
  }
  return value;
}

std::uint8_t to_level(double v) { return static_cast<std::uint8_t>(std::lround(v * 255.0)); }

}  // namespace

Image read_pgm(std::istream& in) {
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5") throw InvalidInput("pgm: unsupported magic '" + magic + "'");
  const int width = parse_positive(next_token(in), "width");
  const int height = parse_positive(next_token(in), "height");
  const int maxval = parse_positive(next_token(in), "maxval");
  if (maxval > 255) throw InvalidInput("pgm: only 8-bit graymaps are supported");

  std::vector<double> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  if (magic == "P5") {
    // next_token consumed exactly one whitespace byte after maxval.
    std::vector<unsigned char> raw(pixels.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw InvalidInput("pgm: truncated pixel data");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] > maxval) throw InvalidInput("pgm: sample exceeds maxval");
      pixels[i] = static_cast<double>(raw[i]) / maxval;
    }
  } else {
    for (double& p : pixels) {
      int v = -1;
      if (!(in >> v) || v < 0 || v > maxval) throw InvalidInput("pgm: bad ascii sample");
      p = static_cast<double>(v) / maxval;
    }
  }
  return Image(width, height, std::move(pixels));
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("pgm: cannot open " + path.string());
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const Image& image, PgmEncoding encoding) {
  out << (encoding == PgmEncoding::binary ? "P5" : "P2") << '\n'
      << image.width() << ' ' << image.height() << "\n255\n";
  if (encoding == PgmEncoding::binary) {
    std::vector<char> raw(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) raw[i] = static_cast<char>(to_level(image[i]));
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  } else {
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) {
        if (x) out << ' ';
        out << static_cast<int>(to_level(image.at(x, y)));
      }
      out << '\n';
    }
  }
}

void write_pgm(const std::filesystem::path& path, const Image& image, PgmEncoding encoding) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("pgm: cannot write " + path.string());
  write_pgm(out, image, encoding);
  if (!out) throw InvalidInput("pgm: write failed for " + path.string());
}

}  // namespace segi
