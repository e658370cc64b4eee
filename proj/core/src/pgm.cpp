#include "hcconf/pgm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <locale>
#include <sstream>

#include "hcconf/error.hpp"

namespace hcconf {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments that run to end of line.
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* field) {
    skip_separators();
    std::size_t value = 0;
    const char* first = bytes_.data() + pos_;
    const char* last = bytes_.data() + bytes_.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) {
      throw Error(ErrorCode::MalformedHeader, std::string("bad or missing ") + field);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorCode::MalformedHeader, "missing whitespace after maxval");
    }
    return pos_ + 1;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string header(std::size_t w, std::size_t h, unsigned maxval) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "P5\n" << w << ' ' << h << '\n' << maxval << '\n';
  return os.str();
}

void write_bytes(const std::string& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace

PgmImage decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::MalformedHeader, "missing P5 magic");
  }
  HeaderReader reader(bytes);
  reader.advance(2);
  const std::size_t width = reader.number("width");
  const std::size_t height = reader.number("height");
  const std::size_t maxval = reader.number("maxval");
  if (width == 0 || height == 0) throw Error(ErrorCode::MalformedHeader, "zero dimension");
  const std::size_t start = reader.raster_start();
  const std::size_t count = width * height;

  if (maxval == 255) {
    if (bytes.size() - start < count) throw Error(ErrorCode::IoError, "truncated raster");
    std::vector<std::uint8_t> labels(count);
    for (std::size_t k = 0; k < count; ++k) {
      const auto v = static_cast<std::uint8_t>(bytes[start + k]);
      if (v != 0 && v != 255) {
        throw Error(ErrorCode::InvalidMaskValue,
                    "mask sample " + std::to_string(v) + " at index " + std::to_string(k));
      }
      labels[k] = v == 255 ? 1 : 0;
    }
    return BinaryMask(width, height, std::move(labels));
  }
  if (maxval == 65535) {
    if (bytes.size() - start < 2 * count) throw Error(ErrorCode::IoError, "truncated raster");
    std::vector<double> probs(count);
    for (std::size_t k = 0; k < count; ++k) {
      const auto hi = static_cast<unsigned>(static_cast<std::uint8_t>(bytes[start + 2 * k]));
      const auto lo = static_cast<unsigned>(static_cast<std::uint8_t>(bytes[start + 2 * k + 1]));
      probs[k] = static_cast<double>((hi << 8) | lo) / 65535.0;
    }
    return SoftMask(width, height, std::move(probs));
  }
  throw Error(ErrorCode::UnsupportedMaxval, "maxval " + std::to_string(maxval));
}

PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

BinaryMask read_mask_pgm(const std::filesystem::path& path) {
  auto img = read_pgm(path);
  if (auto* m = std::get_if<BinaryMask>(&img)) return std::move(*m);
  throw Error(ErrorCode::UnsupportedMaxval, "'" + path.string() + "' is not a binary mask");
}

SoftMask read_soft_pgm(const std::filesystem::path& path) {
  auto img = read_pgm(path);
  if (auto* s = std::get_if<SoftMask>(&img)) return std::move(*s);
  throw Error(ErrorCode::UnsupportedMaxval, "'" + path.string() + "' is not a soft map");
}

std::string encode_pgm(const BinaryMask& mask) {
  std::string out = header(mask.width(), mask.height(), 255);
  out.reserve(out.size() + mask.size());
  for (auto v : mask.data()) out.push_back(v ? static_cast<char>(0xFF) : '\0');
  return out;
}

std::string encode_pgm(const SoftMask& soft) {
  std::string out = header(soft.width(), soft.height(), 65535);
  out.reserve(out.size() + 2 * soft.size());
  for (double p : soft.data()) {
    const auto q = static_cast<unsigned>(std::lround(p * 65535.0));
    out.push_back(static_cast<char>((q >> 8) & 0xFF));
    out.push_back(static_cast<char>(q & 0xFF));
  }
  return out;
}

void write_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
  write_bytes(encode_pgm(mask), path);
}

void write_pgm(const SoftMask& soft, const std::filesystem::path& path) {
  write_bytes(encode_pgm(soft), path);
}

}  // namespace hcconf
