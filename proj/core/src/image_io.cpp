#include "dplab/image_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "dplab/errors.hpp"

namespace dplab {

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

// Cursor over a PGM header: whitespace-separated decimal tokens with '#' comments.
class PgmHeader {
 public:
  PgmHeader(const std::vector<unsigned char>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  long next_int() {
    skip_space();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError(name_ + ": malformed PGM header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) throw FormatError(name_ + ": PGM header value too large");
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t payload_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError(name_ + ": malformed PGM header");
    }
    return pos_ + 1;
  }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const std::string& name_;
  std::size_t pos_ = 2;
};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

Image load_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const std::string name = path.string();
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError(name + ": not a binary PGM (expected magic P5)");
  }
  PgmHeader header(bytes, name);
  const long width = header.next_int();
  const long height = header.next_int();
  const long maxval = header.next_int();
  if (maxval != 255) throw FormatError(name + ": only maxval 255 is supported");
  if (width < 1 || height < 1 || width > Image::kMaxSide || height > Image::kMaxSide) {
    throw FormatError(name + ": PGM dimensions out of range");
  }
  const std::size_t offset = header.payload_offset();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < offset + count) throw IoError(name + ": truncated PGM payload");

  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = static_cast<float>(bytes[offset + i]) / 255.0f;
  }
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

void save_pgm(const Image& image, const std::filesystem::path& path) {
  const std::string header = "P5\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + image.size());
  for (float v : image.pixels()) {
    const double scaled = std::round(static_cast<double>(v) * 255.0);
    const double clamped = scaled < 0.0 ? 0.0 : (scaled > 255.0 ? 255.0 : scaled);
    bytes.push_back(static_cast<unsigned char>(clamped));
  }
  write_file(path, bytes);
}

Image load_raw(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const std::string name = path.string();
  if (bytes.size() < kRawHeaderBytes || std::memcmp(bytes.data(), "DPLF", 4) != 0) {
    throw FormatError(name + ": bad DPLF magic");
  }
  if (bytes[4] != 0x01) throw FormatError(name + ": unsupported DPLF version");
  const std::uint32_t width = get_u32(bytes.data() + 5);
  const std::uint32_t height = get_u32(bytes.data() + 9);
  if (width < 1 || height < 1 || width > Image::kMaxSide || height > Image::kMaxSide) {
    throw FormatError(name + ": DPLF dimensions out of range");
  }
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() != kRawHeaderBytes + 4 * count) {
    throw FormatError(name + ": DPLF payload size mismatch");
  }
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes.data() + kRawHeaderBytes + 4 * i));
  }
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

void save_raw(const Image& image, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes = {'D', 'P', 'L', 'F', 0x01};
  bytes.reserve(kRawHeaderBytes + 4 * image.size());
  put_u32(bytes, static_cast<std::uint32_t>(image.width()));
  put_u32(bytes, static_cast<std::uint32_t>(image.height()));
  for (float v : image.pixels()) put_u32(bytes, std::bit_cast<std::uint32_t>(v));
  write_file(path, bytes);
}

}  // namespace dplab
