#include "dplab/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "dplab/errors.hpp"

namespace dplab::nn {

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

class Reader {
 public:
  Reader(std::vector<unsigned char> bytes, std::string name)
      : bytes_(std::move(bytes)), name_(std::move(name)) {}

  const unsigned char* take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw FormatError(name_ + ": truncated DPLW checkpoint");
    const unsigned char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::uint32_t u32() {
    const unsigned char* p = take(4);
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
  }

  bool done() const { return pos_ == bytes_.size(); }
  const std::string& name() const { return name_; }

 private:
  std::vector<unsigned char> bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

std::vector<std::uint32_t> dims_of(const Shape& s) {
  return {static_cast<std::uint32_t>(s.n), static_cast<std::uint32_t>(s.c),
          static_cast<std::uint32_t>(s.h), static_cast<std::uint32_t>(s.w)};
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::vector<CheckpointEntry>& entries) {
  std::vector<unsigned char> bytes = {'D', 'P', 'L', 'W', 0x01};
  put_u32(bytes, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    put_u32(bytes, static_cast<std::uint32_t>(e.name.size()));
    bytes.insert(bytes.end(), e.name.begin(), e.name.end());
    put_u32(bytes, static_cast<std::uint32_t>(e.dims.size()));
    for (auto d : e.dims) put_u32(bytes, d);
    for (float v : e.values) put_u32(bytes, std::bit_cast<std::uint32_t>(v));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<CheckpointEntry> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Reader r({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}, path.string());
  if (std::memcmp(r.take(4), "DPLW", 4) != 0) throw FormatError(r.name() + ": bad DPLW magic");
  if (*r.take(1) != 0x01) throw FormatError(r.name() + ": unsupported DPLW version");
  const std::uint32_t count = r.u32();
  std::vector<CheckpointEntry> entries;
  for (std::uint32_t k = 0; k < count; ++k) {
    CheckpointEntry e;
    const std::uint32_t len = r.u32();
    const unsigned char* name = r.take(len);
    e.name.assign(reinterpret_cast<const char*>(name), len);
    const std::uint32_t rank = r.u32();
    if (rank > 8) throw FormatError(r.name() + ": implausible tensor rank");
    std::size_t numel = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      e.dims.push_back(r.u32());
      numel *= e.dims.back();
    }
    e.values.resize(numel);
    for (auto& v : e.values) v = std::bit_cast<float>(r.u32());
    entries.push_back(std::move(e));
  }
  if (!r.done()) throw FormatError(r.name() + ": trailing bytes in DPLW checkpoint");
  return entries;
}

template <typename T>
void append_entries(std::vector<CheckpointEntry>& out, const std::string& prefix,
                    const std::vector<Parameter<T>>& params) {
  for (const auto& p : params) {
    CheckpointEntry e{prefix + p.name, dims_of(p.value.shape()), {}};
    e.values.reserve(p.value.numel());
    for (T v : p.value.data()) e.values.push_back(static_cast<float>(v));
    out.push_back(std::move(e));
  }
}

template <typename T>
void restore_entries(const std::vector<CheckpointEntry>& entries, const std::string& prefix,
                     std::vector<Parameter<T>>& params) {
  for (auto& p : params) {
    const std::string full = prefix + p.name;
    const CheckpointEntry* match = nullptr;
    for (const auto& e : entries) {
      if (e.name == full) match = &e;
    }
    if (match == nullptr) throw FormatError("checkpoint lacks parameter " + full);
    if (match->dims != dims_of(p.value.shape())) throw FormatError("checkpoint shape mismatch for " + full);
    auto data = p.value.data();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<T>(match->values[i]);
  }
}

template void append_entries(std::vector<CheckpointEntry>&, const std::string&,
                             const std::vector<Parameter<float>>&);
template void append_entries(std::vector<CheckpointEntry>&, const std::string&,
                             const std::vector<Parameter<double>>&);
template void restore_entries(const std::vector<CheckpointEntry>&, const std::string&,
                              std::vector<Parameter<float>>&);
template void restore_entries(const std::vector<CheckpointEntry>&, const std::string&,
                              std::vector<Parameter<double>>&);

}  // namespace dplab::nn
