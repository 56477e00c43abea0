#include "dplab/cli/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dplab/errors.hpp"
#include "dplab/image_io.hpp"

namespace dplab::cli {

namespace {

constexpr const char* kPhantomHeader = "id,path,size,seed";
constexpr const char* kPairHeader = "id,clean,noisy,noise,params,seed";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string relative_to(const fs::path& target, const fs::path& manifest) {
  const fs::path base = fs::absolute(manifest).parent_path();
  return fs::absolute(target).lexically_normal().lexically_relative(base.lexically_normal()).generic_string();
}

fs::path resolve(const std::string& stored, const fs::path& manifest) {
  const fs::path p(stored);
  return p.is_absolute() ? p : manifest.parent_path() / p;
}

std::uint64_t parse_u64(const std::string& s, const fs::path& where) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where.string() + ": bad integer '" + s + "'");
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw FormatError(path.string() + ": expected header '" + header + "'");
  }
  const std::size_t width = split_fields(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != width) {
      throw FormatError(path.string() + ": row " + std::to_string(rows.size() + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " + std::to_string(width));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

void write_phantom_manifest(const fs::path& path, const std::vector<PhantomEntry>& entries) {
  auto out = open_out(path);
  out << kPhantomHeader << '\n';
  for (const auto& e : entries) {
    out << e.id << ',' << relative_to(e.path, path) << ',' << e.size << ',' << e.seed << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<PhantomEntry> read_phantom_manifest(const fs::path& path) {
  std::vector<PhantomEntry> out;
  for (const auto& r : read_csv(path, kPhantomHeader)) {
    out.push_back({r[0], resolve(r[1], path), static_cast<int>(parse_u64(r[2], path)), parse_u64(r[3], path)});
  }
  return out;
}

void write_pair_manifest(const fs::path& path, const std::vector<PairEntry>& entries) {
  auto out = open_out(path);
  out << kPairHeader << '\n';
  for (const auto& e : entries) {
    out << e.id << ',' << relative_to(e.clean, path) << ',' << relative_to(e.noisy, path) << ',' << e.noise
        << ',' << e.params << ',' << e.seed << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<PairEntry> read_pair_manifest(const fs::path& path) {
  std::vector<PairEntry> out;
  for (const auto& r : read_csv(path, kPairHeader)) {
    out.push_back({r[0], resolve(r[1], path), resolve(r[2], path), r[3], r[4], parse_u64(r[5], path)});
  }
  return out;
}

std::vector<PhantomEntry> discover_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  const fs::path manifest = dir / kPhantomManifest;
  if (fs::exists(manifest)) return read_phantom_manifest(manifest);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".dplf") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PhantomEntry> out;
  for (const auto& f : files) out.push_back({f.stem().string(), f, 0, 0});
  return out;
}

std::vector<PairSample> load_pairs(const std::vector<PairEntry>& entries) {
  std::vector<PairSample> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back({e.id, load_raw(e.noisy), load_raw(e.clean), e.noise});
  return out;
}

}  // namespace dplab::cli
