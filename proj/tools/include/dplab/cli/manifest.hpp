#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dplab/train.hpp"

namespace dplab::cli {

namespace fs = std::filesystem;

inline constexpr const char* kPhantomManifest = "manifest.csv";
inline constexpr const char* kPairManifest = "pairs.csv";

/// Row of a `gen` manifest: `id,path,size,seed`.
struct PhantomEntry {
  std::string id;
  fs::path path;
  int size = 0;
  std::uint64_t seed = 0;
};

/// Row of a `corrupt` manifest: `id,clean,noisy,noise,params,seed`.
struct PairEntry {
  std::string id;
  fs::path clean;
  fs::path noisy;
  std::string noise;
  std::string params;
  std::uint64_t seed = 0;
};

/// Comma-separated rows after a mandatory header. Throws dplab::FormatError when
/// the header differs or a row has the wrong field count.
std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header);

/// Paths are written relative to the manifest's directory and resolved
/// against it when read back.
void write_phantom_manifest(const fs::path& path, const std::vector<PhantomEntry>& entries);
std::vector<PhantomEntry> read_phantom_manifest(const fs::path& path);
void write_pair_manifest(const fs::path& path, const std::vector<PairEntry>& entries);
std::vector<PairEntry> read_pair_manifest(const fs::path& path);

/// Clean inputs of a directory: its manifest.csv when present, else every
/// *.dplf file sorted by name (id = file stem).
std::vector<PhantomEntry> discover_images(const fs::path& dir);

std::vector<PairSample> load_pairs(const std::vector<PairEntry>& entries);

}  // namespace dplab::cli
