#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dplab/nn/unet.hpp"

namespace dplab::nn {

/// One named tensor of a DPLW checkpoint.
struct CheckpointEntry {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;
};

/// DPLW container: "DPLW", version byte 0x01, u32 entry count, then per entry
/// u32 name length, name bytes, u32 rank, rank x u32 dims, float32 payload.
/// All integers and floats little-endian.
void save_checkpoint(const std::filesystem::path& path, const std::vector<CheckpointEntry>& entries);
std::vector<CheckpointEntry> load_checkpoint(const std::filesystem::path& path);

/// Entries for every parameter, names prefixed (e.g. "noise.").
template <typename T>
void append_entries(std::vector<CheckpointEntry>& out, const std::string& prefix,
                    const std::vector<Parameter<T>>& params);

/// Copies matching entries into params. Throws dplab::FormatError when a
/// parameter is missing or its shape differs.
template <typename T>
void restore_entries(const std::vector<CheckpointEntry>& entries, const std::string& prefix,
                     std::vector<Parameter<T>>& params);

}  // namespace dplab::nn
