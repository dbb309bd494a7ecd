#pragma once

#include <filesystem>
#include <string>

#include "certun/model.hpp"

namespace certun {

/// Model checkpoint, little-endian throughout:
///
///   offset  size  field
///   0       8     magic "CUNMODEL"
///   8       4     u32 format version (1)
///   12      4     u32 model kind (0 = sgc, 1 = gcn2)
///   16      8     u64 parameter count p
///   24      4     u32 propagation depth k
///   28      4     u32 hidden width (0 for sgc)
///   32      8     f64 reg_lambda
///   40      8     u64 seed
///   48      8*p   f64 parameters
///
/// Trainer diagnostics are not stored.
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const TrainedModel& model);
TrainedModel decode_checkpoint(const std::string& bytes);

void save_checkpoint(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_checkpoint(const std::filesystem::path& path);

}  // namespace certun
