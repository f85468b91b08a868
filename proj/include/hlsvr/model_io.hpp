#ifndef HLSVR_MODEL_IO_HPP
#define HLSVR_MODEL_IO_HPP

#include <filesystem>

#include "hlsvr/hlsvr.hpp"

namespace hlsvr {

inline constexpr int kModelFormatVersion = 1;

/// Portable JSON model file, tagged `hlsvr-model` version 1. Doubles are
/// written with round-trip precision, so save/load is lossless.
void save_hlsvr_model(const HlsvrModel& model,
                      const std::filesystem::path& path);

/// Raises ParseError on a wrong tag or version.
HlsvrModel load_hlsvr_model(const std::filesystem::path& path);

} // namespace hlsvr

#endif // HLSVR_MODEL_IO_HPP
