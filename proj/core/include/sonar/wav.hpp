#pragma once

#include <string>

#include "sonar/signal.hpp"

namespace sonar {

/// Reads a mono 16-bit PCM WAV; samples come back as sample/32768.
Signal read_wav(const std::string& path);

/// Writes mono 16-bit PCM; samples are clamped to [-1, 1] and quantized
/// by round(sample * 32768).
void write_wav(const std::string& path, const Signal& sig);

}  // namespace sonar
