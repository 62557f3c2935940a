#pragma once

#include <cstddef>
#include <filesystem>

#include "stemkit/audio.hpp"

namespace stemkit {

enum class WavEncoding { pcm16, float32 };

WavEncoding wav_encoding_from_string(const std::string& name);

struct WavWriteResult {
  // Samples clamped into the representable range. Always 0 for float32,
  // which stores out-of-range values verbatim so round trips stay exact.
  std::size_t clipped_samples = 0;
};

// Reads PCM16, PCM24 or float32 RIFF/WAVE files; multichannel input is
// averaged down to mono. Integer PCM is scaled by 2^(bits-1).
Waveform read_wav(const std::filesystem::path& path);

WavWriteResult write_wav(const std::filesystem::path& path, const Waveform& w,
                         WavEncoding encoding);

}  // namespace stemkit
