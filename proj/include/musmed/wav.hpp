#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "musmed/audio.hpp"

namespace musmed {

enum class WavEncoding { kPcm16, kFloat32 };

struct DecodedWav {
  AudioClip clip;  // already downmixed to mono
  std::uint16_t channels = 1;
  WavEncoding encoding = WavEncoding::kFloat32;
};

// RIFF/WAVE with PCM 16-bit or IEEE float 32-bit (plain or EXTENSIBLE fmt),
// one or two channels. Stereo is averaged to mono.
// Throws BadHeader for truncated/invalid containers, UnsupportedFormat otherwise.
DecodedWav decode_wav(std::span<const std::uint8_t> bytes);
AudioClip read_wav(std::istream& in);
AudioClip read_wav_file(const std::string& path);

// 16-bit output is round(x * 32768) clamped to [-32768, 32767]; reads divide by 32768.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip, WavEncoding encoding);
void write_wav(const AudioClip& clip, WavEncoding encoding, std::ostream& out);
void write_wav_file(const AudioClip& clip, WavEncoding encoding, const std::string& path);

}  // namespace musmed
