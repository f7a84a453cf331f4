#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "musmed/audio.hpp"

namespace musmed {

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

// Digest over the sample rate and the little-endian float32 sample bytes.
std::string clip_digest(const AudioClip& clip);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws InvalidArgument on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace musmed
