#include "musmed/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "musmed/error.hpp"

namespace musmed {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool has(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }

  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    return v;
  }
  bool tag(const char* four) {
    need(4);
    bool eq = std::memcmp(bytes_.data() + pos_, four, 4) == 0;
    pos_ += 4;
    return eq;
  }
  std::string fourcc() {
    need(4);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return s;
  }

 private:
  void need(std::size_t n) const {
    if (!has(n)) throw Error(ErrorCode::kBadHeader, "truncated WAV");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* four) {
  out.insert(out.end(), four, four + 4);
}

}  // namespace

DecodedWav decode_wav(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (!r.has(12)) throw Error(ErrorCode::kBadHeader, "truncated WAV");
  if (!r.tag("RIFF")) throw Error(ErrorCode::kBadHeader, "missing RIFF");
  r.u32();
  if (!r.tag("WAVE")) throw Error(ErrorCode::kBadHeader, "missing WAVE");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  while (r.has(8) && !have_data) {
    const auto id = r.fourcc();
    const std::uint32_t size = r.u32();
    const std::size_t body = r.pos();
    if (id == "fmt ") {
      if (size < 16 || !r.has(size)) throw Error(ErrorCode::kBadHeader, "short fmt chunk");
      format = r.u16();
      channels = r.u16();
      rate = r.u32();
      r.u32();  // byte rate
      r.u16();  // block align
      bits = r.u16();
      if (format == kFormatExtensible) {
        if (size < 40) throw Error(ErrorCode::kBadHeader, "short extensible fmt chunk");
        r.u16();  // cbSize
        r.u16();  // valid bits
        r.u32();  // channel mask
        format = r.u16();  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw Error(ErrorCode::kBadHeader, "data chunk before fmt");
      const std::size_t avail = bytes.size() - body;
      if (size > avail) throw Error(ErrorCode::kBadHeader, "truncated data chunk");
      data = bytes.subspan(body, size);
      have_data = true;
    }
    r.seek(body + size + (size & 1u));
  }
  if (!have_fmt) throw Error(ErrorCode::kBadHeader, "missing fmt chunk");
  if (!have_data) throw Error(ErrorCode::kBadHeader, "missing data chunk");

  WavEncoding enc;
  if (format == kFormatPcm && bits == 16) {
    enc = WavEncoding::kPcm16;
  } else if (format == kFormatFloat && bits == 32) {
    enc = WavEncoding::kFloat32;
  } else {
    throw Error(ErrorCode::kUnsupportedFormat,
                "format " + std::to_string(format) + " with " + std::to_string(bits) + " bits");
  }
  if (channels != 1 && channels != 2) {
    throw Error(ErrorCode::kUnsupportedFormat, std::to_string(channels) + " channels");
  }
  if (rate == 0) throw Error(ErrorCode::kBadHeader, "zero sample rate");

  const std::size_t width = bits / 8;
  const std::size_t frame = width * channels;
  const std::size_t frames = data.size() / frame;

  DecodedWav out;
  out.channels = channels;
  out.encoding = enc;
  out.clip.sample_rate = static_cast<int>(rate);
  out.clip.samples.resize(frames);
  auto sample_at = [&](std::size_t offset) -> double {
    const std::uint8_t* p = data.data() + offset;
    if (enc == WavEncoding::kPcm16) {
      const auto v = static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
      return static_cast<double>(v) / 32768.0;
    }
    std::uint32_t bits32 = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                           (static_cast<std::uint32_t>(p[2]) << 16) |
                           (static_cast<std::uint32_t>(p[3]) << 24);
    float f;
    std::memcpy(&f, &bits32, sizeof f);
    return static_cast<double>(f);
  };
  for (std::size_t i = 0; i < frames; ++i) {
    if (channels == 1) {
      // Single channel passes through without a double round trip.
      out.clip.samples[i] = static_cast<float>(sample_at(i * frame));
    } else {
      out.clip.samples[i] =
          static_cast<float>(0.5 * (sample_at(i * frame) + sample_at(i * frame + width)));
    }
  }
  return out;
}

AudioClip read_wav(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes).clip;
}

AudioClip read_wav_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_wav(in);
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip, WavEncoding encoding) {
  if (clip.sample_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t format = encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat;
  const std::uint32_t block = bits / 8;
  const std::uint64_t data_size = static_cast<std::uint64_t>(clip.samples.size()) * block;
  if (data_size + 36 > 0xFFFFFFFFull) throw Error(ErrorCode::kInvalidArgument, "clip too long for WAV");

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, static_cast<std::uint32_t>(36 + data_size));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, format);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put32(out, static_cast<std::uint32_t>(clip.sample_rate) * block);
  put16(out, static_cast<std::uint16_t>(block));
  put16(out, bits);
  put_tag(out, "data");
  put32(out, static_cast<std::uint32_t>(data_size));
  for (float s : clip.samples) {
    if (encoding == WavEncoding::kPcm16) {
      const double q = std::clamp(std::round(static_cast<double>(s) * 32768.0), -32768.0, 32767.0);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      std::uint32_t b;
      std::memcpy(&b, &s, sizeof b);
      put32(out, b);
    }
  }
  return out;
}

void write_wav(const AudioClip& clip, WavEncoding encoding, std::ostream& out) {
  const auto bytes = encode_wav(clip, encoding);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "WAV write failed");
}

void write_wav_file(const AudioClip& clip, WavEncoding encoding, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  write_wav(clip, encoding, out);
}

}  // namespace musmed
