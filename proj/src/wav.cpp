// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "tfront/common.hpp"
#include "tfront/signal_io.hpp"

namespace tfront {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t pos) { pos_ = pos; }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (n > remaining()) throw FormatError(std::string("wav: truncated ") + what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t u32(const char* what) {
    auto b = take(4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }

  std::uint16_t u16(const char* what) {
    auto b = take(2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }

  bool tag(const char* expected) {
    auto b = take(4, "chunk id");
    return std::memcmp(b.data(), expected, 4) == 0;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, const FormatChunk& fmt) {
  if (fmt.format == kFormatFloat) {
    std::uint32_t raw = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                        (static_cast<std::uint32_t>(p[2]) << 16) |
                        (static_cast<std::uint32_t>(p[3]) << 24);
    return static_cast<double>(std::bit_cast<float>(raw));
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16: {
      const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      return v / 32768.0;
    }
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32: {
      const auto v = static_cast<std::int32_t>(
          static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
          (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24));
      return v / 2147483648.0;
    }
    default:
      throw UnsupportedEncodingError("wav: unsupported bit depth " + std::to_string(fmt.bits));
  }
}

}  // namespace

WaveformClip parse_wav(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.remaining() < 12) throw FormatError("wav: file shorter than RIFF header");
  if (!in.tag("RIFF")) throw FormatError("wav: missing RIFF tag");
  in.u32("riff size");
  if (!in.tag("WAVE")) throw FormatError("wav: missing WAVE tag");

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  while (in.remaining() >= 8 && !(fmt && data)) {
    const std::size_t id_pos = in.pos();
    const bool is_fmt = in.tag("fmt ");
    in.seek(id_pos);
    const bool is_data = in.tag("data");
    const std::uint32_t size = in.u32("chunk size");
    if (size > in.remaining()) throw FormatError("wav: chunk size exceeds file length");
    const std::size_t body = in.pos();
    if (is_fmt) {
      if (size < 16) throw FormatError("wav: fmt chunk too small");
      FormatChunk f;
      f.format = in.u16("fmt");
      f.channels = in.u16("fmt");
      f.sample_rate = in.u32("fmt");
      in.u32("fmt");  // byte rate
      f.block_align = in.u16("fmt");
      f.bits = in.u16("fmt");
      if (f.format == kFormatExtensible) {
        if (size < 40) throw FormatError("wav: short WAVE_FORMAT_EXTENSIBLE chunk");
        in.u16("cbSize");
        in.u16("valid bits");
        in.u32("channel mask");
        f.format = in.u16("subformat");
      }
      fmt = f;
    } else if (is_data) {
      in.seek(body);
      data = in.take(size, "data");
    }
    in.seek(body + size + (size & 1U));
    if (in.pos() > bytes.size()) in.seek(bytes.size());
  }
  if (!fmt) throw FormatError("wav: missing fmt chunk");
  if (!data) throw FormatError("wav: missing data chunk");
  if (fmt->format != kFormatPcm && fmt->format != kFormatFloat) {
    throw UnsupportedEncodingError("wav: unsupported format tag " + std::to_string(fmt->format));
  }
  if (fmt->format == kFormatFloat && fmt->bits != 32) {
    throw UnsupportedEncodingError("wav: only 32-bit float is supported");
  }
  if (fmt->format == kFormatPcm && fmt->bits != 8 && fmt->bits != 16 && fmt->bits != 24 &&
      fmt->bits != 32) {
    throw UnsupportedEncodingError("wav: unsupported PCM bit depth " + std::to_string(fmt->bits));
  }
  if (fmt->channels == 0) throw FormatError("wav: zero channels");
  if (fmt->sample_rate == 0) throw FormatError("wav: zero sample rate");
  const std::size_t sample_bytes = fmt->bits / 8;
  const std::size_t frame_bytes = sample_bytes * fmt->channels;
  if (fmt->block_align != frame_bytes) throw FormatError("wav: inconsistent block align");

  WaveformClip clip;
  clip.sample_rate_hz = static_cast<int>(fmt->sample_rate);
  const std::size_t frames = data->size() / frame_bytes;
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = data->data() + i * frame_bytes;
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt->channels; ++c) acc += decode_sample(frame + c * sample_bytes, *fmt);
    clip.samples[i] = std::clamp(acc / fmt->channels, -1.0, 1.0);
  }
  return clip;
}

WaveformClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

std::vector<std::uint8_t> encode_wav_pcm16(std::span<const double> samples, int sample_rate_hz) {
  std::vector<std::uint8_t> out;
  const auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  const auto put16 = [&](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(16);
  put16(kFormatPcm);
  put16(1);
  put32(static_cast<std::uint32_t>(sample_rate_hz));
  put32(static_cast<std::uint32_t>(sample_rate_hz) * 2);
  put16(2);
  put16(16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(data_bytes);
  for (double s : samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put16(static_cast<std::uint16_t>(v));
  }
  return out;
}

}  // namespace tfront
