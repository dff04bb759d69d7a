// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sepkit/audio.h"
#include "sepkit/error.h"

namespace sepkit {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t Read16(const uint8_t* p) { return uint16_t(p[0] | (p[1] << 8)); }
uint32_t Read32(const uint8_t* p) {
  return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) |
         (uint32_t(p[3]) << 24);
}

void Put16(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(uint8_t(v & 0xff));
  out->push_back(uint8_t(v >> 8));
}
void Put32(std::vector<uint8_t>* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(uint8_t((v >> (8 * i)) & 0xff));
}
void PutTag(std::vector<uint8_t>* out, const char* tag) {
  out->insert(out->end(), tag, tag + 4);
}

}  // namespace

Waveform Waveform::Mono(int rate, std::vector<double> samples) {
  Waveform w;
  w.sample_rate = rate;
  w.data.push_back(std::move(samples));
  return w;
}

Waveform Waveform::Select(std::size_t c) const {
  return Mono(sample_rate, data.at(c));
}

void Waveform::Validate() const {
  if (sample_rate <= 0)
    throw Error(Errc::kInvalidArgument, "sample rate must be positive");
  if (data.empty()) throw Error(Errc::kInvalidArgument, "waveform has no channels");
  for (const auto& ch : data)
    if (ch.size() != data[0].size())
      throw Error(Errc::kShapeMismatch, "channels differ in length");
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::kFileNotFound, path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                             std::istreambuf_iterator<char>());

  if (bytes.size() < 12) throw Error(Errc::kTruncated, path.string() + ": no RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(Errc::kUnsupportedCodec, path.string() + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* payload = nullptr;
  std::size_t payload_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    uint32_t size = Read32(chunk + 4);
    std::size_t body = pos + 8;
    if (body + size > bytes.size())
      throw Error(Errc::kTruncated, path.string() + ": chunk exceeds file size");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(Errc::kTruncated, path.string() + ": short fmt chunk");
      const uint8_t* f = bytes.data() + body;
      format = Read16(f);
      channels = Read16(f + 2);
      rate = Read32(f + 4);
      bits = Read16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw Error(Errc::kTruncated, path.string() + ": short extensible fmt");
        format = Read16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = bytes.data() + body;
      payload_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw Error(Errc::kTruncated, path.string() + ": missing fmt chunk");
  if (!payload) throw Error(Errc::kTruncated, path.string() + ": missing data chunk");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32)
    throw Error(Errc::kUnsupportedCodec, path.string() + ": format tag " +
                                             std::to_string(format) + ", " +
                                             std::to_string(bits) + " bits");
  if (channels == 0 || rate == 0)
    throw Error(Errc::kUnsupportedCodec, path.string() + ": zero channels or rate");

  const std::size_t frame_bytes = std::size_t(channels) * (bits / 8);
  if (payload_size % frame_bytes != 0)
    throw Error(Errc::kTruncated, path.string() + ": partial sample frame");
  const std::size_t frames = payload_size / frame_bytes;

  Waveform w(int(rate), channels, frames);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const uint8_t* p = payload + n * frame_bytes + c * (bits / 8);
      if (pcm16) {
        w.data[c][n] = double(int16_t(Read16(p))) / 32768.0;
      } else {
        w.data[c][n] = double(std::bit_cast<float>(Read32(p)));
      }
    }
  }
  return w;
}

void WriteWav(const std::filesystem::path& path, const Waveform& w,
              WavEncoding encoding) {
  w.Validate();
  const uint16_t channels = uint16_t(w.NumChannels());
  const uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::size_t frames = w.NumSamples();
  const uint32_t data_size = uint32_t(frames * channels * (bits / 8));

  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(&out, "RIFF");
  Put32(&out, 36 + data_size);
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  Put32(&out, 16);
  Put16(&out, encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  Put16(&out, channels);
  Put32(&out, uint32_t(w.sample_rate));
  Put32(&out, uint32_t(w.sample_rate) * channels * (bits / 8));
  Put16(&out, uint16_t(channels * (bits / 8)));
  Put16(&out, bits);
  PutTag(&out, "data");
  Put32(&out, data_size);

  constexpr double kMaxPcm = 32767.0 / 32768.0;
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      double x = w.data[c][n];
      if (encoding == WavEncoding::kPcm16) {
        x = std::isnan(x) ? 0.0 : std::clamp(x, -1.0, kMaxPcm);
        Put16(&out, uint16_t(int16_t(std::lround(x * 32768.0))));
      } else {
        Put32(&out, std::bit_cast<uint32_t>(float(x)));
      }
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::kUnwritable, path.string());
  os.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
  if (!os) throw Error(Errc::kUnwritable, path.string());
}

}  // namespace sepkit
