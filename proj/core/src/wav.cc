// Copyright 2026 The civb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "civb/error.h"
#include "civb/signal_io.h"

namespace civb {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
  }
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

AudioBuffer LoadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Fail(ErrorCode::kFileUnreadable, "cannot open '" + path.string() + "'");
  }
  const std::vector<std::uint8_t> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = "'" + path.string() + "'";

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    Fail(ErrorCode::kMalformedFile, name + " is not a RIFF/WAVE file");
  }

  std::optional<FormatChunk> fmt;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = ReadU32(chunk + 4);
    const std::size_t available = bytes.size() - pos - 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) {
        Fail(ErrorCode::kMalformedFile, name + " has a truncated fmt chunk");
      }
      FormatChunk f;
      f.format = ReadU16(chunk + 8);
      f.channels = ReadU16(chunk + 10);
      f.sample_rate = ReadU32(chunk + 12);
      f.bits_per_sample = ReadU16(chunk + 22);
      if (f.format == kFormatExtensible) {
        if (size < 40) {
          Fail(ErrorCode::kMalformedFile,
               name + " has a truncated WAVE_FORMAT_EXTENSIBLE header");
        }
        // The sub-format GUID starts with the plain format tag.
        f.format = ReadU16(chunk + 8 + 24);
      }
      fmt = f;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Some writers leave the size field at 0 or 0xFFFFFFFF when streaming.
      data_size = std::min(size, available);
      if (size == 0 || size == 0xFFFFFFFFu) data_size = available;
    }
    pos += 8 + size + (size & 1);
  }

  if (!fmt) Fail(ErrorCode::kMalformedFile, name + " has no fmt chunk");
  if (data == nullptr) Fail(ErrorCode::kMalformedFile, name + " has no data chunk");
  if (fmt->channels == 0) {
    Fail(ErrorCode::kMalformedFile, name + " declares zero channels");
  }
  if (fmt->sample_rate == 0) {
    Fail(ErrorCode::kMalformedFile, name + " declares a zero sample rate");
  }

  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits_per_sample == 16;
  const bool float32 =
      fmt->format == kFormatIeeeFloat && fmt->bits_per_sample == 32;
  if (!pcm16 && !float32) {
    Fail(ErrorCode::kUnsupportedEncoding,
         name + " uses format_tag=" + std::to_string(fmt->format) +
             " bits_per_sample=" + std::to_string(fmt->bits_per_sample) +
             " (need 16-bit PCM or 32-bit float)");
  }

  const std::size_t bytes_per_sample = fmt->bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
  const std::size_t frames = data_size / frame_bytes;
  std::vector<double> mono(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      const std::uint8_t* p = data + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
      } else {
        const std::uint32_t bits = ReadU32(p);
        float f;
        std::memcpy(&f, &bits, sizeof f);
        acc += static_cast<double>(f);
      }
    }
    mono[i] = acc / fmt->channels;
  }
  return AudioBuffer(std::move(mono), static_cast<double>(fmt->sample_rate));
}

void SaveWav(const AudioBuffer& buffer, const std::filesystem::path& path) {
  const auto samples = buffer.samples();
  const double rate = std::round(buffer.sample_rate_hz());
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(samples.size() * 2);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(rate));
  PutU32(out, static_cast<std::uint32_t>(rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double x : samples) {
    const double clamped = std::clamp(x, -1.0, 1.0);
    const long q = std::clamp(std::lround(clamped * 32768.0), -32768L, 32767L);
    PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    Fail(ErrorCode::kFileUnwritable, "cannot open '" + path.string() + "'");
  }
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) {
    Fail(ErrorCode::kFileUnwritable, "write failed for '" + path.string() + "'");
  }
}

}  // namespace civb
