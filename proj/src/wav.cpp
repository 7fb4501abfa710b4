#include "dereverb/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "dereverb/diagnostics.hpp"
#include "dereverb/errors.hpp"

namespace dereverb {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  }
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

[[noreturn]] void malformed(const std::filesystem::path& path,
                            const std::string& why) {
  throw IoError("wav: " + path.string() + ": " + why);
}

}  // namespace

Signal read_wav(const std::filesystem::path& path, WavInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    malformed(path, "not a RIFF/WAVE file");
  }

  std::uint16_t format_tag = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || available < 16) malformed(path, "truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format_tag = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      block_align = read_u16(f + 12);
      bits = read_u16(f + 14);
      if (format_tag == kFormatExtensible) {
        if (size < 40 || available < 40) {
          malformed(path, "truncated WAVE_FORMAT_EXTENSIBLE header");
        }
        format_tag = read_u16(f + 24);  // first two bytes of the subformat GUID
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, available);
    }
    pos = body + size + (size & 1u);
  }

  if (channels == 0 || sample_rate == 0) malformed(path, "missing fmt chunk");
  if (data == nullptr) malformed(path, "missing data chunk");

  SampleFormat format;
  if (format_tag == kFormatPcm && bits == 16) {
    format = SampleFormat::kPcm16;
  } else if (format_tag == kFormatPcm && bits == 24) {
    format = SampleFormat::kPcm24;
  } else if (format_tag == kFormatFloat && bits == 32) {
    format = SampleFormat::kFloat32;
  } else {
    std::ostringstream os;
    os << "unsupported sample format (tag " << format_tag << ", " << bits
       << " bits); expected 16/24-bit PCM or 32-bit float";
    malformed(path, os.str());
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes =
      block_align != 0 ? block_align : bytes_per_sample * channels;
  if (frame_bytes < bytes_per_sample * channels) {
    malformed(path, "block alignment smaller than one sample frame");
  }
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) malformed(path, "no audio frames");
  if (channels > 1) {
    std::ostringstream os;
    os << path.string() << ": " << channels
       << " channels, using channel 0 only";
    warn(os.str());
  }

  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = data + i * frame_bytes;
    switch (format) {
      case SampleFormat::kPcm16: {
        const auto v = static_cast<std::int16_t>(read_u16(p));
        samples[i] = static_cast<double>(v) / 32768.0;
        break;
      }
      case SampleFormat::kPcm24: {
        std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
        if (v & 0x800000) v -= 0x1000000;
        samples[i] = static_cast<double>(v) / 8388608.0;
        break;
      }
      case SampleFormat::kFloat32: {
        float v;
        std::memcpy(&v, p, sizeof v);
        samples[i] = static_cast<double>(v);
        break;
      }
    }
  }
  if (info != nullptr) {
    info->format = format;
    info->channels = channels;
  }
  try {
    return Signal(std::move(samples), static_cast<double>(sample_rate));
  } catch (const Error& e) {
    malformed(path, e.what());
  }
}

void write_wav(const std::filesystem::path& path, const Signal& signal,
               SampleFormat format) {
  const double rate = signal.sample_rate();
  if (rate != std::round(rate) || rate > 4294967295.0) {
    std::ostringstream os;
    os << "wav: sample rate " << rate << " is not a representable integer";
    throw ParameterError(os.str());
  }
  const std::uint16_t bits = format == SampleFormat::kPcm16   ? 16
                             : format == SampleFormat::kPcm24 ? 24
                                                              : 32;
  const std::uint16_t tag =
      format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t bytes_per_sample = bits / 8u;
  const std::uint64_t data_bytes64 =
      static_cast<std::uint64_t>(signal.size()) * bytes_per_sample;
  if (data_bytes64 > 0xFFFFFFFFull - 36) {
    throw ParameterError("wav: signal too long for a RIFF file");
  }
  const auto data_bytes = static_cast<std::uint32_t>(data_bytes64);

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(rate));
  put_u32(out, static_cast<std::uint32_t>(rate) * bytes_per_sample);
  put_u16(out, static_cast<std::uint16_t>(bytes_per_sample));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_bytes);

  for (double v : signal.samples()) {
    switch (format) {
      case SampleFormat::kPcm16: {
        const double q = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        break;
      }
      case SampleFormat::kPcm24: {
        const double q =
            std::clamp(std::round(v * 8388608.0), -8388608.0, 8388607.0);
        const auto iv = static_cast<std::int32_t>(q);
        out.push_back(static_cast<unsigned char>(iv & 0xFF));
        out.push_back(static_cast<unsigned char>((iv >> 8) & 0xFF));
        out.push_back(static_cast<unsigned char>((iv >> 16) & 0xFF));
        break;
      }
      case SampleFormat::kFloat32: {
        const float f = static_cast<float>(v);
        std::array<unsigned char, 4> b;
        std::memcpy(b.data(), &f, 4);
        out.insert(out.end(), b.begin(), b.end());
        break;
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("wav: cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("wav: write failed for " + path.string());
}

}  // namespace dereverb
