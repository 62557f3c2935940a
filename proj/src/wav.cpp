#include "stemkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace stemkit {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint16_t block_align = 0;
};

}  // namespace

WavEncoding wav_encoding_from_string(const std::string& name) {
  if (name == "pcm16") return WavEncoding::pcm16;
  if (name == "float32") return WavEncoding::float32;
  throw ConfigError("unknown WAV encoding '" + name +
                    "' (expected pcm16 or float32)");
}

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");

  const std::string where = "'" + path.string() + "'";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError(where + " is not a RIFF/WAVE file");

  FmtChunk fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* tag = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size())
      throw FormatError(where + ": truncated chunk '" +
                        std::string(tag, tag + 4) + "'");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError(where + ": fmt chunk too small");
      fmt.format = read_u16(bytes.data() + body);
      fmt.channels = read_u16(bytes.data() + body + 2);
      fmt.sample_rate = read_u32(bytes.data() + body + 4);
      fmt.block_align = read_u16(bytes.data() + body + 12);
      fmt.bits_per_sample = read_u16(bytes.data() + body + 14);
      if (fmt.format == kFormatExtensible) {
        // Actual format code lives in the first two bytes of the SubFormat
        // GUID of the extension block.
        if (chunk_size < 40)
          throw FormatError(where + ": extensible fmt chunk too small");
        fmt.format = read_u16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw FormatError(where + ": missing fmt chunk");
  if (!have_data) throw FormatError(where + ": missing data chunk");
  if (fmt.channels == 0) throw FormatError(where + ": zero channels");
  if (fmt.sample_rate == 0) throw FormatError(where + ": zero sample rate");

  const unsigned bytes_per_sample = fmt.bits_per_sample / 8;
  const bool supported =
      (fmt.format == kFormatPcm &&
       (fmt.bits_per_sample == 16 || fmt.bits_per_sample == 24)) ||
      (fmt.format == kFormatFloat && fmt.bits_per_sample == 32);
  if (!supported)
    throw FormatError(where + ": unsupported encoding (format " +
                      std::to_string(fmt.format) + ", " +
                      std::to_string(fmt.bits_per_sample) + " bit)");

  const std::size_t frame_bytes =
      static_cast<std::size_t>(bytes_per_sample) * fmt.channels;
  if (data_size % frame_bytes != 0)
    throw FormatError(where + ": data size is not a whole number of frames");
  const std::size_t frames = data_size / frame_bytes;

  std::vector<double> mono(frames, 0.0);
  const double inv_channels = 1.0 / fmt.channels;
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    const unsigned char* frame = data + f * frame_bytes;
    for (unsigned c = 0; c < fmt.channels; ++c) {
      const unsigned char* s = frame + c * bytes_per_sample;
      if (fmt.format == kFormatFloat) {
        float v;
        std::memcpy(&v, s, 4);
        acc += static_cast<double>(v);
      } else if (fmt.bits_per_sample == 16) {
        const auto raw = static_cast<std::int16_t>(s[0] | (s[1] << 8));
        acc += raw / 32768.0;
      } else {  // PCM24
        std::int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
        if (raw & 0x800000) raw -= 1 << 24;
        acc += raw / 8388608.0;
      }
    }
    mono[f] = acc * inv_channels;
  }
  return make_waveform(std::move(mono), static_cast<int>(fmt.sample_rate));
}

WavWriteResult write_wav(const std::filesystem::path& path, const Waveform& w,
                         WavEncoding encoding) {
  if (w.sample_rate <= 0)
    throw ContractError("cannot write a waveform without a sample rate");

  const bool is_float = encoding == WavEncoding::float32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint16_t block_align = bits / 8;  // mono
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(w.size() * block_align);

  std::vector<unsigned char> out;
  out.reserve(64 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 0);  // patched below
  put_tag(out, "WAVE");

  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, is_float ? kFormatFloat : kFormatPcm);
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * block_align);
  put_u16(out, block_align);
  put_u16(out, bits);

  if (is_float) {
    // fact chunk is required for non-PCM formats.
    put_tag(out, "fact");
    put_u32(out, 4);
    put_u32(out, static_cast<std::uint32_t>(w.size()));
  }

  put_tag(out, "data");
  put_u32(out, data_size);

  WavWriteResult result;
  if (is_float) {
    // Stored verbatim: float32 round trips exactly, even out of range.
    for (const double x : w.samples) {
      const float v = static_cast<float>(x);
      unsigned char b[4];
      std::memcpy(b, &v, 4);
      out.insert(out.end(), b, b + 4);
    }
  } else {
    for (const double x : w.samples) {
      long q = std::lround(x * 32768.0);
      if (q < -32768 || q > 32767) {
        ++result.clipped_samples;
        q = std::clamp(q, -32768L, 32767L);
      }
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }

  const std::uint32_t riff_size = static_cast<std::uint32_t>(out.size()) - 8;
  out[4] = static_cast<unsigned char>(riff_size & 0xFF);
  out[5] = static_cast<unsigned char>((riff_size >> 8) & 0xFF);
  out[6] = static_cast<unsigned char>((riff_size >> 16) & 0xFF);
  out[7] = static_cast<unsigned char>((riff_size >> 24) & 0xFF);

  std::ofstream of(path, std::ios::binary | std::ios::trunc);
  if (!of) throw IoError("cannot open '" + path.string() + "' for writing");
  of.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!of) throw IoError("write failure on '" + path.string() + "'");
  return result;
}

}  // namespace stemkit
