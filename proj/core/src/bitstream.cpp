#include "chaosrng/bitstream.hpp"

#include <fstream>
#include <iterator>

#include "chaosrng/error.hpp"

namespace chaosrng {

double BitStream::fraction_of_ones() const noexcept {
  if (bits.empty()) return 0.0;
  std::size_t ones = 0;
  for (auto b : bits) ones += b;
  return static_cast<double>(ones) / static_cast<double>(bits.size());
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
  const std::uint64_t count = bits.size();
  std::vector<std::uint8_t> out(8 + (bits.size() + 7) / 8, 0);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(count >> (8 * i));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[8 + i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> packed) {
  if (packed.size() < 8) throw ConfigError("packed stream: missing 8-byte length header");
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= static_cast<std::uint64_t>(packed[i]) << (8 * i);
  if ((packed.size() - 8) * 8 < count || (packed.size() - 8) != (count + 7) / 8) {
    throw ConfigError("packed stream: header declares " + std::to_string(count) +
                      " bits but payload has " + std::to_string(packed.size() - 8) + " bytes");
  }
  std::vector<std::uint8_t> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = (packed[8 + i / 8] >> (7 - i % 8)) & 1u;
  return bits;
}

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open stream file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write stream file " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace

void write_packed(const std::filesystem::path& path, std::span<const std::uint8_t> bits) {
  const auto packed = pack_bits(bits);
  dump(path, packed.data(), packed.size());
}

std::vector<std::uint8_t> read_packed(const std::filesystem::path& path) {
  return unpack_bits(slurp(path));
}

void write_text(const std::filesystem::path& path, std::span<const std::uint8_t> bits) {
  std::string text;
  text.reserve(bits.size() + 1);
  for (auto b : bits) text.push_back(b ? '1' : '0');
  text.push_back('\n');
  dump(path, text.data(), text.size());
}

std::vector<std::uint8_t> read_text(const std::filesystem::path& path) {
  const auto raw = slurp(path);
  std::vector<std::uint8_t> bits;
  bits.reserve(raw.size());
  for (auto c : raw) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ' ' && c != '\n' && c != '\r' && c != '\t') {
      throw ConfigError("text stream " + path.string() + " contains a character other than 0/1");
    }
  }
  return bits;
}

StreamFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".txt" ? StreamFormat::text : StreamFormat::packed;
}

}  // namespace chaosrng
