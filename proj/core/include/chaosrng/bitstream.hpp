#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace chaosrng {

struct StreamOrigin {
  std::string label;
  std::uint64_t seed = 0;
  std::size_t length = 0;
};

// Bit sequence, one byte (0 or 1) per bit.
struct BitStream {
  std::vector<std::uint8_t> bits;
  StreamOrigin origin;

  std::size_t size() const noexcept { return bits.size(); }
  std::span<const std::uint8_t> view() const noexcept { return bits; }
  double fraction_of_ones() const noexcept;
};

// Packed file layout: 8-byte little-endian bit count, then ceil(count/8)
// bytes, first bit in the most significant position of each byte.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> packed);

void write_packed(const std::filesystem::path& path, std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> read_packed(const std::filesystem::path& path);

// ASCII '0'/'1'; whitespace is ignored on read.
void write_text(const std::filesystem::path& path, std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> read_text(const std::filesystem::path& path);

enum class StreamFormat { packed, text };
// ".txt" means text, anything else packed.
StreamFormat format_for(const std::filesystem::path& path);

}  // namespace chaosrng
