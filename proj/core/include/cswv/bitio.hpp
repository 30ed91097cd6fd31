#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cswv {

/// Bit string, most significant bit of each byte first.
struct BitString {
    std::vector<std::uint8_t> bytes;
    std::size_t bit_count = 0;

    bool bit(std::size_t i) const { return (bytes[i >> 3] >> (7 - (i & 7))) & 1; }
    std::string to_string() const; // "0"/"1" characters, for tests and debugging
    bool operator==(const BitString&) const = default;
};

class BitWriter {
public:
    void put_bit(bool bit);
    /// Writes the low `count` bits of `value`, most significant first.
    void put_bits(std::uint64_t value, int count);
    void put_unary(std::uint64_t q); // q ones, then a zero
    /// 7 data bits per group, high bit set when more groups follow.
    void put_varint(std::uint32_t value);
    void put_f32(float value);
    void append(const BitString& bits);
    void align_to_byte();

    std::size_t bit_count() const { return bits_.bit_count; }
    const BitString& bits() const { return bits_; }
    BitString take() { return std::move(bits_); }

private:
    BitString bits_;
};

/// Reads a bit string; every read past the end raises BitstreamError naming
/// the bit offset.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_count);
    explicit BitReader(const BitString& bits) : BitReader(bits.bytes, bits.bit_count) {}

    bool get_bit();
    std::uint64_t get_bits(int count);
    std::uint64_t get_unary(std::uint64_t limit);
    std::uint32_t get_varint();
    float get_f32();
    void align_to_byte();

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

} // namespace cswv
