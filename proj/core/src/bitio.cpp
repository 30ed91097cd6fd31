#include "cswv/bitio.hpp"

#include "cswv/errors.hpp"

#include <bit>
#include <cstring>

namespace cswv {

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bit_count);
    for (std::size_t i = 0; i < bit_count; ++i) s.push_back(bit(i) ? '1' : '0');
    return s;
}

void BitWriter::put_bit(bool bit) {
    const std::size_t i = bits_.bit_count++;
    if ((i & 7) == 0) bits_.bytes.push_back(0);
    if (bit) bits_.bytes.back() |= static_cast<std::uint8_t>(0x80u >> (i & 7));
}

void BitWriter::put_bits(std::uint64_t value, int count) {
    for (int b = count - 1; b >= 0; --b) put_bit((value >> b) & 1);
}

void BitWriter::put_unary(std::uint64_t q) {
    for (std::uint64_t i = 0; i < q; ++i) put_bit(true);
    put_bit(false);
}

void BitWriter::put_varint(std::uint32_t value) {
    do {
        const std::uint32_t group = value & 0x7f;
        value >>= 7;
        put_bits(group | (value ? 0x80u : 0u), 8);
    } while (value);
}

void BitWriter::put_f32(float value) {
    put_bits(std::bit_cast<std::uint32_t>(value), 32);
}

void BitWriter::append(const BitString& bits) {
    for (std::size_t i = 0; i < bits.bit_count; ++i) put_bit(bits.bit(i));
}

void BitWriter::align_to_byte() {
    while (bits_.bit_count & 7) put_bit(false);
}

BitReader::BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_count)
    : bytes_(bytes), size_(bit_count) {
    if (bit_count > bytes.size() * 8) throw BitstreamError("bit count exceeds buffer", 0);
}

bool BitReader::get_bit() {
    if (pos_ >= size_) throw BitstreamError("unexpected end of bit string", pos_);
    const bool b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return b;
}

std::uint64_t BitReader::get_bits(int count) {
    if (static_cast<std::size_t>(count) > remaining())
        throw BitstreamError("unexpected end of bit string", pos_);
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
    return v;
}

std::uint64_t BitReader::get_unary(std::uint64_t limit) {
    const std::size_t start = pos_;
    std::uint64_t q = 0;
    while (get_bit()) {
        if (++q > limit) throw BitstreamError("unary run exceeds code range", start);
    }
    return q;
}

std::uint32_t BitReader::get_varint() {
    const std::size_t start = pos_;
    std::uint32_t value = 0;
    for (int shift = 0; shift < 35; shift += 7) {
        const auto group = static_cast<std::uint32_t>(get_bits(8));
        value |= (group & 0x7f) << shift;
        if (!(group & 0x80)) return value;
    }
    throw BitstreamError("varint longer than 32 bits", start);
}

float BitReader::get_f32() {
    return std::bit_cast<float>(static_cast<std::uint32_t>(get_bits(32)));
}

void BitReader::align_to_byte() {
    while (pos_ & 7) get_bit();
}

} // namespace cswv
