#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cswv {

/// Base class for every error raised by the codec.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or truncated raw video input.
class InputError : public Error {
public:
    InputError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// Frame or band dimensions incompatible with a three-level dyadic transform.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Arrays whose shapes do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Band map or pyramid layout inconsistent with the expected geometry.
class StructureError : public Error {
public:
    using Error::Error;
};

class CodebookError : public Error {
public:
    using Error::Error;
};

/// A value outside the representable range of a coder.
class RangeError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

/// Bad magic, unsupported version or inconsistent header fields.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Truncated or malformed coded data. Carries the bit position where decoding failed.
class BitstreamError : public Error {
public:
    BitstreamError(const std::string& what, std::size_t bit_offset)
        : Error(what + " (bit offset " + std::to_string(bit_offset) + ")"),
          bit_offset_(bit_offset) {}

    std::size_t bit_offset() const noexcept { return bit_offset_; }

private:
    std::size_t bit_offset_;
};

/// A stream whose layer set cannot be decoded (no base layer, or a gap between layers).
class UnusableStreamError : public Error {
public:
    using Error::Error;
};

} // namespace cswv
