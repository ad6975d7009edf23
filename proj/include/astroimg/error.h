/**
 * @file error.h
 * @brief Exception hierarchy used across the library
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace astroimg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes are incompatible (kernel larger than image, 1-pixel-wide input, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A scalar parameter is outside its valid range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A documented precondition on the inputs does not hold.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A linear system or frequency response cannot be inverted.
class SingularError : public Error {
public:
    using Error::Error;
};

/// Input is well-formed but carries no usable signal (flat histogram, empty foreground).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Malformed raster file. offset() is the byte position where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace astroimg
