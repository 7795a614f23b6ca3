#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxmin_tsp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public InvalidArgument {
public:
    IndexOutOfRange(std::size_t index, std::size_t size)
        : InvalidArgument("index " + std::to_string(index) + " out of range for size " + std::to_string(size)),
          index_(index), size_(size) {}

    std::size_t index() const noexcept { return index_; }
    std::size_t size() const noexcept { return size_; }

private:
    std::size_t index_;
    std::size_t size_;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Rejected instance file or instance data.
class InstanceFormatError : public Error {
public:
    enum class Kind { Malformed, Asymmetric, NegativeDistance, NonFinite, NonZeroDiagonal, Unsupported };

    InstanceFormatError(Kind kind, const std::string& what) : Error(prefix(kind) + what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    static std::string prefix(Kind kind) {
        switch (kind) {
        case Kind::Malformed: return "malformed instance: ";
        case Kind::Asymmetric: return "asymmetric distance matrix: ";
        case Kind::NegativeDistance: return "negative distance: ";
        case Kind::NonFinite: return "non-finite value: ";
        case Kind::NonZeroDiagonal: return "non-zero diagonal: ";
        case Kind::Unsupported: return "unsupported instance feature: ";
        }
        return "instance error: ";
    }

    Kind kind_;
};

/// Instance size outside what an exact oracle supports.
class OracleRangeError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

}  // namespace maxmin_tsp
