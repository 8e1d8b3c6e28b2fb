#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace evomsn {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SeriesTooShort : public Error { public: using Error::Error; };
class InvalidPeriod : public Error { public: using Error::Error; };
class ShapeError : public Error { public: using Error::Error; };
class SignalTooShort : public Error { public: using Error::Error; };
class NoData : public Error { public: using Error::Error; };
class LengthMismatch : public Error { public: using Error::Error; };
class OrderViolation : public Error { public: using Error::Error; };
class FileNotFound : public Error { public: using Error::Error; };
class EmptyFile : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class UnknownKey : public Error { public: using Error::Error; };
class RangeError : public Error { public: using Error::Error; };

/// CSV ingestion failure; row and column are 1-based file coordinates.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long row, long col)
        : Error(msg), row(row), col(col) {}
    long row;
    long col;
};

/// splitmix64: cheap stateless mixer for deriving independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace evomsn
