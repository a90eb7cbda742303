#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwpkit {

/// Half-open byte range [begin, end) into a text buffer.
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool overlaps(const ByteSpan& other) const {
    return begin < other.end && other.begin < end;
  }
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed numeric or config text; `offset` is the byte where parsing failed.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct DivisionByZero : Error {
  DivisionByZero() : Error("division by zero") {}
};

struct NonPositiveError : Error {
  NonPositiveError() : Error("operand must be positive") {}
};

struct KindMismatchError : Error {
  using Error::Error;
};

struct KbFormatError : Error {
  std::size_t line;
  KbFormatError(const std::string& msg, std::size_t ln)
      : Error("kb line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

struct KbValidationError : Error {
  using Error::Error;
};

struct SegmentVerificationError : Error {
  std::vector<ByteSpan> failing_spans;
  SegmentVerificationError(const std::string& msg, std::vector<ByteSpan> spans)
      : Error(msg), failing_spans(std::move(spans)) {}
};

struct MappingIncomplete : Error {
  using Error::Error;
};

struct MappingAmbiguous : Error {
  using Error::Error;
};

struct RegenerationFailure : Error {
  using Error::Error;
};

struct SourceExhausted : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace mwpkit
