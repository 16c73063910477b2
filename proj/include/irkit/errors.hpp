#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace irkit {

// Every failure raised by the core derives from Error and carries a category
// that the C API maps one-to-one onto irkit_status codes.
enum class ErrorKind {
  InvalidArgument,
  Io,
  Parse,        // malformed input bytes (XML, qrels, run, snapshot)
  Record,       // a well-formed record is missing a required field
  Validation,   // an invariant of a domain type is violated
  EmptyQuery,
  EmptyCorpus,
  Mismatch,     // two inputs that must cover the same keys do not
  Coverage,     // third-judge file does not match the conflict set
  Undefined,    // a statistic is undefined for the input (kappa with P(E)=1)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(ErrorKind::Parse, what + " (at byte " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Line-oriented format error (qrels, run files, lexicon files).
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace irkit
