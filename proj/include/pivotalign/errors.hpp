#ifndef PIVOTALIGN_ERRORS_HPP
#define PIVOTALIGN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pivotalign {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input (XML/SRT/VTT/config). Carries a human-readable location.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}
  explicit ParseError(const std::string& msg) : Error(msg), line_(0), column_(0) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that violates a domain invariant (duplicate ids,
// negative timestamps, empty segments, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Filesystem failures, always with path context.
class IoError : public Error {
 public:
  IoError(const std::string& msg, const std::string& path)
      : Error(msg + ": " + path), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace pivotalign

#endif  // PIVOTALIGN_ERRORS_HPP
