#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace certus {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the confidence domain [0,1].
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Breakpoints that do not describe a convex, normalized fuzzy set.
class InvalidSetError : public Error {
 public:
  using Error::Error;
};

/// Name not present in a table (ladder entry, node id, operator).
class LookupError : public Error {
 public:
  using Error::Error;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::string to_string(SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

/// Lexical or syntactic error in Certus source.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : Error(to_string(pos) + ": " + message), pos_(pos), detail_(message) {}

  SourcePos pos() const { return pos_; }
  const std::string& detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

/// Malformed argument document.
class DocumentError : public Error {
 public:
  using Error::Error;
};

/// Name resolution failure; code is one of the stable finding codes.
class BindError : public Error {
 public:
  BindError(std::string code, const std::string& message) : Error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Macro expansion failure (unknown macro, provider failure, bad expansion).
class MacroError : public Error {
 public:
  MacroError(std::string code, const std::string& message) : Error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Runtime evaluation failure. Under a passing preflight this indicates a checker bug.
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace certus
