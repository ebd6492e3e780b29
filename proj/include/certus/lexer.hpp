#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "certus/error.hpp"

namespace certus {

enum class TokenKind {
  identifier,
  number,
  // keywords
  kw_is,
  kw_contains,
  kw_overlaps,
  kw_gt,
  kw_lt,
  kw_ge,
  kw_le,
  kw_and,
  kw_or,
  kw_cases,
  kw_otherwise,
  kw_with,
  kw_as,
  kw_min,
  kw_max,
  // symbols
  arrow,
  lbrace,
  rbrace,
  lparen,
  rparen,
  comma,
  semicolon,
  hash,
  colon,
  greater_equal,
  less_equal,
  greater,
  less,
  end,
};

std::string_view describe(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  SourcePos pos;
  /// `// certus: ...` comments seen since the previous token, prefix stripped.
  std::vector<std::string> pragmas;
};

/// Splits Certus source into tokens; the last token is always `end`.
/// Ordinary `//` comments are dropped, pragma comments ride on the next token.
std::vector<Token> tokenize(std::string_view source);

}  // namespace certus
