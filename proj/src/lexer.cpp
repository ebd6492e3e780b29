#include "certus/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace certus {
namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"is", TokenKind::kw_is},
      {"contains", TokenKind::kw_contains},
      {"overlaps", TokenKind::kw_overlaps},
      {"gt", TokenKind::kw_gt},
      {"lt", TokenKind::kw_lt},
      {"ge", TokenKind::kw_ge},
      {"le", TokenKind::kw_le},
      {"and", TokenKind::kw_and},
      {"or", TokenKind::kw_or},
      {"cases", TokenKind::kw_cases},
      {"otherwise", TokenKind::kw_otherwise},
      {"with", TokenKind::kw_with},
      {"as", TokenKind::kw_as},
      {"min", TokenKind::kw_min},
      {"max", TokenKind::kw_max},
  };
  return table;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::number: return "number";
    case TokenKind::kw_is: return "'is'";
    case TokenKind::kw_contains: return "'contains'";
    case TokenKind::kw_overlaps: return "'overlaps'";
    case TokenKind::kw_gt: return "'gt'";
    case TokenKind::kw_lt: return "'lt'";
    case TokenKind::kw_ge: return "'ge'";
    case TokenKind::kw_le: return "'le'";
    case TokenKind::kw_and: return "'and'";
    case TokenKind::kw_or: return "'or'";
    case TokenKind::kw_cases: return "'cases'";
    case TokenKind::kw_otherwise: return "'otherwise'";
    case TokenKind::kw_with: return "'with'";
    case TokenKind::kw_as: return "'as'";
    case TokenKind::kw_min: return "'min'";
    case TokenKind::kw_max: return "'max'";
    case TokenKind::arrow: return "'->'";
    case TokenKind::lbrace: return "'{'";
    case TokenKind::rbrace: return "'}'";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::comma: return "','";
    case TokenKind::semicolon: return "';'";
    case TokenKind::hash: return "'#'";
    case TokenKind::colon: return "':'";
    case TokenKind::greater_equal: return "'>='";
    case TokenKind::less_equal: return "'<='";
    case TokenKind::greater: return "'>'";
    case TokenKind::less: return "'<'";
    case TokenKind::end: return "end of input";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::vector<std::string> pending_pragmas;
  std::size_t i = 0;
  SourcePos pos;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  auto emit = [&](TokenKind kind, std::size_t length, SourcePos at) {
    Token t{kind, std::string(source.substr(i, length)), at, std::move(pending_pragmas)};
    pending_pragmas.clear();
    tokens.push_back(std::move(t));
    advance(length);
  };

  while (i < source.size()) {
    const char c = source[i];
    const char next = i + 1 < source.size() ? source[i + 1] : '\0';
    const SourcePos at = pos;

    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && next == '/') {
      std::size_t end = source.find('\n', i);
      if (end == std::string_view::npos) end = source.size();
      const std::string body = trim(source.substr(i + 2, end - i - 2));
      constexpr std::string_view prefix = "certus:";
      if (body.starts_with(prefix)) pending_pragmas.push_back(trim(std::string_view(body).substr(prefix.size())));
      advance(end - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t n = 1;
      while (i + n < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[i + n])) || source[i + n] == '_')) {
        ++n;
      }
      auto kw = keywords().find(source.substr(i, n));
      emit(kw == keywords().end() ? TokenKind::identifier : kw->second, n, at);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(next)))) {
      std::size_t n = 0;
      while (i + n < source.size() && std::isdigit(static_cast<unsigned char>(source[i + n]))) ++n;
      if (i + n < source.size() && source[i + n] == '.') {
        ++n;
        while (i + n < source.size() && std::isdigit(static_cast<unsigned char>(source[i + n]))) ++n;
      }
      emit(TokenKind::number, n, at);
      continue;
    }
    switch (c) {
      case '-':
        if (next != '>') throw ParseError(at, "unexpected '-' (did you mean '->'?)");
        emit(TokenKind::arrow, 2, at);
        continue;
      case '>':
        emit(next == '=' ? TokenKind::greater_equal : TokenKind::greater, next == '=' ? 2 : 1, at);
        continue;
      case '<':
        emit(next == '=' ? TokenKind::less_equal : TokenKind::less, next == '=' ? 2 : 1, at);
        continue;
      case '{': emit(TokenKind::lbrace, 1, at); continue;
      case '}': emit(TokenKind::rbrace, 1, at); continue;
      case '(': emit(TokenKind::lparen, 1, at); continue;
      case ')': emit(TokenKind::rparen, 1, at); continue;
      case ',': emit(TokenKind::comma, 1, at); continue;
      case ';': emit(TokenKind::semicolon, 1, at); continue;
      case '#': emit(TokenKind::hash, 1, at); continue;
      case ':': emit(TokenKind::colon, 1, at); continue;
      default:
        break;
    }
    std::string shown(1, c);
    if (!std::isprint(static_cast<unsigned char>(c))) shown = "\\x" + std::to_string(static_cast<unsigned char>(c));
    throw ParseError(at, "illegal character '" + shown + "'");
  }
  tokens.push_back(Token{TokenKind::end, "", pos, std::move(pending_pragmas)});
  return tokens;
}

}  // namespace certus
