#include "certus/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "certus/argument.hpp"
#include "certus/lexer.hpp"

namespace certus {

FuzzySet resolve(const SetExpr& expr, const Ladder& ladder) {
  switch (expr.kind) {
    case SetExpr::Kind::named:
      return ladder.set(expr.name);
    case SetExpr::Kind::point:
      return FuzzySet::point(expr.args.at(0));
    case SetExpr::Kind::triangle:
      return FuzzySet::triangle(expr.args.at(0), expr.args.at(1), expr.args.at(2));
    case SetExpr::Kind::trapezoid:
      return FuzzySet::trapezoid(expr.args.at(0), expr.args.at(1), expr.args.at(2), expr.args.at(3));
  }
  throw Error("unreachable set expression kind");
}

std::string_view to_string(ParamType type) {
  switch (type) {
    case ParamType::premise:
      return "Premise";
    case ParamType::defeater:
      return "Defeater";
    case ParamType::any:
      return "Any";
  }
  return "Any";
}

namespace {

bool is_macro_name(std::string_view name) {
  if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isupper(u) || std::isdigit(u) || u == '_';
  });
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

class Parser {
 public:
  explicit Parser(std::string_view source) : tokens_(tokenize(source)) {}

  NodeSource node_source(std::string_view node_id) {
    NodeSource out;
    out.definitions = definitions();
    if (!at(TokenKind::end)) out.annotation = annotation(node_id);
    finish();
    out.allowed_rules = allowed_;
    return out;
  }

  Annotation single_annotation(std::string_view node_id) {
    auto a = annotation(node_id);
    finish();
    return a;
  }

  DefinitionBlock definition_block() {
    DefinitionBlock block;
    block.definitions = definitions();
    finish();
    block.allowed_rules = allowed_;
    return block;
  }

  SetExpr lone_set() {
    auto s = set_expr();
    if (!s) fail(peek(), "expected a set name or literal");
    finish();
    return *s;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at(TokenKind kind, std::size_t ahead = 0) const { return peek(ahead).kind == kind; }

  [[noreturn]] void fail(const Token& token, const std::string& message) const {
    throw ParseError(token.pos, message);
  }

  const Token& advance() {
    const Token& t = tokens_[pos_];
    absorb_pragmas(t);
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  const Token& expect(TokenKind kind, std::string_view context) {
    if (!at(kind)) {
      const Token& t = peek();
      std::string found = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
      fail(t, "expected " + std::string(describe(kind)) + " " + std::string(context) + ", found " + found);
    }
    return advance();
  }

  void finish() {
    if (!at(TokenKind::end)) fail(peek(), "unexpected '" + peek().text + "' after end of construct");
    absorb_pragmas(peek());
  }

  void absorb_pragmas(const Token& t) {
    for (const auto& pragma : t.pragmas) {
      auto words = split_words(pragma);
      if (words.empty()) fail(t, "empty certus pragma");
      if (words[0] == "allow") {
        if (words.size() < 2) fail(t, "'allow' pragma needs at least one rule code");
        for (std::size_t i = 1; i < words.size(); ++i) {
          if (std::find(allowed_.begin(), allowed_.end(), words[i]) == allowed_.end()) {
            allowed_.push_back(words[i]);
          }
        }
      } else if (words[0] == "expanded") {
        if (t.kind != TokenKind::kw_cases) fail(t, "'expanded' pragma must directly precede 'cases'");
        if (words.size() < 2 || words[1].size() < 2 || words[1][0] != '#') {
          fail(t, "'expanded' pragma must name the macro, as in 'expanded #FUSE by builtin'");
        }
        MacroOrigin origin{words[1].substr(1), ""};
        const auto by = pragma.find(" by ");
        if (by != std::string::npos) origin.provider = pragma.substr(by + 4);
        pending_origin_ = origin;
      } else {
        fail(t, "unknown certus pragma '" + words[0] + "'");
      }
    }
  }

  std::vector<OperatorDef> definitions() {
    std::vector<OperatorDef> defs;
    std::set<std::string> names;
    while (at(TokenKind::kw_with)) {
      const Token& start = peek();
      auto def = definition();
      if (!names.insert(def.name).second) {
        fail(start, "operator '" + def.name + "' is defined twice in the same block");
      }
      defs.push_back(std::move(def));
      if (at(TokenKind::semicolon)) advance();
    }
    return defs;
  }

  OperatorDef definition() {
    OperatorDef def;
    def.span.pos = expect(TokenKind::kw_with, "to start a definition").pos;
    const Token& name = expect(TokenKind::identifier, "naming the operator");
    if (is_reserved_word(name.text)) fail(name, "operator name '" + name.text + "' is reserved");
    def.name = name.text;
    expect(TokenKind::lparen, "after the operator name");
    std::set<std::string> seen;
    do {
      if (!def.params.empty()) advance();  // the comma
      const Token& pname = expect(TokenKind::identifier, "naming a parameter");
      if (is_reserved_word(pname.text)) fail(pname, "parameter name '" + pname.text + "' is reserved");
      if (!seen.insert(pname.text).second) fail(pname, "duplicate parameter '" + pname.text + "'");
      expect(TokenKind::colon, "after the parameter name");
      const Token& ptype = expect(TokenKind::identifier, "giving the parameter type");
      ParamType type;
      if (ptype.text == "Premise") {
        type = ParamType::premise;
      } else if (ptype.text == "Defeater") {
        type = ParamType::defeater;
      } else if (ptype.text == "Any") {
        type = ParamType::any;
      } else {
        fail(ptype, "unknown parameter type '" + ptype.text + "' (expected Premise, Defeater or Any)");
      }
      def.params.push_back({pname.text, type});
    } while (at(TokenKind::comma));
    expect(TokenKind::rparen, "closing the parameter list");
    expect(TokenKind::kw_as, "before the operator body");

    if (at(TokenKind::kw_cases)) {
      def.body = cases();
    } else if (at(TokenKind::hash)) {
      def.body = macro_call();
    } else if (at(TokenKind::identifier) && at(TokenKind::lparen, 1)) {
      def.body = operator_call();
    } else {
      fail(peek(), "operator body must be a cases expression, an operator call or a macro call");
    }

    for (const auto& ref : referenced_ids(def.body)) {
      if (!seen.contains(ref.id)) {
        throw ParseError(ref.span.pos, "'" + ref.id + "' is not a parameter of operator '" + def.name + "'");
      }
    }
    return def;
  }

  Annotation annotation(std::string_view node_id) {
    if (at(TokenKind::kw_cases)) return cases();
    if (at(TokenKind::hash)) return macro_call();
    if (at(TokenKind::identifier) && at(TokenKind::lparen, 1)) return operator_call();
    if (at(TokenKind::identifier) && at(TokenKind::kw_is, 1)) {
      const Token& target = advance();
      advance();  // is
      if (target.text != node_id) {
        fail(target, "assignment target '" + target.text + "' is not the annotated node '" +
                         std::string(node_id) + "'");
      }
      if (auto set = set_expr()) return Assignment{target.text, *set};
      const Token& source = expect(TokenKind::identifier, "after 'is'");
      if (is_reserved_word(source.text)) fail(source, "'" + source.text + "' cannot name a node");
      return DirectProp{target.text, Ref{source.text, {source.pos}}};
    }
    if (at(TokenKind::kw_with)) fail(peek(), "definitions must come before the annotation");
    fail(peek(), "expected an assignment, 'cases', an operator call or a macro call");
  }

  std::optional<SetExpr> set_expr() {
    if (!at(TokenKind::identifier)) return std::nullopt;
    const Token& t = peek();
    if (is_canonical_name(t.text)) {
      advance();
      return SetExpr{SetExpr::Kind::named, t.text, {}};
    }
    std::size_t arity = 0;
    SetExpr::Kind kind{};
    if (t.text == "point") {
      kind = SetExpr::Kind::point;
      arity = 1;
    } else if (t.text == "triangle") {
      kind = SetExpr::Kind::triangle;
      arity = 3;
    } else if (t.text == "trapezoid") {
      kind = SetExpr::Kind::trapezoid;
      arity = 4;
    } else {
      return std::nullopt;
    }
    const Token& head = advance();
    expect(TokenKind::lparen, "after '" + head.text + "'");
    SetExpr out{kind, "", {}};
    for (std::size_t i = 0; i < arity; ++i) {
      if (i > 0) expect(TokenKind::comma, "between literal arguments");
      const Token& num = expect(TokenKind::number, "as a literal argument");
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), value);
      if (ec != std::errc() || ptr != num.text.data() + num.text.size()) fail(num, "malformed number");
      if (value < 0.0 || value > 1.0) fail(num, "literal argument " + num.text + " outside [0,1]");
      if (!out.args.empty() && value < out.args.back()) {
        fail(num, "literal arguments of '" + head.text + "' must be non-decreasing");
      }
      out.args.push_back(value);
    }
    expect(TokenKind::rparen, "closing '" + head.text + "'");
    try {
      resolve(out, Ladder::standard());
    } catch (const InvalidSetError& e) {
      fail(head, std::string("invalid set literal: ") + e.what());
    }
    return out;
  }

  Ref ref(std::string_view context) {
    const Token& t = expect(TokenKind::identifier, context);
    if (is_reserved_word(t.text)) fail(t, "'" + t.text + "' cannot be used as a node or parameter name");
    return Ref{t.text, {t.pos}};
  }

  std::vector<Ref> ref_list(std::string_view context) {
    std::vector<Ref> refs;
    expect(TokenKind::lparen, context);
    refs.push_back(ref("in argument list"));
    while (at(TokenKind::comma)) {
      advance();
      refs.push_back(ref("in argument list"));
    }
    expect(TokenKind::rparen, "closing the argument list");
    return refs;
  }

  OperatorCall operator_call() {
    const Token& name = expect(TokenKind::identifier, "naming an operator");
    if (is_reserved_word(name.text)) fail(name, "'" + name.text + "' is not an operator");
    OperatorCall call{name.text, ref_list("after the operator name"), {name.pos}};
    return call;
  }

  MacroCall macro_call() {
    const Token& hash = expect(TokenKind::hash, "starting a macro call");
    const Token& name = expect(TokenKind::identifier, "after '#'");
    if (!is_macro_name(name.text)) fail(name, "macro name '" + name.text + "' must be uppercase");
    MacroCall call{name.text, {}, false, {hash.pos}};
    if (at(TokenKind::lparen)) {
      call.args = ref_list("after the macro name");
      call.has_parens = true;
    }
    return call;
  }

  CasesExpr cases() {
    CasesExpr expr;
    pending_origin_.reset();
    expr.span.pos = expect(TokenKind::kw_cases, "").pos;
    expr.origin = pending_origin_;
    pending_origin_.reset();
    expect(TokenKind::lbrace, "after 'cases'");
    if (at(TokenKind::kw_otherwise)) fail(peek(), "a cases expression needs at least one case before 'otherwise'");
    expr.cases.push_back(case_arm());
    while (true) {
      if (at(TokenKind::rbrace)) break;
      expect(TokenKind::semicolon, "between cases");
      if (at(TokenKind::rbrace)) break;
      if (at(TokenKind::kw_otherwise)) {
        advance();
        expect(TokenKind::arrow, "after 'otherwise'");
        expr.otherwise = outcome();
        if (at(TokenKind::semicolon)) advance();
        break;
      }
      expr.cases.push_back(case_arm());
    }
    expect(TokenKind::rbrace, "closing the cases expression");
    return expr;
  }

  Case case_arm() {
    Case c;
    c.condition = disjunction();
    expect(TokenKind::arrow, "after the case condition");
    c.outcome = outcome();
    return c;
  }

  static Condition combine(Condition::Kind kind, std::vector<Condition> parts) {
    if (parts.size() == 1) return std::move(parts.front());
    Condition out;
    out.kind = kind;
    for (auto& p : parts) {
      if (p.kind == kind) {
        for (auto& q : p.operands) out.operands.push_back(std::move(q));
      } else {
        out.operands.push_back(std::move(p));
      }
    }
    return out;
  }

  Condition disjunction() {
    std::vector<Condition> parts{conjunction()};
    while (at(TokenKind::kw_or)) {
      advance();
      parts.push_back(conjunction());
    }
    return combine(Condition::Kind::disjunction, std::move(parts));
  }

  Condition conjunction() {
    std::vector<Condition> parts{atom()};
    while (at(TokenKind::kw_and)) {
      advance();
      parts.push_back(atom());
    }
    return combine(Condition::Kind::conjunction, std::move(parts));
  }

  Condition atom() {
    if (at(TokenKind::lparen)) {
      advance();
      auto inner = disjunction();
      expect(TokenKind::rparen, "closing the parenthesised condition");
      return inner;
    }
    if (at(TokenKind::identifier) && is_canonical_name(peek().text)) {
      fail(peek(), "the left side of a comparison must name a node, not the set '" + peek().text + "'");
    }
    Condition c;
    c.atom.left = ref("on the left of a comparison");
    const Token& op = peek();
    switch (op.kind) {
      case TokenKind::kw_is: c.atom.op = CompareOp::is; break;
      case TokenKind::kw_contains: c.atom.op = CompareOp::contains; break;
      case TokenKind::kw_overlaps: c.atom.op = CompareOp::overlaps; break;
      case TokenKind::kw_gt:
      case TokenKind::greater: c.atom.op = CompareOp::gt; break;
      case TokenKind::kw_lt:
      case TokenKind::less: c.atom.op = CompareOp::lt; break;
      case TokenKind::kw_ge:
      case TokenKind::greater_equal: c.atom.op = CompareOp::ge; break;
      case TokenKind::kw_le:
      case TokenKind::less_equal: c.atom.op = CompareOp::le; break;
      default:
        fail(op, "expected a comparison operator after '" + c.atom.left.id + "'");
    }
    advance();
    if (auto set = set_expr()) {
      c.atom.right = *set;
    } else {
      c.atom.right = ref("on the right of a comparison");
    }
    return c;
  }

  Outcome outcome() {
    Outcome out;
    if (at(TokenKind::kw_min) || at(TokenKind::kw_max)) {
      out.kind = at(TokenKind::kw_min) ? Outcome::Kind::min : Outcome::Kind::max;
      advance();
      out.refs = ref_list("after min/max");
      return out;
    }
    if (auto set = set_expr()) {
      out.kind = Outcome::Kind::set;
      out.set = *set;
      return out;
    }
    out.kind = Outcome::Kind::ref;
    out.refs.push_back(ref("as a case outcome"));
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> allowed_;
  std::optional<MacroOrigin> pending_origin_;
};

void collect(const Condition& c, std::vector<Ref>& out) {
  if (c.kind == Condition::Kind::atom) {
    out.push_back(c.atom.left);
    if (const auto* r = std::get_if<Ref>(&c.atom.right)) out.push_back(*r);
    return;
  }
  for (const auto& sub : c.operands) collect(sub, out);
}

void collect(const Outcome& o, std::vector<Ref>& out) {
  out.insert(out.end(), o.refs.begin(), o.refs.end());
}

}  // namespace

Annotation parse_annotation(std::string_view source, std::string_view node_id) {
  return Parser(source).single_annotation(node_id);
}

std::vector<OperatorDef> parse_definitions(std::string_view source) {
  return Parser(source).definition_block().definitions;
}

DefinitionBlock parse_definition_block(std::string_view source) {
  return Parser(source).definition_block();
}

NodeSource parse_node_source(std::string_view source, std::string_view node_id) {
  return Parser(source).node_source(node_id);
}

SetExpr parse_set_expr(std::string_view source) { return Parser(source).lone_set(); }

std::vector<Ref> referenced_ids(const CasesExpr& expr) {
  std::vector<Ref> out;
  for (const auto& c : expr.cases) {
    collect(c.condition, out);
    collect(c.outcome, out);
  }
  if (expr.otherwise) collect(*expr.otherwise, out);
  return out;
}

std::vector<Ref> referenced_ids(const Annotation& annotation) {
  return std::visit(
      [](const auto& a) -> std::vector<Ref> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, CasesExpr>) {
          return referenced_ids(a);
        } else if constexpr (std::is_same_v<T, DirectProp>) {
          return {a.source};
        } else if constexpr (std::is_same_v<T, OperatorCall> || std::is_same_v<T, MacroCall>) {
          return a.args;
        } else {
          return {};
        }
      },
      annotation);
}

std::vector<Ref> referenced_ids(const OperatorBody& body) {
  return std::visit(
      [](const auto& b) -> std::vector<Ref> {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, CasesExpr>) {
          return referenced_ids(b);
        } else {
          return b.args;
        }
      },
      body);
}

}  // namespace certus
