#include "certus/ladder_file.hpp"

#include <yaml-cpp/yaml.h>

#include "certus/ast.hpp"
#include "certus/parser.hpp"

namespace certus {
namespace {

FuzzySet read_set(const std::string& name, const YAML::Node& value) {
  const std::string at = "ladder entry '" + name + "' (line " + std::to_string(value.Mark().line + 1) + ")";
  if (value.IsScalar()) {
    SetExpr expr;
    try {
      expr = parse_set_expr(value.Scalar());
    } catch (const ParseError& e) {
      throw DocumentError(at + ": " + e.what());
    }
    if (expr.kind == SetExpr::Kind::named) throw DocumentError(at + ": must be a set literal, not a name");
    try {
      return resolve(expr, Ladder::standard());
    } catch (const Error& e) {
      throw DocumentError(at + ": " + e.what());
    }
  }
  if (value.IsSequence()) {
    std::vector<Breakpoint> points;
    for (const auto& p : value) {
      if (!p.IsSequence() || p.size() != 2) throw DocumentError(at + ": breakpoints must be [x, mu] pairs");
      try {
        points.push_back({p[0].as<double>(), p[1].as<double>()});
      } catch (const YAML::Exception&) {
        throw DocumentError(at + ": breakpoint coordinates must be numbers");
      }
    }
    try {
      return FuzzySet::from_breakpoints(points);
    } catch (const Error& e) {
      throw DocumentError(at + ": " + e.what());
    }
  }
  throw DocumentError(at + ": expected a set literal or a list of [x, mu] pairs");
}

}  // namespace

Ladder load_ladder(std::string_view source) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(source));
  } catch (const YAML::Exception& e) {
    throw DocumentError("malformed ladder file at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!doc.IsMap()) throw DocumentError("ladder file must map each canonical name to a set");
  for (const auto& kv : doc) {
    if (!is_canonical_name(kv.first.Scalar())) {
      throw DocumentError("ladder file: unknown set name '" + kv.first.Scalar() + "'");
    }
  }
  std::array<FuzzySet, 7> sets{FuzzySet::point(0), FuzzySet::point(0), FuzzySet::point(0), FuzzySet::point(0),
                               FuzzySet::point(0), FuzzySet::point(0), FuzzySet::point(0)};
  for (std::size_t i = 0; i < kCanonicalNames.size(); ++i) {
    const std::string name(kCanonicalNames[i]);
    if (!doc[name]) throw DocumentError("ladder file: missing entry for '" + name + "'");
    sets[i] = read_set(name, doc[name]);
  }
  try {
    return Ladder::from_sets(sets);
  } catch (const Error& e) {
    throw DocumentError(std::string("ladder file: ") + e.what());
  }
}

}  // namespace certus
