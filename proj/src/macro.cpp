#include "certus/macro.hpp"

#include <algorithm>
#include <cctype>

#include "certus/diagnostics.hpp"
#include "certus/parser.hpp"
#include "certus/printer.hpp"
#include "certus/provider.hpp"

namespace certus {
namespace {

constexpr std::string_view kBuiltin = "builtin";

int floor_div(int a, int b) {
  int q = a / b;
  if (a % b != 0 && (a < 0) != (b < 0)) --q;
  return q;
}

std::optional<std::string> assigned_confidence(const Node& node, const Ladder& ladder) {
  if (!node.annotation) return std::nullopt;
  try {
    auto source = parse_node_source(*node.annotation, node.id);
    if (source.annotation) {
      if (const auto* a = std::get_if<Assignment>(&*source.annotation)) return describe(resolve(a->value, ladder), ladder);
    }
  } catch (const Error&) {
    // Unparseable siblings are reported by pre-flight, not here.
  }
  return std::nullopt;
}

class Expander {
 public:
  Expander(ProviderPool* providers, const Ladder& ladder, const ExpandOptions& options)
      : providers_(providers), ladder_(ladder), options_(options) {}

  CasesExpr expand(const MacroCall& call, const MacroRequest& request) {
    std::vector<std::string> inputs;
    for (const auto& c : request.children) inputs.push_back(c.id);
    const std::string site = request.node_kind == "operator" ? "operator '" + request.node_id + "'"
                                                             : "node '" + request.node_id + "'";
    if (call.name == "FUSE") {
      if (!request.args.empty()) {
        throw MacroError(std::string(codes::bad_expansion),
                         site + ": built-in #FUSE takes no arguments; it fuses all children");
      }
      try {
        return accept_expansion(expand_fuse(request.children, ladder_, options_.fuse_limit), request.node_id, inputs);
      } catch (const MacroError& e) {
        throw MacroError(e.code(), site + ": " + e.what());
      }
    }
    MacroProvider* provider = providers_ ? providers_->find(call.name) : nullptr;
    if (!provider) {
      throw MacroError(std::string(codes::unexpanded_macro),
                       site + ": unknown macro #" + call.name +
                           (providers_ && !providers_->empty() ? " (no registered provider defines it)"
                                                               : " (not built in and no macro provider registered)"));
    }
    ExpandedExpression expansion{provider->invoke(request), {call.name, provider->command()}};
    return accept_expansion(expansion, request.node_id, inputs);
  }

 private:
  ProviderPool* providers_;
  const Ladder& ladder_;
  const ExpandOptions& options_;
};

std::vector<std::string> ref_ids(const std::vector<Ref>& refs) {
  std::vector<std::string> out;
  for (const auto& r : refs) out.push_back(r.id);
  return out;
}

/// Expands a macro-bodied definition in place. Returns true if it changed.
bool expand_definition(OperatorDef& def, Expander& expander) {
  const auto* call = std::get_if<MacroCall>(&def.body);
  if (!call) return false;
  MacroRequest request{call->name, def.name, "operator", {}, ref_ids(call->args)};
  for (const auto& p : def.params) {
    std::string kind(to_string(p.type));
    std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
    request.children.push_back({p.name, kind, std::nullopt});
  }
  def.body = expander.expand(*call, request);
  return true;
}

}  // namespace

std::vector<std::string> fuse_value_order(const Ladder& ladder) {
  // Repeatedly take the lowest-scored entry not contained in any remaining entry.
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < ladder.entries().size(); ++i) remaining.push_back(i);
  std::vector<std::string> order;
  while (!remaining.empty()) {
    auto pick = std::find_if(remaining.begin(), remaining.end(), [&](std::size_t i) {
      return std::none_of(remaining.begin(), remaining.end(), [&](std::size_t j) {
        return j != i && subset_of(ladder.entry(j).set, ladder.entry(i).set);
      });
    });
    if (pick == remaining.end()) pick = remaining.begin();
    order.push_back(ladder.entry(*pick).name);
    remaining.erase(pick);
  }
  return order;
}

ExpandedExpression expand_fuse(std::span<const MacroChild> children, const Ladder& ladder, std::size_t max_children) {
  const std::size_t n = children.size();
  if (n == 0) throw MacroError(std::string(codes::bad_expansion), "#FUSE needs at least one child");
  if (n > max_children) {
    throw MacroError(std::string(codes::bad_expansion),
                     "#FUSE over " + std::to_string(n) + " children exceeds the limit of " +
                         std::to_string(max_children) + " (" + std::to_string(n) +
                         " children give 7^n cases); write an explicit cases expression or raise the limit");
  }
  const auto order = fuse_value_order(ladder);
  std::vector<int> sign;
  for (const auto& c : children) sign.push_back(c.kind == "defeater" ? -1 : 1);

  CasesExpr expr;
  std::vector<std::size_t> digit(n, 0);
  for (;;) {
    Case arm;
    arm.condition.kind = n == 1 ? Condition::Kind::atom : Condition::Kind::conjunction;
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& name = order[digit[i]];
      total += sign[i] * ladder.score(name);
      Condition atom;
      atom.atom = {Ref{children[i].id, {}}, CompareOp::is, SetExpr{SetExpr::Kind::named, name, {}}};
      if (n == 1) {
        arm.condition = atom;
      } else {
        arm.condition.operands.push_back(std::move(atom));
      }
    }
    const int mean = floor_div(total, static_cast<int>(n));
    arm.outcome.set = SetExpr{SetExpr::Kind::named, std::string(ladder.unscore(mean)), {}};
    expr.cases.push_back(std::move(arm));

    std::size_t k = n;
    while (k > 0 && ++digit[k - 1] == order.size()) digit[--k] = 0;
    if (k == 0) break;
  }
  return {print(expr), {"FUSE", std::string(kBuiltin)}};
}

CasesExpr accept_expansion(const ExpandedExpression& expansion, std::string_view site,
                           std::span<const std::string> inputs) {
  const std::string who = "#" + expansion.origin.macro + " (" + expansion.origin.provider + ")";
  Annotation parsed;
  try {
    parsed = parse_annotation(expansion.text, site);
  } catch (const ParseError& e) {
    throw MacroError(std::string(codes::bad_expansion), "expansion of " + who + " does not parse: " + e.what());
  }
  auto* cases = std::get_if<CasesExpr>(&parsed);
  if (!cases) {
    throw MacroError(std::string(codes::bad_expansion), "expansion of " + who + " is not a cases expression");
  }
  for (const auto& ref : referenced_ids(*cases)) {
    if (std::find(inputs.begin(), inputs.end(), ref.id) == inputs.end()) {
      throw MacroError(std::string(codes::bad_expansion),
                       "expansion of " + who + " references '" + ref.id + "', which is not an input here");
    }
  }
  cases->origin = expansion.origin;
  return std::move(*cases);
}

ArgumentGraph expand_all(const ArgumentGraph& graph, ProviderPool* providers, const Ladder& ladder,
                         const ExpandOptions& options) {
  ArgumentGraph out = graph;
  Expander expander(providers, ladder, options);

  if (graph.definitions()) {
    try {
      auto block = parse_definition_block(*graph.definitions());
      bool changed = false;
      for (auto& def : block.definitions) changed = expand_definition(def, expander) || changed;
      if (changed) out.set_definitions(print(block));
    } catch (const ParseError&) {
      // Left in place for pre-flight to report.
    }
  }

  for (const auto& node : graph.nodes()) {
    if (!node.annotation) continue;
    NodeSource source;
    try {
      source = parse_node_source(*node.annotation, node.id);
    } catch (const ParseError&) {
      continue;
    }
    bool changed = false;
    for (auto& def : source.definitions) changed = expand_definition(def, expander) || changed;
    if (source.annotation) {
      if (const auto* call = std::get_if<MacroCall>(&*source.annotation)) {
        MacroRequest request{call->name, node.id, std::string(to_string(node.kind)), {}, ref_ids(call->args)};
        for (const auto& child : graph.children(node.id)) {
          request.children.push_back(
              {child.id, std::string(to_string(child.kind)), assigned_confidence(child, ladder)});
        }
        if (request.children.empty()) {
          throw MacroError(std::string(codes::bad_expansion),
                           "node '" + node.id + "': macro #" + call->name + " needs at least one child");
        }
        source.annotation = expander.expand(*call, request);
        changed = true;
      }
    }
    if (changed) out.set_annotation(node.id, print(source));
  }
  return out;
}

}  // namespace certus
