#include "certus/binder.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "certus/parser.hpp"

namespace certus {
namespace {

void require_child(const Ref& ref, const ArgumentGraph& graph, std::string_view node_id) {
  auto kids = graph.child_ids(node_id);
  if (std::find(kids.begin(), kids.end(), ref.id) != kids.end()) return;
  const std::string where = to_string(ref.span.pos) + ": ";
  if (graph.contains(ref.id)) {
    throw BindError(std::string(codes::scope), where + "'" + ref.id + "' is not a direct child of '" +
                                                   std::string(node_id) + "'");
  }
  throw BindError(std::string(codes::scope), where + "unresolved reference '" + ref.id + "'");
}

void check_call(const DefinedOperator& callee, std::string_view name, const std::vector<ParamType>& arg_types,
                const std::vector<Ref>& args) {
  const auto& params = callee.def.params;
  if (params.size() != args.size()) {
    throw BindError(std::string(codes::arity), "operator '" + std::string(name) + "' takes " +
                                                   std::to_string(params.size()) + " argument(s), " +
                                                   std::to_string(args.size()) + " given");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!accepts(params[i].type, arg_types[i])) {
      throw BindError(std::string(codes::param_type),
                      "argument '" + args[i].id + "' of type " + std::string(to_string(arg_types[i])) +
                          " passed to parameter '" + params[i].name + ": " +
                          std::string(to_string(params[i].type)) + "' of operator '" + std::string(name) + "'");
    }
  }
}

std::string origin_label(const DefinedOperator& op) {
  return op.site.empty() ? "global definition" : "definition at '" + op.site + "'";
}

}  // namespace

ParamType param_class(NodeKind kind) {
  return is_premise(kind) ? ParamType::premise : ParamType::defeater;
}

bool accepts(ParamType param, ParamType argument) {
  return param == ParamType::any || param == argument;
}

void OperatorScope::add(const DefinedOperator& op) {
  auto& table = by_site_[op.site];
  if (!table.emplace(op.def.name, &op).second) {
    throw BindError(std::string(codes::unknown_operator),
                    "operator '" + op.def.name + "' is defined twice in the same scope");
  }
}

const DefinedOperator* OperatorScope::lookup(std::string_view name, std::string_view site) const {
  auto find_at = [&](std::string_view s) -> const DefinedOperator* {
    auto t = by_site_.find(s);
    if (t == by_site_.end()) return nullptr;
    auto op = t->second.find(name);
    return op == t->second.end() ? nullptr : op->second;
  };

  if (!site.empty() && graph_->contains(site)) {
    // Breadth-first over parents so nearer ancestors shadow farther ones.
    std::set<std::string, std::less<>> seen{std::string(site)};
    std::deque<std::string> frontier{std::string(site)};
    while (!frontier.empty()) {
      std::string current = std::move(frontier.front());
      frontier.pop_front();
      if (const auto* op = find_at(current)) return op;
      for (const auto& p : graph_->parent_ids(current)) {
        if (seen.insert(p).second) frontier.push_back(p);
      }
    }
  }
  return find_at("");
}

BoundAnnotation bind(const Annotation& annotation, const ArgumentGraph& graph, std::string_view node_id,
                     const OperatorScope& scope) {
  BoundAnnotation bound{annotation, nullptr};
  if (const auto* macro = std::get_if<MacroCall>(&annotation)) {
    throw BindError(std::string(codes::unexpanded_macro),
                    "macro #" + macro->name + " must be expanded before binding");
  }
  for (const auto& ref : referenced_ids(annotation)) require_child(ref, graph, node_id);

  if (const auto* call = std::get_if<OperatorCall>(&annotation)) {
    const auto* op = scope.lookup(call->name, node_id);
    if (!op) {
      throw BindError(std::string(codes::unknown_operator),
                      to_string(call->span.pos) + ": unknown operator '" + call->name +
                          "' (not defined at this node, an ancestor, or globally)");
    }
    std::vector<ParamType> types;
    for (const auto& a : call->args) types.push_back(param_class(graph.node(a.id).kind));
    check_call(*op, call->name, types, call->args);
    bound.callee = op;
  }
  return bound;
}

void bind_operator(DefinedOperator& op, const OperatorScope& scope) {
  if (const auto* macro = std::get_if<MacroCall>(&op.def.body)) {
    throw BindError(std::string(codes::unexpanded_macro), "body of operator '" + op.def.name +
                                                              "' calls macro #" + macro->name +
                                                              ", which must be expanded before binding");
  }
  const auto* call = std::get_if<OperatorCall>(&op.def.body);
  if (!call) return;
  const auto* callee = scope.lookup(call->name, op.site);
  if (!callee) {
    throw BindError(std::string(codes::unknown_operator), "operator '" + op.def.name + "' (" +
                                                              origin_label(op) + ") calls unknown operator '" +
                                                              call->name + "'");
  }
  std::vector<ParamType> types;
  for (const auto& a : call->args) {
    auto p = std::find_if(op.def.params.begin(), op.def.params.end(),
                          [&](const Param& q) { return q.name == a.id; });
    types.push_back(p->type);
  }
  check_call(*callee, call->name, types, call->args);
  op.callee = callee;
}

const BoundNode& Program::node(std::string_view id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw LookupError("unknown node '" + std::string(id) + "'");
  return it->second;
}

Compilation compile(const ArgumentGraph& graph, const Ladder& ladder) {
  Compilation out;
  Program& program = out.program;
  program.graph = std::make_shared<const ArgumentGraph>(graph);
  program.ladder = ladder;
  const ArgumentGraph& g = *program.graph;
  OperatorScope scope(g);

  auto report = [&](std::string_view code, std::string node, std::string message) {
    out.findings.push_back({Severity::error, std::string(code), std::move(node), std::move(message), {}});
  };
  auto register_defs = [&](const std::vector<OperatorDef>& defs, const std::string& site,
                           const std::vector<std::string>& allowed) {
    for (const auto& def : defs) {
      auto op = std::make_shared<DefinedOperator>(DefinedOperator{def, site, allowed, nullptr});
      scope.add(*op);
      program.operators.push_back(std::move(op));
    }
  };

  if (g.definitions()) {
    try {
      auto block = parse_definition_block(*g.definitions());
      program.global_allowed_rules = block.allowed_rules;
      register_defs(block.definitions, "", block.allowed_rules);
    } catch (const ParseError& e) {
      report(codes::syntax, "", std::string("global definitions: ") + e.what());
    }
  }

  for (const auto& node : g.nodes()) {
    BoundNode bn;
    bn.id = node.id;
    if (node.annotation) {
      try {
        bn.source = parse_node_source(*node.annotation, node.id);
        register_defs(bn.source.definitions, node.id, bn.source.allowed_rules);
      } catch (const ParseError& e) {
        bn.parsed = false;
        bn.bound = false;
        report(codes::syntax, node.id, e.what());
      }
    }
    program.nodes.emplace(node.id, std::move(bn));
  }

  for (auto& op : program.operators) {
    try {
      bind_operator(*op, scope);
    } catch (const BindError& e) {
      report(e.code(), op->site, e.what());
    }
  }

  // Operator call chains must terminate.
  for (const auto& op : program.operators) {
    std::set<const DefinedOperator*> visited{op.get()};
    for (const auto* next = op->callee; next; next = next->callee) {
      if (next == op.get()) {
        report(codes::recursion, op->site, "operator '" + op->def.name + "' calls itself through its body");
        break;
      }
      if (!visited.insert(next).second) break;
    }
  }

  for (auto& [id, bn] : program.nodes) {
    if (!bn.parsed || !bn.source.annotation) continue;
    try {
      bn.callee = certus::bind(*bn.source.annotation, g, id, scope).callee;
    } catch (const BindError& e) {
      bn.bound = false;
      report(e.code(), id, e.what());
    }
  }
  return out;
}

}  // namespace certus
