#include "certus/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "certus/evaluator.hpp"
#include "certus/ladder_file.hpp"
#include "certus/macro.hpp"
#include "certus/preflight.hpp"
#include "certus/provider.hpp"
#include "certus/report.hpp"

namespace certus {
namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string command;
  std::string input;
  std::string node;
  std::string format = "text";
  std::string ladder;
  std::vector<std::string> providers;
  std::size_t max_enumeration = kDefaultEnumerationLimit;
  std::size_t fuse_limit = kDefaultFuseLimit;
  bool trace = false;
  std::string output;
};

/// Usage and document problems end the run with status 2.
struct UsageFailure {
  std::string message;
};

std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure{"cannot read " + std::string(what) + " '" + path + "'"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ReportFormat report_format(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "dot") return ReportFormat::dot;
  return ReportFormat::text;
}

class Session {
 public:
  Session(const RunConfig& config, std::ostream& out, std::ostream& err) : config_(config), out_(out), err_(err) {}

  int run() {
    if (!config_.ladder.empty()) {
      try {
        ladder_ = load_ladder(read_file(config_.ladder, "ladder file"));
      } catch (const DocumentError& e) {
        throw UsageFailure{e.what()};
      }
    }
    try {
      graph_ = load_document(read_file(config_.input, "input document"));
    } catch (const DocumentError& e) {
      throw UsageFailure{config_.input + ": " + e.what()};
    }
    if (config_.command == "check") return check();
    if (config_.command == "expand") return expand();
    return assess();
  }

 private:
  void emit(const std::string& text) {
    if (config_.output.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(config_.output, std::ios::binary);
    if (!file) throw UsageFailure{"cannot write output file '" + config_.output + "'"};
    file << text;
  }

  std::optional<ArgumentGraph> expanded() {
    std::vector<std::string> commands = config_.providers;
    if (commands.empty()) {
      if (const char* env = std::getenv("CERTUS_MACRO_PROVIDER"); env && *env) commands.emplace_back(env);
    }
    ProviderPool pool(commands);
    try {
      return expand_all(graph_, &pool, ladder_, {config_.fuse_limit});
    } catch (const MacroError& e) {
      err_ << "error " << e.code() << ": " << e.what() << "\n";
      return std::nullopt;
    }
  }

  int check() {
    auto graph = expanded();
    if (!graph) return kFindings;
    auto report = run_preflight(*graph, ladder_, options());
    emit(render_preflight(report, *graph, report_format(config_.format)));
    return report.passed ? kOk : kFindings;
  }

  int expand() {
    if (config_.format == "dot") throw UsageFailure{"expand writes a document; use --format text (YAML) or json"};
    auto graph = expanded();
    if (!graph) return kFindings;
    emit(save_document(*graph, config_.format == "json" ? DocumentFormat::json : DocumentFormat::yaml));
    return kOk;
  }

  int assess() {
    auto graph = expanded();
    if (!graph) return kFindings;
    auto result = preflight(*graph, ladder_, options());
    if (!result.report.passed) {
      err_ << render_preflight(result.report, *graph, ReportFormat::text);
      return kFindings;
    }
    for (const auto& f : result.report.findings) {
      err_ << to_string(f.severity) << " " << f.code << " [" << f.node << "]: " << f.message << "\n";
    }
    Assessment assessment;
    try {
      assessment = assess_program(*result.program);
    } catch (const EvalError& e) {
      err_ << "assessment failed: " << e.what() << "\n";
      return kFindings;
    }
    if (config_.command == "explain") {
      if (!graph->contains(config_.node)) throw UsageFailure{"unknown node '" + config_.node + "'"};
      try {
        emit(explain(assessment, config_.node));
      } catch (const LookupError& e) {
        err_ << e.what() << "\n";
        return kFindings;
      }
      return kOk;
    }
    emit(render_assessment(assessment, *graph, report_format(config_.format), config_.trace));
    return kOk;
  }

  static Assessment assess_program(const Program& program) { return certus::assess(program); }

  PreflightOptions options() const {
    PreflightOptions o;
    o.max_enumeration = config_.max_enumeration;
    return o;
  }

  const RunConfig& config_;
  std::ostream& out_;
  std::ostream& err_;
  Ladder ladder_ = Ladder::standard();
  ArgumentGraph graph_;
};

void add_common(CLI::App& sub, RunConfig& config) {
  sub.add_option("input", config.input, "Argument document (YAML or JSON)")->required();
  sub.add_option("--format", config.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "dot"}))
      ->default_str("text");
  sub.add_option("--ladder", config.ladder, "Ladder override file");
  sub.add_option("--macro-provider", config.providers, "Macro provider command (repeatable)");
  sub.add_option("--max-enumeration", config.max_enumeration, "Totality enumeration limit")
      ->check(CLI::PositiveNumber);
  sub.add_option("--fuse-limit", config.fuse_limit, "Largest child count #FUSE expands")->check(CLI::PositiveNumber);
  sub.add_flag("--trace", config.trace, "Include derivation traces in text output");
  sub.add_option("--output,-o", config.output, "Write the result to a file instead of standard output");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"certus: fuzzy-set confidence for assurance cases"};
  app.name("certus");
  app.require_subcommand(1);
  auto* check = app.add_subcommand("check", "Run pre-flight checks");
  auto* expand = app.add_subcommand("expand", "Write the document with every macro expanded");
  auto* assess = app.add_subcommand("assess", "Compute confidence for every node");
  auto* explain = app.add_subcommand("explain", "Show how a node's confidence was derived");
  for (auto* sub : {check, expand, assess}) add_common(*sub, config);
  add_common(*explain, config);
  explain->add_option("node", config.node, "Node id")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run 'certus --help' for usage\n";
    return kUsage;
  }
  for (auto* sub : {check, expand, assess, explain}) {
    if (sub->parsed()) config.command = sub->get_name();
  }

  try {
    return Session(config, out, err).run();
  } catch (const UsageFailure& e) {
    err << "error: " << e.message << "\n";
    return kUsage;
  }
}

}  // namespace certus
