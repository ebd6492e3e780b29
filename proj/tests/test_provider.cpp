#include <chrono>
#include <functional>

#include "certus/argument.hpp"
#include "certus/binder.hpp"
#include "certus/error.hpp"
#include "certus/evaluator.hpp"
#include "certus/macro.hpp"
#include "certus/parser.hpp"
#include "certus/preflight.hpp"
#include "certus/provider.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace certus;
using namespace std::chrono_literals;

namespace {

std::string fake(const std::string& mode) { return std::string(CERTUS_FAKE_PROVIDER) + " " + mode; }

MacroRequest request_for(const std::string& macro) {
  return {macro, "C0", "claim", {{"E1", "evidence", "high"}, {"D1", "defeater", std::nullopt}}, {}};
}

std::string mac_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const MacroError& e) {
    return e.code();
  }
  return "none";
}

const char* kDoc = R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1, E2], certus: "#PASS_FIRST"}
  - {id: E1, kind: evidence, text: e, certus: E1 is med}
  - {id: E2, kind: evidence, text: e, certus: E2 is high}
)doc";

}  // namespace

TEST_CASE("handshake lists the provider's macros") {
  MacroProvider p(fake("ok"), 5000ms);
  CHECK_FALSE(p.started());
  p.start();
  CHECK(p.started());
  CHECK(p.macros().size() == 6);
  CHECK(p.provides("PASS_FIRST"));
  CHECK_FALSE(p.provides("WEIGHTED_FUSE"));
}

TEST_CASE("request carries node, children and confidence") {
  MacroProvider p(fake("ok"), 5000ms);
  try {
    p.invoke(request_for("SHAPE"));
    FAIL("SHAPE always answers with an error");
  } catch (const MacroError& e) {
    CHECK(e.code() == "MAC002");
    std::string what = e.what();
    auto echoed = nlohmann::json::parse(what.substr(what.find('{')));
    CHECK(echoed["id"] == 1);
    CHECK(echoed["macro"] == "SHAPE");
    CHECK(echoed["node"] == nlohmann::json{{"id", "C0"}, {"kind", "claim"}});
    REQUIRE(echoed["children"].size() == 2);
    CHECK(echoed["children"][0] == nlohmann::json{{"id", "E1"}, {"kind", "evidence"}, {"confidence", "high"}});
    CHECK(echoed["children"][1]["confidence"].is_null());
    CHECK(echoed["args"] == nlohmann::json::array());
  }
  // A provider-reported error leaves the process usable; ids keep increasing.
  CHECK(p.invoke(request_for("PASS_FIRST")).find("E1 is zero") != std::string::npos);
}

TEST_CASE("provider errors are reported with the provider's message") {
  MacroProvider p(fake("ok"), 5000ms);
  try {
    p.invoke(request_for("FAIL"));
    FAIL("expected MacroError");
  } catch (const MacroError& e) {
    CHECK(e.code() == "MAC002");
    CHECK(std::string(e.what()).find("refusing FAIL") != std::string::npos);
  }
}

TEST_CASE("transport failures") {
  CHECK(mac_code([] { MacroProvider(fake("exit"), 5000ms).invoke(request_for("PASS_FIRST")); }) == "MAC002");
  CHECK(mac_code([] { MacroProvider(fake("garbage"), 5000ms).start(); }) == "MAC002");
  CHECK(mac_code([] { MacroProvider(fake("no-handshake"), 5000ms).start(); }) == "MAC002");
  CHECK(mac_code([] { MacroProvider(fake("wrong-id"), 5000ms).invoke(request_for("PASS_FIRST")); }) == "MAC002");
  CHECK(mac_code([] { MacroProvider("exec /nonexistent/provider", 5000ms).start(); }) == "MAC002");
}

TEST_CASE("timeouts kill the provider and leave the handle unusable") {
  MacroProvider p(fake("slow"), 200ms);
  const auto start = std::chrono::steady_clock::now();
  try {
    p.invoke(request_for("PASS_FIRST"));
    FAIL("expected a timeout");
  } catch (const MacroError& e) {
    CHECK(e.code() == "MAC002");
    CHECK(std::string(e.what()).find("timed out") != std::string::npos);
  }
  CHECK(std::chrono::steady_clock::now() - start < 3s);
  CHECK(mac_code([&] { p.invoke(request_for("PASS_FIRST")); }) == "MAC002");
}

TEST_CASE("expand_all through a provider") {
  ProviderPool pool({fake("ok")}, 5000ms);
  auto expanded = expand_all(load_document(kDoc), &pool, Ladder::standard());
  const auto& text = *expanded.node("C0").annotation;
  CHECK(text.find("expanded #PASS_FIRST by " + fake("ok")) != std::string::npos);

  auto result = preflight(expanded, Ladder::standard());
  REQUIRE(result.report.passed);
  auto a = assess(*result.program);
  CHECK(describe(a.results.at("C0"), a.ladder) == "med");
  REQUIRE(a.traces.at("C0").macro);
  CHECK(a.traces.at("C0").macro->macro == "PASS_FIRST");
  CHECK(a.traces.at("C0").mechanism == Mechanism::macro_expanded);
}

TEST_CASE("built-in FUSE shadows a provider of the same name") {
  ProviderPool pool({fake("ok")}, 5000ms);
  auto g = load_document(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1, E2], certus: "#FUSE"}
  - {id: E1, kind: evidence, text: e, certus: E1 is med}
  - {id: E2, kind: evidence, text: e, certus: E2 is very_low}
)doc");
  auto expanded = expand_all(g, &pool, Ladder::standard());
  CHECK(expanded.node("C0").annotation->find("by builtin") != std::string::npos);
}

TEST_CASE("pool resolves in registration order and rejects bad expansions") {
  ProviderPool pool({fake("error"), fake("ok")}, 5000ms);
  // Both announce PASS_FIRST; the first registered one answers (with an error).
  CHECK(pool.find("PASS_FIRST")->command() == fake("error"));
  CHECK(pool.find("NOPE") == nullptr);

  ProviderPool good({fake("ok")}, 5000ms);
  auto with = [&](const std::string& macro) {
    std::string doc = kDoc;
    doc.replace(doc.find("#PASS_FIRST"), 11, "#" + macro);
    return load_document(doc);
  };
  CHECK(mac_code([&] { expand_all(with("UNPARSEABLE"), &good, Ladder::standard()); }) == "MAC003");
  CHECK(mac_code([&] { expand_all(with("STRAY"), &good, Ladder::standard()); }) == "MAC003");
  CHECK(mac_code([&] { expand_all(with("FAIL"), &good, Ladder::standard()); }) == "MAC002");
  CHECK(mac_code([&] { expand_all(with("MISSING"), &good, Ladder::standard()); }) == "MAC001");
}

TEST_CASE("operator bodies send parameter types as child kinds") {
  ProviderPool pool({fake("ok")}, 5000ms);
  auto g = load_document(R"doc(
definitions: |
  with probe(a: Premise, d: Defeater, x: Any) as #SHAPE
nodes:
  - {id: C0, kind: claim, text: a, children: [E1], certus: "C0 is E1"}
  - {id: E1, kind: evidence, text: e, certus: E1 is med}
)doc");
  try {
    expand_all(g, &pool, Ladder::standard());
    FAIL("expected MacroError");
  } catch (const MacroError& e) {
    std::string what = e.what();
    auto echoed = nlohmann::json::parse(what.substr(what.find('{')));
    CHECK(echoed["node"] == nlohmann::json{{"id", "probe"}, {"kind", "operator"}});
    CHECK(echoed["children"][0]["kind"] == "premise");
    CHECK(echoed["children"][1]["kind"] == "defeater");
    CHECK(echoed["children"][2]["kind"] == "any");
  }
}
