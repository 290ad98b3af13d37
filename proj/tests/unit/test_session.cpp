#include "json.hpp"

#include "doctest.h"
#include "support.hpp"

using namespace bri;
using bri::test::Fixture;
using nlohmann::json;

TEST_CASE("hello describes the protocol and the state") {
  Fixture fx("recdown.sys");
  json h = json::parse(fx.session.hello_json());
  CHECK(h["protocol"] == "bri-session/1");
  CHECK(h["system"] == "recdown.sys");
  REQUIRE(h["state"]["equations"].size() == 1);
  CHECK(h["state"]["equations"][0]["lhs"] == "recdown f n i a");
  CHECK(h["state"]["equations"][0]["left_bound"] == "none");
  CHECK(h["state"]["complete"] == true);
  CHECK(h["state"]["verdict"] == "open");
}

TEST_CASE("requests carry their id and return the new state") {
  Fixture fx("recdown.sys");
  json r = json::parse(fx.session.handle_json(R"({"id": 7, "command": "induct 1"})"));
  CHECK(r["id"] == 7);
  CHECK(r["ok"] == true);
  const json& e = r["state"]["equations"][0];
  CHECK(e["left_bound"] == "equal");
  CHECK(e["left_marker"] == true);
  CHECK(e["lbound"] == "recdown f n i a");
  CHECK(r["state"]["hypotheses"].size() == 1);
  CHECK(r["state"]["transcript"].size() == 1);
  // subterm positions for the client to click on
  bool found = false;
  for (const auto& s : e["left_subterms"])
    if (s["position"] == "⋆4" && s["term"] == "recdown") found = true;
  CHECK(found);
}

TEST_CASE("errors are reported with their code") {
  Fixture fx("recdown.sys");
  json r = json::parse(fx.session.handle_json(R"({"id": "a", "command": "case 1 [i < n] [i > n]"})"));
  CHECK(r["id"] == "a");
  CHECK(r["ok"] == false);
  CHECK(r["error"]["code"] == "coverset-not-verified");
  CHECK(r["state"]["equations"].size() == 1);

  json bad = json::parse(fx.session.handle_json("{not json"));
  CHECK(bad["ok"] == false);
  CHECK(bad["error"]["code"] == "malformed-request");
  CHECK(bad["id"].is_null());

  json missing = json::parse(fx.session.handle_json(R"({"id": 3})"));
  CHECK(missing["error"]["code"] == "malformed-request");
  CHECK(missing["id"] == 3);

  json unknown = json::parse(fx.session.handle_json(R"({"id": 4, "command": "frobnicate"})"));
  CHECK(unknown["error"]["code"] == "unknown-command");
}

TEST_CASE("applicability lists the possible simplifications") {
  Fixture fx("recdown.sys");
  fx.session.execute("case 1 [i < n] [i >= n]");
  json r = json::parse(fx.session.handle_json(R"({"id": 1, "command": ":equations", "applicability": true})"));
  REQUIRE(r.contains("applicable"));
  bool r1 = false, r2 = false;
  for (const auto& a : r["applicable"]) {
    if (a["equation"] == 2 && a["rule"] == "R1") r1 = true;
    if (a["equation"] == 2 && a["rule"] == "R2") r2 = true;
  }
  CHECK(r1);
  CHECK_FALSE(r2);
}

TEST_CASE("quit, undo and check through the protocol") {
  Fixture fx("recdown.sys");
  fx.session.run_script(test::read_file(test::data_path("recdown.script")));
  json c = json::parse(fx.session.handle_json(R"({"id": 1, "command": ":check"})"));
  CHECK(c["ok"] == true);
  CHECK(c["state"]["verdict"] == "proved");
  CHECK(c["state"]["ledger"][0]["status"] == "proved");
  json u = json::parse(fx.session.handle_json(R"({"id": 2, "command": ":undo"})"));
  CHECK(u["state"]["equations"].size() == 1);
  bool quit = false;
  fx.session.handle_json(R"({"id": 3, "command": ":quit"})", &quit);
  CHECK(quit);
}

TEST_CASE("transcripts replay to the same state") {
  Fixture fx("revapp.sys");
  REQUIRE(fx.session.run_script(test::read_file(test::data_path("revapp.script"))).ok);
  std::string t = fx.session.transcript();
  CHECK(t.rfind("#", 0) == 0);

  Fixture again("revapp.sys");
  CommandResult r = again.session.run_script(t);
  INFO(r.output);
  REQUIRE(r.ok);
  CHECK(again.session.state_json() == fx.session.state_json());
  CHECK(again.session.transcript() == t);
}

TEST_CASE("scripts stop at the first error and name the line") {
  Fixture fx("recdown.sys");
  CommandResult r = fx.session.run_script("induct 1\n# comment\nsimplify 9\ninduct 1\n");
  CHECK_FALSE(r.ok);
  CHECK(r.error.find("line 3") != std::string::npos);
  CHECK(fx.session.commands().size() == 1);
}

TEST_CASE("check reports the assumptions") {
  Fixture fx("recdown.sys");
  CommandResult r = fx.session.execute(":check");
  REQUIRE(r.ok);
  CHECK(r.output.find("quasi-reductivity") != std::string::npos);
  CHECK(fx.session.assumptions().count("quasi-reductive") == 1);
}
