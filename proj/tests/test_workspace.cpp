#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specat/workspace.hpp"

using namespace specat;

namespace {

const char* kMini = R"({
  "categories": [{
    "name": "pt",
    "objects": ["*"],
    "morphisms": [{"name": "id", "dom": "*", "cod": "*"}],
    "identities": ["id"],
    "composition": [["id", "id", "id"]]
  }],
  "presheaves": [{"name": "three", "base": "pt", "carrier": [3]}]
})";

}  // namespace

TEST_CASE("a minimal document loads and validates") {
  Workspace ws;
  ws.load_text(kMini, "mini");
  CHECK(ws.category("pt")->object_count() == 1);
  CHECK(ws.presheaf("three").card == std::vector<int>{3});
  CHECK_THROWS_AS(ws.presheaf("nope"), LoadError);
}

TEST_CASE("unknown references are reported with their location") {
  Workspace ws;
  const char* bad = R"({"presheaves": [{"name": "x", "base": "ghost", "carrier": [1]}]})";
  try {
    ws.load_text(bad, "doc");
    FAIL("expected a load error");
  } catch (const LoadError& e) {
    std::string msg = e.what();
    CHECK(msg.find("ghost") != std::string::npos);
    CHECK(msg.find("doc") != std::string::npos);
  }
}

TEST_CASE("name collisions are rejected") {
  Workspace ws;
  ws.load_text(kMini, "first");
  CHECK_THROWS_AS(ws.load_text(kMini, "second"), LoadError);
}

TEST_CASE("malformed JSON is a parse error, not a load error") {
  Workspace ws;
  CHECK_THROWS_AS(ws.load_text("{ not json", "doc"), ParseError);
  CHECK_THROWS_AS(ws.load_file("/nonexistent/path.json"), ParseError);
}

TEST_CASE("a broken composition table fails validation with the triple named") {
  Workspace ws;
  const char* bad = R"({
    "categories": [{
      "name": "broken",
      "objects": ["*"],
      "morphisms": [
        {"name": "id", "dom": "*", "cod": "*"},
        {"name": "s", "dom": "*", "cod": "*"}
      ],
      "identities": ["id"],
      "composition": [
        ["id", "id", "id"], ["id", "s", "s"], ["s", "id", "s"], ["s", "s", "s"]
      ]
    }]
  })";
  try {
    ws.load_text(bad, "doc");
    FAIL("expected a load error");
  } catch (const LoadError& e) {
    std::string msg = e.what();
    CHECK(msg.find("s") != std::string::npos);
    CHECK(msg.find("violation") != std::string::npos);
  }
}

TEST_CASE("the shipped fixtures load, validate, and evaluate") {
  Workspace ws;
  ws.load_file(std::string(FIXTURE_DIR) + "/z2.json");
  ws.load_file(std::string(FIXTURE_DIR) + "/scat-counterexample.json");

  CHECK(ws.category("z2")->is_groupoid());
  CHECK_FALSE(ws.category("scat")->is_groupoid());
  CHECK(ws.presheaf("free_orbit").card == std::vector<int>{2});

  const Species& p = ws.species("P");
  CHECK(p.degree == 1);
  LanEval at_top(p, yoneda(ws.category("scat"), 1));
  CHECK(at_top.class_count(0) == 1);
  LanEval at_bot(p, yoneda(ws.category("scat"), 0));
  CHECK(at_bot.class_count(0) == 0);

  const Species& one = ws.species("One");
  LanEval lo(one, yoneda(ws.category("scat"), 1));
  CHECK(lo.class_count(0) == 2);  // the empty class and the merged singleton class

  CHECK(ws.config.truncation == 1);  // picked up from the fixture config
  CHECK(ws.linear_species("ones").degree == 2);
}

TEST_CASE("species fixtures reject a missing transport for nonempty coefficients") {
  Workspace ws;
  const char* bad = R"({
    "categories": [{
      "name": "pt",
      "objects": ["*"],
      "morphisms": [{"name": "id", "dom": "*", "cod": "*"}],
      "identities": ["id"],
      "composition": [["id", "id", "id"]]
    }],
    "species": [{
      "name": "p",
      "dom_base": "pt",
      "cod_base": "pt",
      "degree": 1,
      "coefficients": [{"word": [0], "carrier": [1]}]
    }]
  })";
  CHECK_THROWS_AS(ws.load_text(bad, "doc"), LoadError);
}

TEST_CASE("catalog names resolve when no loaded species matches") {
  Workspace ws;
  ws.config.truncation = 2;
  Species e = ws.resolve_species("E");
  CHECK(e.degree == 2);
  CHECK_THROWS_AS(ws.resolve_species("unknown-species"), std::invalid_argument);
}
