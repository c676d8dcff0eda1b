#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specat/fincat.hpp"

using namespace specat;

namespace {

// hand oracle for the order-2 group: the full composition table
const int kZ2Table[2][2] = {{0, 1}, {1, 0}};

FinCat broken_z3() {
  // the order-3 group with one associativity fault injected at (t;s)
  std::vector<Morphism> mors{{0, 0, "id"}, {0, 0, "s"}, {0, 0, "t"}};
  std::vector<std::vector<int>> t{{0, 1, 2}, {1, 2, 0}, {2, 1, 1}};  // t;s should be id
  return FinCat(1, std::move(mors), {0}, std::move(t));
}

}  // namespace

TEST_CASE("terminal category validates") {
  CatPtr c = cats::terminal();
  REQUIRE(validate_category(*c).ok());
  CHECK(c->is_groupoid());
  CHECK(c->object_count() == 1);
  CHECK(c->morphism_count() == 1);
}

TEST_CASE("the order-2 group validates and matches the hand table") {
  CatPtr c = cats::cyclic(2);
  REQUIRE(validate_category(*c).ok());
  CHECK(c->is_groupoid());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(c->compose(i, j) == kZ2Table[i][j]);
  CHECK(c->inverse(1) == 1);
}

TEST_CASE("an injected associativity fault is named") {
  FinCat c = broken_z3();
  ValidationReport r = validate_category(c);
  CHECK(r.structural.empty());
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const auto& v : r.violations)
    if (v.find("associativity") != std::string::npos && v.find("s") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("structural problems are reported apart from law violations") {
  FinCat c(1, {{0, 3, "bad"}}, {0}, {{0}});
  ValidationReport r = validate_category(c);
  CHECK_FALSE(r.structural.empty());
  CHECK(r.violations.empty());
}

TEST_CASE("hom sets are ascending and match a table scan") {
  CHECK(cats::terminal()->hom(0, 0) == std::vector<int>{0});

  CatPtr z2 = cats::cyclic(2);
  std::vector<int> scan;
  for (int m = 0; m < z2->morphism_count(); ++m)
    if (z2->dom(m) == 0 && z2->cod(m) == 0) scan.push_back(m);
  CHECK(z2->hom(0, 0) == scan);
  CHECK(scan.size() == 2);

  CHECK(cats::discrete(2)->hom(0, 1).empty());
  CHECK_THROWS_AS(cats::terminal()->hom(0, 5), std::invalid_argument);
}

TEST_CASE("groupoid hom sets pair up under inversion") {
  for (CatPtr c : {cats::iso_pair(), cats::cyclic(3), cats::discrete(2)}) {
    for (int a = 0; a < c->object_count(); ++a)
      for (int b = 0; b < c->object_count(); ++b)
        CHECK(c->hom(a, b).size() == c->hom(b, a).size());
  }
}

TEST_CASE("units compose away on every fixture") {
  for (CatPtr c : {cats::terminal(), cats::cyclic(2), cats::cyclic(3), cats::iso_pair(),
                   cats::walking_arrow(), cats::discrete(3)}) {
    REQUIRE(validate_category(*c).ok());
    for (int f = 0; f < c->morphism_count(); ++f) {
      CHECK(c->compose(c->identity(c->dom(f)), f) == f);
      CHECK(c->compose(f, c->identity(c->cod(f))) == f);
    }
  }
}

TEST_CASE("validation is repeatable") {
  FinCat c = broken_z3();
  ValidationReport a = validate_category(c);
  ValidationReport b = validate_category(c);
  CHECK(a.violations == b.violations);
  CHECK(a.structural == b.structural);
}

TEST_CASE("the walking arrow is not a groupoid") {
  CatPtr c = cats::walking_arrow();
  REQUIRE(validate_category(*c).ok());
  CHECK_FALSE(c->is_groupoid());
  CHECK_THROWS_AS(c->inverse(2), std::logic_error);
  CHECK(c->hom(0, 1).size() == 1);
  CHECK(c->hom(1, 0).empty());
}

TEST_CASE("composing a non-composable pair throws") {
  CatPtr c = cats::discrete(2);
  CHECK_THROWS_AS(c->compose(0, 1), std::invalid_argument);
}

TEST_CASE("a groupoid flag with broken inverses is reported") {
  // claim the identity is its own inverse but point s at the identity
  std::vector<Morphism> mors{{0, 0, "id"}, {0, 0, "s"}};
  FinCat c(1, std::move(mors), {0}, {{0, 1}, {1, 0}}, std::vector<int>{0, 0});
  ValidationReport r = validate_category(c);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const auto& v : r.violations)
    if (v.find("inverse") != std::string::npos) found = true;
  CHECK(found);
}
