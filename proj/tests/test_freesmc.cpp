#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specat/presheaf.hpp"
#include "specat/random.hpp"

using namespace specat;

TEST_CASE("identities compose to identities") {
  Word w{cats::cyclic(2), {0, 0, 0}};
  SmcMor id = smc_identity(w);
  CHECK(smc_compose(id, id) == id);
}

TEST_CASE("the swap on a discrete pair is an involution") {
  CatPtr d2 = cats::discrete(2);
  Word a{d2, {0}}, b{d2, {1}};
  SmcMor s = smc_symmetry(a, b);
  CHECK(s.perm == std::vector<int>{1, 0});
  SmcMor t = smc_symmetry(b, a);
  CHECK(smc_compose(s, t) == smc_identity(smc_tensor(a, b)));
}

TEST_CASE("composition agrees with the evaluation oracle on seeded morphisms") {
  // the faithful image under the sum construction decides equality
  CatPtr z2 = cats::cyclic(2);
  Word w{z2, {0, 0, 0}};
  auto homs = enumerate_homs(w, w);
  REQUIRE(homs.size() == 6 * 8);  // 3! permutations, 2^3 families
  Rng rng(42);
  for (int i = 0; i < 40; ++i) {
    const SmcMor& alpha = homs[rng.below(static_cast<int>(homs.size()))];
    const SmcMor& beta = homs[rng.below(static_cast<int>(homs.size()))];
    NatTrans lhs = sum_of(smc_compose(alpha, beta));
    NatTrans rhs = nat_compose(sum_of(alpha), sum_of(beta));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("tensor is strictly unital and associative on letters") {
  CatPtr z2 = cats::cyclic(2);
  Word empty{z2, {}};
  Word a{z2, {0}}, ab{z2, {0, 0}};
  CHECK(smc_tensor(a, empty) == a);
  CHECK(smc_tensor(empty, a) == a);
  CHECK(smc_tensor(a, a) == ab);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto pick = [&] {
      Word w{z2, {}};
      int n = rng.below(3);
      for (int k = 0; k < n; ++k) w.letters.push_back(0);
      return w;
    };
    Word x = pick(), y = pick(), z = pick();
    CHECK(smc_tensor(smc_tensor(x, y), z) == smc_tensor(x, smc_tensor(y, z)));
  }
}

TEST_CASE("symmetry has identity components and swaps blocks") {
  CatPtr z2 = cats::cyclic(2);
  Word empty{z2, {}};
  Word a{z2, {0}};
  CHECK(smc_symmetry(empty, a) == smc_identity(a));
  SmcMor s = smc_symmetry(a, a);
  CHECK(s.perm == std::vector<int>{1, 0});
  CHECK(s.family == std::vector<int>{0, 0});
  CHECK(smc_compose(s, smc_symmetry(a, a)) == smc_identity(smc_tensor(a, a)));
}

TEST_CASE("symmetry is natural") {
  CatPtr z2 = cats::cyclic(2);
  Word a{z2, {0}}, b{z2, {0}};
  for (const SmcMor& gamma : enumerate_homs(a, a)) {
    for (const SmcMor& delta : enumerate_homs(b, b)) {
      SmcMor lhs = smc_compose(smc_tensor(gamma, delta), smc_symmetry(a, b));
      SmcMor rhs = smc_compose(smc_symmetry(a, b), smc_tensor(delta, gamma));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("word enumeration is graded lexicographic") {
  auto words = enumerate_words(cats::terminal(), 2);
  REQUIRE(words.size() == 3);
  CHECK(words[0].letters.empty());
  CHECK(words[1].letters == std::vector<int>{0});
  CHECK(words[2].letters == std::vector<int>{0, 0});

  auto pair_words = enumerate_words(cats::discrete(2), 2);
  REQUIRE(pair_words.size() == 7);
  CHECK(pair_words[3].letters == std::vector<int>{0, 0});
  CHECK(pair_words[6].letters == std::vector<int>{1, 1});
  for (const Word& w : pair_words) CHECK(word_rank(w) < static_cast<int>(pair_words.size()));
}

TEST_CASE("hom enumeration counts match the permutation formula") {
  // 2 permutations with a single family choice each
  Word t2{cats::terminal(), {0, 0}};
  CHECK(enumerate_homs(t2, t2).size() == 2);
  // 1 permutation with 2 family choices
  Word z1{cats::cyclic(2), {0}};
  CHECK(enumerate_homs(z1, z1).size() == 2);
  // mismatched lengths have no morphisms
  Word z2w{cats::cyclic(2), {0, 0}};
  CHECK(enumerate_homs(z1, z2w).empty());
  // the permutation category: n! endomorphisms of a length-n word
  std::uint64_t factorial = 1;
  for (int n = 0; n <= 4; ++n) {
    if (n) factorial *= n;
    Word w{cats::terminal(), std::vector<int>(n, 0)};
    CHECK(count_homs(w, w) == factorial);
    CHECK(enumerate_homs(w, w).size() == factorial);
  }
}

TEST_CASE("hom ranks invert the enumeration") {
  for (CatPtr base : {cats::cyclic(2), cats::iso_pair()}) {
    for (const Word& a : enumerate_words(base, 2)) {
      for (const Word& b : enumerate_words(base, 2)) {
        auto hs = enumerate_homs(a, b);
        for (std::size_t i = 0; i < hs.size(); ++i)
          CHECK(hom_rank(hs[i]) == static_cast<int>(i));
      }
    }
  }
}

TEST_CASE("composition is associative and unital on the full enumeration") {
  for (CatPtr base : {cats::cyclic(2), cats::iso_pair()}) {
    auto words = enumerate_words(base, 3);
    for (const Word& a : words) {
      if (a.size() < 3) continue;  // the longest grade is the stress case
      auto h1 = enumerate_homs(a, a);
      for (const SmcMor& f : h1) {
        CHECK(smc_compose(smc_identity(a), f) == f);
        CHECK(smc_compose(f, smc_identity(a)) == f);
        for (const SmcMor& g : h1)
          for (const SmcMor& h : h1)
            CHECK(smc_compose(smc_compose(f, g), h) == smc_compose(f, smc_compose(g, h)));
      }
    }
  }
}

TEST_CASE("inverses cancel over a groupoid base") {
  CatPtr z2 = cats::cyclic(2);
  Word w{z2, {0, 0}};
  for (const SmcMor& m : enumerate_homs(w, w)) {
    CHECK(smc_compose(m, smc_inverse(m)) == smc_identity(w));
    CHECK(smc_compose(smc_inverse(m), m) == smc_identity(w));
  }
}

TEST_CASE("composing with a mismatched middle word throws") {
  CatPtr z2 = cats::cyclic(2);
  Word a{z2, {0}}, b{z2, {0, 0}};
  CHECK_THROWS_AS(smc_compose(smc_identity(a), smc_identity(b)), std::invalid_argument);
}
