#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "specat/generic.hpp"
#include "specat/random.hpp"

using namespace specat;

TEST_CASE("representables over the stock bases") {
  Presheaf t = yoneda(cats::terminal(), 0);
  CHECK(t.card == std::vector<int>{1});
  CHECK(t.action[0] == std::vector<int>{0});

  // the order-2 group: two elements swapped by the non-identity arrow
  Presheaf z = yoneda(cats::cyclic(2), 0);
  CHECK(z.card == std::vector<int>{2});
  CHECK(z.action[1] == std::vector<int>{1, 0});

  // the walking arrow: hom(bot, top) has one element, hom(top, bot) none
  Presheaf top = yoneda(cats::walking_arrow(), 1);
  CHECK(top.card == std::vector<int>{1, 1});
  Presheaf bot = yoneda(cats::walking_arrow(), 0);
  CHECK(bot.card == std::vector<int>{1, 0});

  CHECK_THROWS_AS(yoneda(cats::terminal(), 2), std::invalid_argument);
}

TEST_CASE("presheaf validation catches a functoriality fault") {
  Presheaf z = yoneda(cats::cyclic(2), 0);
  REQUIRE(presheaf_validate(z).ok());
  z.action[1] = {1, 1};  // collapses the swap; s;s = id no longer holds
  ValidationReport r = presheaf_validate(z);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const auto& v : r.violations)
    if (v.find("functoriality") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("tagged sums decode and act by precomposition") {
  CatPtr z2 = cats::cyclic(2);
  Word empty{z2, {}};
  CHECK(sum_of(empty).presheaf.total() == 0);

  Word w{z2, {0, 0}};
  TaggedSum s = sum_of(w);
  CHECK(s.presheaf.card[0] == 4);  // two letters, two arrows each
  SmcMor id = smc_identity(w);
  CHECK(sum_of(id) == nat_identity(s.presheaf));

  // the swap with family (s, id) sends (0, id) to (1, s)
  SmcMor gamma{w, w, {1, 0}, {1, 0}};
  REQUIRE(smc_valid(gamma));
  NatTrans g = sum_of(gamma);
  int src = s.index_of(0, 0, z2->identity(0));
  CHECK(s.decode(0, g.apply(0, src)) == std::pair<int, int>{1, 1});
}

TEST_CASE("underlying functions project to the index level") {
  CatPtr z2 = cats::cyclic(2);
  Word w{z2, {0, 0}};
  TaggedSum s = sum_of(w);
  CHECK(underlying_function(s, s, nat_identity(s.presheaf)) == std::vector<int>{0, 1});
  for (const SmcMor& gamma : enumerate_homs(w, w))
    CHECK(underlying_function(s, s, sum_of(gamma)) == gamma.perm);

  // underlying composition order follows the diagrammatic composite
  Word a{z2, {0}}, bb{z2, {0, 0}};
  TaggedSum sa = sum_of(a), sbb = sum_of(bb);
  for (const NatTrans& f : hom_enumerate(sa.presheaf, sbb.presheaf)) {
    auto phi = underlying_function(sa, sbb, f);
    int e = sa.index_of(0, 0, z2->identity(0));
    CHECK(phi[0] == sbb.decode(0, f.apply(0, e)).first);
    for (const NatTrans& g : hom_enumerate(sbb.presheaf, sbb.presheaf)) {
      auto psi = underlying_function(sbb, sbb, g);
      auto comp = underlying_function(sa, sbb, nat_compose(f, g));
      CHECK(comp[0] == psi[phi[0]]);
    }
  }
  CHECK_THROWS_AS(underlying_function(sa, sa, nat_identity(sbb.presheaf)),
                  std::invalid_argument);
}

TEST_CASE("pointwise classification of the arrow-base comparison map") {
  CatPtr arrow = cats::walking_arrow();
  Presheaf yb = yoneda(arrow, 0), yt = yoneda(arrow, 1);
  auto maps = hom_enumerate(yb, yt);
  REQUIRE(maps.size() == 1);
  MorphismClass mc = morphism_class(maps[0]);
  CHECK(mc.mono);
  CHECK_FALSE(mc.epi);
  CHECK_FALSE(mc.iso);
  CHECK(morphism_class(nat_identity(yb)).iso);
}

TEST_CASE("bijective-on-indices maps lift, others do not") {
  CatPtr z2 = cats::cyclic(2);
  for (const Word& a : enumerate_words(z2, 2)) {
    TaggedSum sa = sum_of(a);
    for (const Word& b : enumerate_words(z2, 2)) {
      TaggedSum sb = sum_of(b);
      for (const SmcMor& gamma : enumerate_homs(a, b))
        CHECK(lift_to_freesmc(sa, sb, sum_of(gamma)) == gamma);
      for (const NatTrans& f : hom_enumerate(sa.presheaf, sb.presheaf)) {
        auto lift = lift_to_freesmc(sa, sb, f);
        if (index_class(sa, sb, f).bijective) {
          REQUIRE(lift.has_value());
          CHECK(sum_of(*lift) == f);
        } else {
          CHECK_FALSE(lift.has_value());
        }
      }
    }
  }
}

TEST_CASE("hom enumeration counts: pinned instances") {
  CHECK(hom_enumerate(sum_of(Word{cats::terminal(), {}}).presheaf,
                      yoneda(cats::terminal(), 0))
            .size() == 1);
  Word t2{cats::terminal(), {0, 0}}, t3{cats::terminal(), {0, 0, 0}};
  CHECK(hom_enumerate(sum_of(t2).presheaf, sum_of(t3).presheaf).size() == 9);
  Word z1{cats::cyclic(2), {0}};
  CHECK(hom_enumerate(sum_of(z1).presheaf, sum_of(z1).presheaf).size() == 2);
}

TEST_CASE("hom enumeration guards its exponential blowup") {
  CatPtr one = cats::terminal();
  Presheaf big{one, {9}, {{0, 1, 2, 3, 4, 5, 6, 7, 8}}};
  REQUIRE(presheaf_validate(big).ok());
  CHECK_THROWS_AS(hom_enumerate(big, big), std::length_error);
  CHECK(hom_enumerate(big, terminal_presheaf(one), 9).size() == 1);
}

TEST_CASE("wide pullbacks agree with a direct filter") {
  CatPtr z2 = cats::cyclic(2);
  Word w1{z2, {0}}, w2{z2, {0, 0}};
  Presheaf s1 = sum_of(w1).presheaf, s2 = sum_of(w2).presheaf;

  // the diagonal of the identity cospan is the object itself
  NatTrans id = nat_identity(s2);
  WidePullback d = wide_pullback({id, id});
  CHECK(morphism_class(d.projections[0]).iso);

  // two disjoint summand inclusions meet in the empty presheaf
  auto subs = subobjects_of_sum(w2);
  REQUIRE(subs.size() == 4);
  WidePullback meet = wide_pullback({subs[1].inclusion, subs[2].inclusion});
  CHECK(meet.apex.total() == 0);

  // every agreeing pair appears exactly once in the apex
  for (const NatTrans& f : hom_enumerate(s2, s1)) {
    for (const NatTrans& g : hom_enumerate(s2, s1)) {
      WidePullback w = wide_pullback({f, g});
      long long direct = 0;
      for (int e1 = 0; e1 < s2.card[0]; ++e1)
        for (int e2 = 0; e2 < s2.card[0]; ++e2)
          if (f.comp[0][e1] == g.comp[0][e2]) ++direct;
      CHECK(w.apex.card[0] == direct);
      REQUIRE(presheaf_validate(w.apex).ok());
      for (const auto& pr : w.projections) CHECK(nat_is_natural(pr));
    }
  }
  CHECK_THROWS_AS(wide_pullback({}), std::invalid_argument);
}

TEST_CASE("quasi-pullback detection") {
  CatPtr z2 = cats::cyclic(2);
  Presheaf s1 = sum_of(Word{z2, {0}}).presheaf;
  Presheaf s2 = sum_of(Word{z2, {0, 0}}).presheaf;
  auto maps = hom_enumerate(s2, s1);
  REQUIRE_FALSE(maps.empty());
  const NatTrans& f = maps[0];

  WidePullback pb = wide_pullback({f, f});
  CHECK(is_quasi_pullback(pb.projections, {f, f}));

  // an empty span over a nonempty pullback is not a quasi-pullback
  Presheaf empty = empty_presheaf(z2);
  NatTrans from_empty{empty, s2, std::vector<std::vector<int>>{{}}};
  CHECK_FALSE(is_quasi_pullback({from_empty, from_empty}, {f, f}));

  // a non-commuting input is rejected rather than judged
  auto endos = hom_enumerate(s1, s1);
  REQUIRE(endos.size() == 2);
  CHECK_THROWS_AS(
      is_quasi_pullback(nat_identity(s1), nat_identity(s1), endos[0], endos[1]),
      std::invalid_argument);
}

TEST_CASE("image factorization") {
  CatPtr one = cats::terminal();
  Presheaf s2 = sum_of(Word{one, {0, 0}}).presheaf;
  Presheaf s1 = sum_of(Word{one, {0}}).presheaf;

  for (const NatTrans& f : hom_enumerate(s2, s1)) {
    EpiMonoFactorization em = epi_mono_factorize(f);
    CHECK(nat_compose(em.epi, em.mono) == f);
    CHECK(morphism_class(em.epi).epi);
    CHECK(morphism_class(em.mono).mono);
    // a surjection onto the single summand has the whole of S[.] as image
    if (morphism_class(f).epi) CHECK(em.epi.cod == s1);
  }
  for (const NatTrans& f : hom_enumerate(s1, s2)) {
    EpiMonoFactorization em = epi_mono_factorize(f);
    if (morphism_class(f).mono) CHECK(morphism_class(em.epi).iso);
  }
}

TEST_CASE("subobjects of a sum over a groupoid") {
  CatPtr z2 = cats::cyclic(2);
  CHECK(subobjects_of_sum(Word{z2, {}}).size() == 1);

  Word w{z2, {0, 0}};
  auto subs = subobjects_of_sum(w);
  REQUIRE(subs.size() == 4);
  CHECK(subs[0].indices.empty());
  CHECK(subs[3].indices == std::vector<int>{1});
  for (const auto& s : subs) {
    CHECK(nat_is_natural(s.inclusion));
    CHECK(morphism_class(s.inclusion).mono);
  }

  // every mono from a probe into S[.,.] lands on one of the four
  Presheaf target = sum_of(w).presheaf;
  ProbeFamily fam(z2, 4, 0);
  for (int i = 0; i < fam.size(); ++i) {
    for (const NatTrans& f : hom_enumerate(fam.member(i), target)) {
      if (!morphism_class(f).mono) continue;
      std::set<int> image;
      for (int e : f.comp[0]) image.insert(e);
      int matches = 0;
      for (const auto& s : subs) {
        std::set<int> sub_image(s.inclusion.comp[0].begin(), s.inclusion.comp[0].end());
        if (sub_image == image) ++matches;
      }
      CHECK(matches == 1);
    }
  }
  CHECK_THROWS_AS(subobjects_of_sum(Word{cats::walking_arrow(), {0}}), std::logic_error);
}

TEST_CASE("canonical forms are relabeling invariants") {
  Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    Presheaf x = random_presheaf(rng, cats::cyclic(2), 5);
    Presheaf c1 = canonical_form(x);
    // relabel by reversing each carrier
    Presheaf y = x;
    const FinCat& cat = *x.base;
    for (int m = 0; m < cat.morphism_count(); ++m) {
      int dn = x.card[cat.dom(m)], cn = x.card[cat.cod(m)];
      for (int e = 0; e < cn; ++e)
        y.action[m][cn - 1 - e] = dn - 1 - x.action[m][e];
    }
    REQUIRE(presheaf_validate(y).ok());
    CHECK(canonical_form(y) == c1);
  }
}
