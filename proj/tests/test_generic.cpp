#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "specat/classical.hpp"
#include "specat/generic.hpp"
#include "specat/random.hpp"

using namespace specat;

namespace {

// two-colored-sets species up to degree 2, assembled from orbit blocks:
// per degree the subsets of positions, acted on by place permutation
Species two_colorings(int degree) {
  CatPtr one = cats::terminal();
  Presheaf pt = terminal_presheaf(one);
  Word w0{one, {}}, w1{one, {0}}, w2{one, {0, 0}};
  auto aut2 = enumerate_homs(w2, w2);
  Species p = block_species(w0, {}, pt, degree);
  p = species_sum(p, block_species(w1, {}, pt, degree));
  p = species_sum(p, block_species(w1, {}, pt, degree));
  p = species_sum(p, block_species(w2, {aut2[0], aut2[1]}, pt, degree));  // empty side
  p = species_sum(p, block_species(w2, {}, pt, degree));                  // split pair
  p = species_sum(p, block_species(w2, {aut2[0], aut2[1]}, pt, degree));  // full side
  return p;
}

// unlabelled composite-structure oracle: multisets of at most `outer`
// multisets, sizes at most `inner`, covering n unlabelled points
int nested_multiset_oracle(int outer, int inner, int n) {
  // enumerate outer multisets by non-increasing block sizes (empty allowed)
  std::function<int(int, int, int)> go = [&](int blocks, int left, int cap) -> int {
    if (blocks == 0) return left == 0 ? 1 : 0;
    int total = 0;
    for (int k = std::min(left, cap); k >= 0; --k)
      total += go(blocks - 1, left - k, k);
    return total;
  };
  int total = 0;
  for (int m = 0; m <= outer; ++m) total += go(m, n, inner);
  return total;
}

}  // namespace

TEST_CASE("identity-tuple classes are generic, fold tuples are not") {
  CatPtr z2 = cats::cyclic(2);
  Species e = terminal_species(z2, cats::terminal(), 2);
  Word w1{z2, {0}}, w2{z2, {0, 0}};
  TaggedSum s1 = sum_of(w1), s2 = sum_of(w2);

  LanEval l1(e, s1.presheaf);
  int cls = l1.class_of(0, Triple{e.word_index(w1), 0, identity_tuple(s1)});
  CHECK(is_generic_whitebox(l1, 0, cls));
  CHECK(is_minimal_whitebox(l1, 0, cls));

  // the fold tuple: both positions of the pair map to the same letter copy
  int fold_elem = s1.index_of(0, 0, z2->identity(0));
  LanEval lf(e, s1.presheaf);
  int fold_cls = lf.class_of(0, Triple{e.word_index(w2), 0, {fold_elem, fold_elem}});
  CHECK_FALSE(is_generic_whitebox(lf, 0, fold_cls));
  CHECK(is_minimal_whitebox(lf, 0, fold_cls));  // the fold is still epi

  // a proper summand inclusion is mono but not epi
  LanEval l2(e, s2.presheaf);
  int inc = s2.index_of(0, 0, z2->identity(0));
  int inc_cls = l2.class_of(0, Triple{e.word_index(w1), 0, {inc}});
  CHECK_FALSE(is_minimal_whitebox(l2, 0, inc_cls));
  CHECK_FALSE(is_generic_whitebox(l2, 0, inc_cls));
}

TEST_CASE("whitebox checks refuse non-groupoid bases") {
  CatPtr arrow = cats::walking_arrow();
  Species p = block_species(Word{arrow, {1}}, {}, terminal_presheaf(cats::terminal()), 1);
  LanEval l(p, yoneda(arrow, 1));
  REQUIRE(l.class_count(0) == 1);
  CHECK_THROWS_AS(is_generic_whitebox(l, 0, 0), std::logic_error);
  CHECK_THROWS_AS(is_minimal_whitebox(l, 0, 0), std::logic_error);
}

TEST_CASE("dual-mode verdicts agree exhaustively at the desk scale") {
  CatPtr z2 = cats::cyclic(2);
  ProbeFamily fam(z2, 6, 3);
  Rng rng(2024);
  for (int round = 0; round < 3; ++round) {
    Species p = round == 0 ? terminal_species(z2, cats::terminal(), 2)
                           : random_species(rng, z2, cats::terminal(), 2);
    AnalyticCtx ctx(p, fam);
    for (int mi = 0; mi < fam.size(); ++mi) {
      const Presheaf& x = fam.member(mi);
      const LanEval& fx = ctx.at(x);
      for (int cls = 0; cls < fx.class_count(0); ++cls) {
        bool wg = is_generic_whitebox(fx, 0, cls);
        bool wm = is_minimal_whitebox(fx, 0, cls);
        CHECK(is_generic_bounded(ctx, x, 0, cls) == wg);
        CHECK(is_minimal_bounded(ctx, x, 0, cls) == wm);
        if (wg) CHECK(wm);
      }
    }
  }
}

TEST_CASE("genericity is preserved by transports and the cod action") {
  CatPtr z2 = cats::cyclic(2);
  Species p = terminal_species(z2, z2, 2);
  for (int w = 0; w < p.word_count(); ++w) {
    TaggedSum sw = sum_of(p.words[w]);
    LanEval lw(p, sw.presheaf);
    for (int ww = 0; ww < p.word_count(); ++ww) {
      if (p.words[w].size() != p.words[ww].size()) continue;
      TaggedSum sww = sum_of(p.words[ww]);
      LanEval lww(p, sww.presheaf);
      for (const SmcMor& sigma : enumerate_homs(p.words[w], p.words[ww])) {
        NatTrans smap = lan_map(lw, lww, sum_of(sigma));
        for (int b = 0; b < 1; ++b)
          for (int cls = 0; cls < lw.class_count(b); ++cls)
            if (is_generic_whitebox(lw, b, cls))
              CHECK(is_generic_whitebox(lww, b, smap.comp[b][cls]));
      }
    }
    // the cod-base action of the order-2 group
    for (int cls = 0; cls < lw.class_count(0); ++cls)
      if (is_generic_whitebox(lw, 0, cls))
        CHECK(is_generic_whitebox(lw, 0, lw.value().action[1][cls]));
  }
}

TEST_CASE("every element is engendered by its identity-tuple class") {
  CatPtr z2 = cats::cyclic(2);
  Rng rng(31337);
  Species p = random_species(rng, z2, cats::terminal(), 2);
  ProbeFamily fam(z2, 5, 2);
  AnalyticCtx ctx(p, fam);
  for (int mi = 0; mi < fam.size(); ++mi) {
    const Presheaf& x = fam.member(mi);
    const LanEval& fx = ctx.at(x);
    for (int cls = 0; cls < fx.class_count(0); ++cls) {
      Triple t = fx.rep(0, cls);
      TaggedSum sw = sum_of(p.words[t.word]);
      const LanEval& lw = ctx.at(sw.presheaf);
      int gen = lw.class_of(0, Triple{t.word, t.p, identity_tuple(sw)});
      CHECK(is_generic_whitebox(lw, 0, gen));
      NatTrans xhat = tuple_as_nat(sw, x, t.xs);
      CHECK(lan_map(lw, fx, xhat).comp[0][gen] == cls);
    }
  }
}

TEST_CASE("an element reached from a minimal one by a generic is an iso away") {
  CatPtr z2 = cats::cyclic(2);
  Species p = terminal_species(z2, cats::terminal(), 2);
  ProbeFamily fam(z2, 4, 2);
  AnalyticCtx ctx(p, fam);
  for (int mi = 0; mi < fam.size(); ++mi) {
    const Presheaf& x = fam.member(mi);
    const LanEval& fx = ctx.at(x);
    for (int cls = 0; cls < fx.class_count(0); ++cls) {
      if (!is_generic_whitebox(fx, 0, cls)) continue;
      // any minimal element mapping onto a generic one does so by an iso
      for (int w = 0; w < p.word_count(); ++w) {
        TaggedSum sw = sum_of(p.words[w]);
        const LanEval& lw = ctx.at(sw.presheaf);
        for (const NatTrans& f : hom_enumerate(sw.presheaf, x)) {
          NatTrans fmap = lan_map(lw, fx, f);
          for (int y = 0; y < lw.class_count(0); ++y) {
            if (fmap.comp[0][y] != cls) continue;
            if (is_minimal_whitebox(lw, 0, y)) CHECK(morphism_class(f).iso);
          }
        }
      }
    }
  }
}

TEST_CASE("generic engenderings of one element differ by an isomorphism") {
  CatPtr z2 = cats::cyclic(2);
  Species p = terminal_species(z2, cats::terminal(), 2);
  ProbeFamily fam(z2, 4, 2);
  AnalyticCtx ctx(p, fam);
  for (int mi = 0; mi < fam.size(); ++mi) {
    const Presheaf& x = fam.member(mi);
    const LanEval& fx = ctx.at(x);
    for (int cls = 0; cls < fx.class_count(0); ++cls) {
      struct Engendering {
        int word;
        int gen_cls;
        NatTrans map;
      };
      std::vector<Engendering> found;
      for (int w = 0; w < p.word_count(); ++w) {
        TaggedSum sw = sum_of(p.words[w]);
        const LanEval& lw = ctx.at(sw.presheaf);
        for (const NatTrans& f : hom_enumerate(sw.presheaf, x)) {
          NatTrans fmap = lan_map(lw, fx, f);
          for (int y = 0; y < lw.class_count(0); ++y)
            if (fmap.comp[0][y] == cls && is_generic_whitebox(lw, 0, y))
              found.push_back({w, y, f});
        }
      }
      for (const auto& a : found)
        for (const auto& b : found) {
          // some completion isomorphism turns one engendering into the other
          TaggedSum sa = sum_of(p.words[a.word]), sb = sum_of(p.words[b.word]);
          const LanEval& la = ctx.at(sa.presheaf);
          const LanEval& lb = ctx.at(sb.presheaf);
          bool linked = false;
          for (const SmcMor& alpha : enumerate_homs(p.words[a.word], p.words[b.word])) {
            NatTrans salpha = sum_of(alpha);
            if (lan_map(la, lb, salpha).comp[0][a.gen_cls] == b.gen_cls &&
                nat_compose(salpha, b.map) == a.map)
              linked = true;
          }
          CHECK(linked);
        }
    }
  }
}

TEST_CASE("coefficients of the evaluation recover the species") {
  CatPtr z2 = cats::cyclic(2);
  ProbeFamily fam(z2, 6, 3);
  Species e = terminal_species(z2, cats::terminal(), 2);
  AnalyticCtx ctx(e, fam);
  CoefficientsResult co = coefficients_of(ctx);
  CHECK(co.iso_ok);
  CHECK(co.eta_mono);
  CHECK(co.eta_epi);
  CHECK(species_validate(co.fcirc).ok());
  for (int w = 0; w < e.word_count(); ++w)
    CHECK(co.fcirc.coeff[w].card == e.coeff[w].card);
}

TEST_CASE("coefficients of a two-block species come back block by block") {
  CatPtr one = cats::terminal();
  ProbeFamily fam(one, 6, 3);
  Species p = species_sum(terminal_species(one, one, 2), two_colorings(2));
  REQUIRE(species_validate(p).ok());
  // degree-wise sizes: sets contribute 1, colorings contribute 2^n
  REQUIRE(p.coeff[0].card[0] == 2);
  REQUIRE(p.coeff[1].card[0] == 3);
  REQUIRE(p.coeff[2].card[0] == 5);
  AnalyticCtx ctx(p, fam);
  CoefficientsResult co = coefficients_of(ctx);
  CHECK(co.iso_ok);
  CHECK(co.eta_mono);
  CHECK(co.eta_epi);
  for (int w = 0; w < p.word_count(); ++w)
    CHECK(co.fcirc.coeff[w].card == p.coeff[w].card);
}

TEST_CASE("extraction inverts the induced transformation") {
  CatPtr z2 = cats::cyclic(2);
  ProbeFamily fam(z2, 6, 3);
  Rng rng(5150);
  Species p = random_species(rng, z2, cats::cyclic(2), 2);
  Species q;
  CoeffNat phi = random_coeff_nat(rng, p, q);
  AnalyticCtx cp(p, fam), cq(q, fam);
  ProbeNat psi = lan_nat(cp, cq, phi);
  CHECK(probe_nat_is_natural(cp, cq, psi));

  ExtractionResult ex = extract_coefficient_nat(cp, cq, psi);
  REQUIRE(ex.ok);
  CHECK(ex.phi.comp == phi.comp);

  // and the identity family extracts to the identity
  CoeffNat ident = coeff_nat_identity(p);
  ProbeNat psi_id = lan_nat(cp, cp, ident);
  ExtractionResult exi = extract_coefficient_nat(cp, cp, psi_id);
  REQUIRE(exi.ok);
  CHECK(exi.phi.comp == ident.comp);
}

TEST_CASE("the arrow-base counterexample fails extraction with a witness") {
  CounterexampleReport rep = check_counterexample(6);
  CHECK(rep.ok());
  CHECK(rep.witness.find("no preimage") != std::string::npos);

  CatPtr arrow = cats::walking_arrow();
  CatPtr setc = cats::terminal();
  Species p = block_species(Word{arrow, {1}}, {}, terminal_presheaf(setc), 2);
  Species one = terminal_species(arrow, setc, 2);
  CoeffNat phi;
  phi.dom = &p;
  phi.cod = &one;
  for (int w = 0; w < p.word_count(); ++w)
    phi.comp.push_back({std::vector<int>(p.coeff[w].card[0], 0)});
  ProbeFamily fam(arrow, 6, 3);
  AnalyticCtx cp(p, fam), cq(one, fam);
  ProbeNat psi = lan_nat(cp, cq, phi);
  CHECK_FALSE(is_quasi_cartesian(cp, cq, psi).quasi_cartesian);
  ExtractionResult ex = extract_coefficient_nat(cp, cq, psi);
  CHECK_FALSE(ex.ok);
  CHECK(ex.failure.find("not quasi-cartesian") != std::string::npos);
}

TEST_CASE("composition with the identity species is the identity") {
  CatPtr one = cats::terminal();
  Species e = catalog("E", 2).species;
  Species ident = identity_species(one, 2);
  ComposeResult r = compose_analytic(e, ident, 2);
  REQUIRE(r.ok);
  CHECK(species_validate(r.composite).ok());
  for (int w = 0; w < e.word_count(); ++w)
    CHECK(r.composite.coeff[w].card == e.coeff[w].card);
  // extensional agreement with the bare species on label sets
  for (int k = 0; k <= 3; ++k) {
    LanEval le(e, label_set(k));
    LanEval lr(r.composite, label_set(k));
    CHECK(le.class_count(0) == lr.class_count(0));
  }
}

TEST_CASE("the singleton species is idempotent under composition") {
  CatPtr one = cats::terminal();
  Species x = block_species(Word{one, {0}}, {}, terminal_presheaf(one), 1);
  ComposeResult r = compose_analytic(x, x, 1);
  REQUIRE(r.ok);
  for (int w = 0; w < x.word_count(); ++w)
    CHECK(r.composite.coeff[w].card == x.coeff[w].card);
}

TEST_CASE("composite of truncated sets species counts nested multisets") {
  Species e = catalog("E", 2).species;
  ComposeResult r = compose_analytic(e, e, 2);
  REQUIRE(r.ok);
  CHECK(r.certificate_ok);
  CHECK(species_validate(r.composite).ok());
  auto counts = count_unlabelled(as_classical(r.composite));
  REQUIRE(nested_multiset_oracle(2, 2, 0) == 3);
  REQUIRE(nested_multiset_oracle(2, 2, 1) == 2);
  REQUIRE(nested_multiset_oracle(2, 2, 2) == 3);
  CHECK(counts == std::vector<std::uint64_t>{3, 2, 3});
}

TEST_CASE("composition refuses an output degree beyond the inputs") {
  CatPtr one = cats::terminal();
  Species x = block_species(Word{one, {0}}, {}, terminal_presheaf(one), 1);
  ComposeResult r = compose_analytic(x, x, 2);
  CHECK_FALSE(r.ok);
  CHECK(r.failure.find("insufficient input degrees") != std::string::npos);
}
