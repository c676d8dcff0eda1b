#include "specat/random.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace specat {

std::uint64_t Rng::next() {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int Rng::below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::below: empty range");
  return static_cast<int>(next() % static_cast<std::uint64_t>(n));
}

Rng Rng::fork() { return Rng(next() ^ 0xD1B54A32D192ED03ull); }

namespace {

/// Subgroups of the endomorphism group of an object in a groupoid, each a
/// sorted list of morphism indices.
std::vector<std::vector<int>> object_subgroups(const FinCat& c, int obj) {
  std::vector<int> elems = c.hom(obj, obj);
  std::set<std::vector<int>> known;
  std::vector<int> trivial{c.identity(obj)};
  known.insert(trivial);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int>> snapshot(known.begin(), known.end());
    for (const auto& h : snapshot) {
      for (int g : elems) {
        if (std::binary_search(h.begin(), h.end(), g)) continue;
        std::set<int> closure(h.begin(), h.end());
        closure.insert(g);
        bool changed = true;
        while (changed) {
          changed = false;
          std::vector<int> cur(closure.begin(), closure.end());
          for (int a : cur) {
            for (int b : cur) changed |= closure.insert(c.compose(a, b)).second;
            changed |= closure.insert(c.inverse(a)).second;
          }
        }
        grew |= known.insert(std::vector<int>(closure.begin(), closure.end())).second;
      }
    }
  }
  return std::vector<std::vector<int>>(known.begin(), known.end());
}

/// One orbit presheaf: the representable at obj, quotiented by a subgroup of
/// its endomorphisms acting by postcomposition.
Presheaf orbit_presheaf(const CatPtr& base, int obj, const std::vector<int>& subgroup) {
  const FinCat& c = *base;
  std::vector<std::vector<int>> carrier(c.object_count());  // class reps
  std::vector<std::vector<int>> cls(c.object_count());      // hom elem -> class
  for (int d = 0; d < c.object_count(); ++d) {
    auto hom = c.hom(d, obj);
    cls[d].assign(c.morphism_count(), -1);
    for (int g : hom) {
      if (cls[d][g] >= 0) continue;
      int id = static_cast<int>(carrier[d].size());
      carrier[d].push_back(g);
      for (int h : subgroup) cls[d][c.compose(g, h)] = id;
    }
  }
  Presheaf x{base, {}, {}};
  for (int d = 0; d < c.object_count(); ++d)
    x.card.push_back(static_cast<int>(carrier[d].size()));
  x.action.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    x.action[m].resize(x.card[c.cod(m)]);
    for (int e = 0; e < x.card[c.cod(m)]; ++e)
      x.action[m][e] = cls[c.dom(m)][c.compose(m, carrier[c.cod(m)][e])];
  }
  return x;
}

Presheaf disjoint_sum(const Presheaf& a, const Presheaf& b) {
  const FinCat& c = *a.base;
  Presheaf x{a.base, {}, {}};
  for (int d = 0; d < c.object_count(); ++d) x.card.push_back(a.card[d] + b.card[d]);
  x.action.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    for (int e : a.action[m]) x.action[m].push_back(e);
    for (int e : b.action[m]) x.action[m].push_back(a.card[c.dom(m)] + e);
  }
  return x;
}

}  // namespace

Presheaf random_presheaf(Rng& rng, const CatPtr& base, int max_total) {
  if (!base->is_groupoid())
    throw std::invalid_argument("random_presheaf: base must be a groupoid");
  Presheaf x = empty_presheaf(base);
  if (base->object_count() == 0 || max_total <= 0) return x;
  int attempts = 1 + rng.below(3);
  for (int i = 0; i < attempts; ++i) {
    int obj = rng.below(base->object_count());
    auto subgroups = object_subgroups(*base, obj);
    const auto& h = subgroups[rng.below(static_cast<int>(subgroups.size()))];
    Presheaf orbit = orbit_presheaf(base, obj, h);
    if (x.total() + orbit.total() > max_total) break;
    x = disjoint_sum(x, orbit);
  }
  return x;
}

std::vector<std::vector<int>> automorphism_subgroups(const Word& w0) {
  if (!w0.base->is_groupoid())
    throw std::invalid_argument("automorphism_subgroups: base must be a groupoid");
  auto autos = enumerate_homs(w0, w0);
  const int n = static_cast<int>(autos.size());
  // multiplication and inverse tables over hom ranks
  std::vector<std::vector<int>> mul(n, std::vector<int>(n));
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) mul[i][j] = hom_rank(smc_compose(autos[i], autos[j]));
    inv[i] = hom_rank(smc_inverse(autos[i]));
  }
  int e = hom_rank(smc_identity(w0));

  std::set<std::vector<int>> known;
  known.insert({e});
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int>> snapshot(known.begin(), known.end());
    for (const auto& h : snapshot) {
      for (int g = 0; g < n; ++g) {
        if (std::binary_search(h.begin(), h.end(), g)) continue;
        std::set<int> closure(h.begin(), h.end());
        closure.insert(g);
        bool changed = true;
        while (changed) {
          changed = false;
          std::vector<int> cur(closure.begin(), closure.end());
          for (int a : cur) {
            for (int b : cur) changed |= closure.insert(mul[a][b]).second;
            changed |= closure.insert(inv[a]).second;
          }
        }
        grew |= known.insert(std::vector<int>(closure.begin(), closure.end())).second;
      }
    }
  }
  return std::vector<std::vector<int>>(known.begin(), known.end());
}

Species random_species(Rng& rng, const CatPtr& dom_base, const CatPtr& cod_base,
                       int degree, int max_blocks, int max_coeff) {
  auto words = enumerate_words(dom_base, degree);
  Species acc = empty_species(dom_base, cod_base, degree);
  int blocks = 1 + rng.below(max_blocks);
  for (int i = 0; i < blocks; ++i) {
    const Word& w0 = words[rng.below(static_cast<int>(words.size()))];
    auto subgroups = automorphism_subgroups(w0);
    const auto& hranks = subgroups[rng.below(static_cast<int>(subgroups.size()))];
    auto autos = enumerate_homs(w0, w0);
    std::vector<SmcMor> h;
    for (int r : hranks) h.push_back(autos[r]);
    Presheaf y = rng.coin() ? terminal_presheaf(cod_base)
                            : random_presheaf(rng, cod_base, max_coeff);
    acc = species_sum(acc, block_species(w0, h, y, degree));
  }
  return acc;
}

CoeffNat random_coeff_nat(Rng& rng, const Species& p, Species& q_storage) {
  // extend with fresh blocks, then collapse a few random identifications:
  // the family p >-> p + extra ->> quotient mixes mono and epi behaviour
  Rng sub = rng.fork();
  Species extra =
      random_species(sub, p.dom_base, p.cod_base, p.degree, 2, 2);
  Species big = species_sum(p, extra);
  const FinCat& bc = *p.cod_base;

  std::vector<std::array<int, 4>> pairs;
  int tries = rng.below(4);
  for (int i = 0; i < tries; ++i) {
    int w = rng.below(big.word_count());
    if (bc.object_count() == 0) break;
    int b = rng.below(bc.object_count());
    int n = big.coeff[w].card[b];
    if (n < 2) continue;
    int e1 = rng.below(n), e2 = rng.below(n);
    pairs.push_back({w, b, e1, e2});
  }
  QuotientResult qr = quotient_species(big, pairs);
  q_storage = std::move(qr.q);

  CoeffNat phi;
  phi.dom = &p;
  phi.cod = &q_storage;
  phi.comp.resize(p.word_count());
  for (int w = 0; w < p.word_count(); ++w) {
    phi.comp[w].resize(bc.object_count());
    for (int b = 0; b < bc.object_count(); ++b) {
      phi.comp[w][b].resize(p.coeff[w].card[b]);
      for (int e = 0; e < p.coeff[w].card[b]; ++e)
        phi.comp[w][b][e] = qr.proj[w][b][e];  // p sits first in the sum
    }
  }
  return phi;
}

}  // namespace specat
