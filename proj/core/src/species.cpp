#include "specat/species.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace specat {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the least vertex as root
    parent[b] = a;
    return true;
  }
};

std::vector<SmcMor> homs_between(const Word& a, const Word& b) {
  return enumerate_homs(a, b);
}

}  // namespace

int Species::word_index(const Word& w) const {
  if (w.base.get() != dom_base.get())
    throw std::invalid_argument("word_index: word over the wrong base");
  if (w.size() > degree) throw std::invalid_argument("word_index: above the degree bound");
  int r = word_rank(w);
  if (r < 0 || r >= word_count() || !(words[r] == w))
    throw std::logic_error("word_index: rank out of sync");
  return r;
}

NatTrans Species::transport(const SmcMor& alpha) const {
  int wi = word_index(alpha.dom);
  int wj = word_index(alpha.cod);
  const Components& comps = transport_comp(wi, wj, hom_rank(alpha));
  return NatTrans{coeff[wi], coeff[wj], comps};
}

const Components& Species::transport_comp(int wi, int wj, int rank) const {
  auto it = action.find({wi, wj});
  if (it == action.end()) throw std::invalid_argument("transport_comp: no such word pair");
  return it->second.at(rank);
}

ValidationReport species_validate(const Species& p) {
  ValidationReport r;
  if (static_cast<int>(p.words.size()) != static_cast<int>(p.coeff.size())) {
    r.structural.push_back("coefficient table out of step with the word list");
    return r;
  }
  for (int w = 0; w < p.word_count(); ++w) {
    if (p.coeff[w].base.get() != p.cod_base.get()) {
      r.structural.push_back("coefficient of word " + std::to_string(w) +
                             " lives over the wrong base");
      continue;
    }
    ValidationReport sub = presheaf_validate(p.coeff[w]);
    for (auto& s : sub.structural)
      r.structural.push_back("coefficient " + std::to_string(w) + ": " + s);
    for (auto& v : sub.violations)
      r.violations.push_back("coefficient " + std::to_string(w) + ": " + v);
  }
  if (!r.structural.empty()) return r;

  const FinCat& b = *p.cod_base;
  std::vector<std::vector<SmcMor>> homs_cache(p.word_count() * p.word_count());
  auto homs_of = [&](int wi, int wj) -> const std::vector<SmcMor>& {
    auto& slot = homs_cache[wi * p.word_count() + wj];
    if (slot.empty() && p.words[wi].size() == p.words[wj].size())
      slot = homs_between(p.words[wi], p.words[wj]);
    return slot;
  };

  for (int wi = 0; wi < p.word_count(); ++wi) {
    for (int wj = 0; wj < p.word_count(); ++wj) {
      if (p.words[wi].size() != p.words[wj].size()) continue;
      const auto& hs = homs_of(wi, wj);
      auto it = p.action.find({wi, wj});
      if (it == p.action.end() || it->second.size() != hs.size()) {
        r.structural.push_back("transport table missing or misaligned for pair (" +
                               std::to_string(wi) + "," + std::to_string(wj) + ")");
        continue;
      }
      for (std::size_t k = 0; k < hs.size(); ++k) {
        const Components& comps = it->second[k];
        if (static_cast<int>(comps.size()) != b.object_count()) {
          r.structural.push_back("transport components have wrong shape");
          continue;
        }
        // each transport must be a natural map of coefficient presheaves
        NatTrans t{p.coeff[wi], p.coeff[wj], comps};
        if (!nat_is_natural(t))
          r.violations.push_back("transport along hom " + std::to_string(k) + " of pair (" +
                                 std::to_string(wi) + "," + std::to_string(wj) +
                                 ") is not natural");
      }
    }
  }
  if (!r.structural.empty() || !r.violations.empty()) return r;

  // identities and composition
  for (int wi = 0; wi < p.word_count(); ++wi) {
    SmcMor id = smc_identity(p.words[wi]);
    const Components& comps = p.transport_comp(wi, wi, hom_rank(id));
    for (int ob = 0; ob < b.object_count(); ++ob)
      for (int e = 0; e < p.coeff[wi].card[ob]; ++e)
        if (comps[ob][e] != e) {
          r.violations.push_back("identity transport moves elements at word " +
                                 std::to_string(wi));
          ob = b.object_count();
          break;
        }
  }
  for (int wi = 0; wi < p.word_count(); ++wi) {
    for (int wj = 0; wj < p.word_count(); ++wj) {
      if (p.words[wi].size() != p.words[wj].size()) continue;
      const auto& hs1 = homs_of(wi, wj);
      for (int wk = 0; wk < p.word_count(); ++wk) {
        if (p.words[wj].size() != p.words[wk].size()) continue;
        const auto& hs2 = homs_of(wj, wk);
        for (std::size_t i = 0; i < hs1.size(); ++i) {
          const Components& ca = p.transport_comp(wi, wj, static_cast<int>(i));
          for (std::size_t j = 0; j < hs2.size(); ++j) {
            const Components& cb = p.transport_comp(wj, wk, static_cast<int>(j));
            SmcMor comp = smc_compose(hs1[i], hs2[j]);
            const Components& cc = p.transport_comp(wi, wk, hom_rank(comp));
            for (int ob = 0; ob < b.object_count(); ++ob) {
              for (int e = 0; e < p.coeff[wi].card[ob]; ++e) {
                if (cc[ob][e] != cb[ob][ca[ob][e]]) {
                  r.violations.push_back(
                      "transport functoriality fails on pair (hom " + std::to_string(i) +
                      ": " + std::to_string(wi) + "->" + std::to_string(wj) + ", hom " +
                      std::to_string(j) + ": " + std::to_string(wj) + "->" +
                      std::to_string(wk) + ")");
                  ob = b.object_count();
                  break;
                }
              }
            }
          }
        }
      }
    }
  }
  return r;
}

namespace {

Species make_skeleton(const CatPtr& dom_base, const CatPtr& cod_base, int degree) {
  Species p;
  p.dom_base = dom_base;
  p.cod_base = cod_base;
  p.degree = degree;
  p.words = enumerate_words(dom_base, degree);
  return p;
}

void fill_transports(Species& p,
                     const std::function<std::vector<int>(int, int, const SmcMor&, int)>& map) {
  // map(wi, wj, alpha, b) -> component at cod object b
  const FinCat& bc = *p.cod_base;
  for (int wi = 0; wi < p.word_count(); ++wi) {
    for (int wj = 0; wj < p.word_count(); ++wj) {
      if (p.words[wi].size() != p.words[wj].size()) continue;
      auto hs = enumerate_homs(p.words[wi], p.words[wj]);
      std::vector<Components> per_rank;
      per_rank.reserve(hs.size());
      for (const auto& alpha : hs) {
        Components comps(bc.object_count());
        for (int b = 0; b < bc.object_count(); ++b) comps[b] = map(wi, wj, alpha, b);
        per_rank.push_back(std::move(comps));
      }
      p.action[{wi, wj}] = std::move(per_rank);
    }
  }
}

}  // namespace

Species terminal_species(const CatPtr& dom_base, const CatPtr& cod_base, int degree) {
  Species p = make_skeleton(dom_base, cod_base, degree);
  for (std::size_t i = 0; i < p.words.size(); ++i)
    p.coeff.push_back(terminal_presheaf(cod_base));
  fill_transports(p, [&](int, int, const SmcMor&, int) { return std::vector<int>{0}; });
  return p;
}

Species empty_species(const CatPtr& dom_base, const CatPtr& cod_base, int degree) {
  Species p = make_skeleton(dom_base, cod_base, degree);
  for (std::size_t i = 0; i < p.words.size(); ++i)
    p.coeff.push_back(empty_presheaf(cod_base));
  fill_transports(p, [&](int, int, const SmcMor&, int) { return std::vector<int>{}; });
  return p;
}

Species species_sum(const Species& p, const Species& q) {
  if (p.dom_base.get() != q.dom_base.get() || p.cod_base.get() != q.cod_base.get() ||
      p.degree != q.degree)
    throw std::invalid_argument("species_sum: mismatched shapes");
  Species s = make_skeleton(p.dom_base, p.cod_base, p.degree);
  const FinCat& bc = *p.cod_base;
  for (int w = 0; w < s.word_count(); ++w) {
    Presheaf x{p.cod_base, {}, {}};
    for (int b = 0; b < bc.object_count(); ++b)
      x.card.push_back(p.coeff[w].card[b] + q.coeff[w].card[b]);
    x.action.resize(bc.morphism_count());
    for (int m = 0; m < bc.morphism_count(); ++m) {
      int off_dom = p.coeff[w].card[bc.dom(m)];
      for (int e : p.coeff[w].action[m]) x.action[m].push_back(e);
      for (int e : q.coeff[w].action[m]) x.action[m].push_back(off_dom + e);
    }
    s.coeff.push_back(std::move(x));
  }
  fill_transports(s, [&](int wi, int wj, const SmcMor& alpha, int b) {
    int rank = hom_rank(alpha);
    const auto& cp = p.transport_comp(wi, wj, rank)[b];
    const auto& cq = q.transport_comp(wi, wj, rank)[b];
    std::vector<int> out;
    int off = p.coeff[wj].card[b];
    for (int e : cp) out.push_back(e);
    for (int e : cq) out.push_back(off + e);
    return out;
  });
  return s;
}

Species block_species(const Word& w0, const std::vector<SmcMor>& h, const Presheaf& y,
                      int degree) {
  const CatPtr dom_base = w0.base;
  const CatPtr cod_base = y.base;
  Species p = make_skeleton(dom_base, cod_base, degree);
  const FinCat& bc = *cod_base;

  // orbit the hom-sets hom(w0, w) under precomposition by the subgroup
  const int nw = p.word_count();
  std::vector<std::vector<SmcMor>> homs0(nw);
  std::vector<std::vector<int>> class_of_rank(nw);
  std::vector<int> n_classes(nw, 0);
  for (int w = 0; w < nw; ++w) {
    if (p.words[w].size() != w0.size()) continue;
    homs0[w] = enumerate_homs(w0, p.words[w]);
    const int n = static_cast<int>(homs0[w].size());
    std::vector<int> orbit_min(n);
    for (int r = 0; r < n; ++r) {
      int least = r;
      for (const auto& g : h) {
        int rr = hom_rank(smc_compose(g, homs0[w][r]));
        least = std::min(least, rr);
      }
      orbit_min[r] = least;
    }
    // stabilize (h need not be closed pointwise in one pass)
    bool changed = true;
    while (changed) {
      changed = false;
      for (int r = 0; r < n; ++r)
        if (orbit_min[orbit_min[r]] < orbit_min[r]) {
          orbit_min[r] = orbit_min[orbit_min[r]];
          changed = true;
        }
      for (int r = 0; r < n; ++r) {
        for (const auto& g : h) {
          int rr = hom_rank(smc_compose(g, homs0[w][r]));
          int lo = std::min(orbit_min[r], orbit_min[rr]);
          if (orbit_min[r] != lo || orbit_min[rr] != lo) {
            orbit_min[r] = orbit_min[rr] = lo;
            changed = true;
          }
        }
      }
    }
    std::vector<int> reps;
    for (int r = 0; r < n; ++r)
      if (orbit_min[r] == r) reps.push_back(r);
    class_of_rank[w].resize(n);
    for (int r = 0; r < n; ++r) {
      auto it = std::lower_bound(reps.begin(), reps.end(), orbit_min[r]);
      class_of_rank[w][r] = static_cast<int>(it - reps.begin());
    }
    n_classes[w] = static_cast<int>(reps.size());
  }

  for (int w = 0; w < nw; ++w) {
    Presheaf x{cod_base, {}, {}};
    for (int b = 0; b < bc.object_count(); ++b) x.card.push_back(n_classes[w] * y.card[b]);
    x.action.resize(bc.morphism_count());
    for (int m = 0; m < bc.morphism_count(); ++m) {
      int cb = bc.cod(m), db = bc.dom(m);
      x.action[m].resize(n_classes[w] * y.card[cb]);
      for (int cls = 0; cls < n_classes[w]; ++cls)
        for (int e = 0; e < y.card[cb]; ++e)
          x.action[m][cls * y.card[cb] + e] = cls * y.card[db] + y.action[m][e];
    }
    p.coeff.push_back(std::move(x));
  }

  fill_transports(p, [&](int wi, int wj, const SmcMor& beta, int b) {
    std::vector<int> out(n_classes[wi] * y.card[b]);
    if (out.empty()) return out;
    // class representative alpha |-> class of alpha;beta
    std::vector<int> cls_map(n_classes[wi]);
    {
      std::vector<int> seen(n_classes[wi], -1);
      for (std::size_t r = 0; r < homs0[wi].size(); ++r) {
        int c = class_of_rank[wi][r];
        if (seen[c] >= 0) continue;
        seen[c] = 1;
        cls_map[c] = class_of_rank[wj][hom_rank(smc_compose(homs0[wi][r], beta))];
      }
    }
    for (int cls = 0; cls < n_classes[wi]; ++cls)
      for (int e = 0; e < y.card[b]; ++e)
        out[cls * y.card[b] + e] = cls_map[cls] * y.card[b] + e;
    return out;
  });
  return p;
}

Species identity_species(const CatPtr& base, int degree) {
  Species p = make_skeleton(base, base, degree);
  const FinCat& c = *base;
  for (int w = 0; w < p.word_count(); ++w) {
    if (p.words[w].size() == 1)
      p.coeff.push_back(yoneda(base, p.words[w].letters[0]));
    else
      p.coeff.push_back(empty_presheaf(base));
  }
  fill_transports(p, [&](int wi, int wj, const SmcMor& alpha, int b) {
    std::vector<int> out;
    if (p.words[wi].size() != 1) return out;
    // post-composition hom(b, c) -> hom(b, c') along the single family member
    const Presheaf& from = p.coeff[wi];
    auto to_hom = c.hom(b, p.words[wj].letters[0]);
    auto from_hom = c.hom(b, p.words[wi].letters[0]);
    out.resize(from.card[b]);
    for (int e = 0; e < from.card[b]; ++e) {
      int g = c.compose(from_hom[e], alpha.family[0]);
      auto it = std::find(to_hom.begin(), to_hom.end(), g);
      out[e] = static_cast<int>(it - to_hom.begin());
    }
    return out;
  });
  return p;
}

QuotientResult quotient_species(const Species& p,
                                const std::vector<std::array<int, 4>>& pairs) {
  const FinCat& bc = *p.cod_base;
  // dense vertex space over all (word, cod object, element)
  std::vector<std::vector<int>> offset(p.word_count(),
                                       std::vector<int>(bc.object_count(), 0));
  int total = 0;
  for (int w = 0; w < p.word_count(); ++w)
    for (int b = 0; b < bc.object_count(); ++b) {
      offset[w][b] = total;
      total += p.coeff[w].card[b];
    }
  auto vx = [&](int w, int b, int e) { return offset[w][b] + e; };

  UnionFind uf(total);
  for (const auto& pr : pairs) uf.unite(vx(pr[0], pr[1], pr[2]), vx(pr[0], pr[1], pr[3]));

  // congruence closure under transports and cod actions
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [key, per_rank] : p.action) {
      auto [wi, wj] = key;
      for (const auto& comps : per_rank) {
        for (int b = 0; b < bc.object_count(); ++b) {
          for (int e1 = 0; e1 < p.coeff[wi].card[b]; ++e1)
            for (int e2 = e1 + 1; e2 < p.coeff[wi].card[b]; ++e2)
              if (uf.find(vx(wi, b, e1)) == uf.find(vx(wi, b, e2)))
                changed |= uf.unite(vx(wj, b, comps[b][e1]), vx(wj, b, comps[b][e2]));
        }
      }
    }
    for (int w = 0; w < p.word_count(); ++w) {
      for (int m = 0; m < bc.morphism_count(); ++m) {
        int cb = bc.cod(m), db = bc.dom(m);
        for (int e1 = 0; e1 < p.coeff[w].card[cb]; ++e1)
          for (int e2 = e1 + 1; e2 < p.coeff[w].card[cb]; ++e2)
            if (uf.find(vx(w, cb, e1)) == uf.find(vx(w, cb, e2)))
              changed |= uf.unite(vx(w, db, p.coeff[w].action[m][e1]),
                                  vx(w, db, p.coeff[w].action[m][e2]));
      }
    }
  }

  // dense class ids per (word, object), ordered by least member
  std::vector<int> cls_of(total, -1);
  std::vector<std::vector<int>> counts(p.word_count(),
                                       std::vector<int>(bc.object_count(), 0));
  for (int w = 0; w < p.word_count(); ++w)
    for (int b = 0; b < bc.object_count(); ++b) {
      int next = 0;
      for (int e = 0; e < p.coeff[w].card[b]; ++e) {
        int root = uf.find(vx(w, b, e));
        if (cls_of[root] < 0) cls_of[root] = next++;
        cls_of[vx(w, b, e)] = cls_of[root];
      }
      counts[w][b] = next;
    }

  QuotientResult out;
  Species& q = out.q;
  q = make_skeleton(p.dom_base, p.cod_base, p.degree);
  for (int w = 0; w < p.word_count(); ++w) {
    Presheaf x{p.cod_base, counts[w], {}};
    x.action.resize(bc.morphism_count());
    for (int m = 0; m < bc.morphism_count(); ++m) {
      int cb = bc.cod(m);
      x.action[m].assign(counts[w][cb], -1);
      for (int e = 0; e < p.coeff[w].card[cb]; ++e)
        x.action[m][cls_of[vx(w, cb, e)]] =
            cls_of[vx(w, bc.dom(m), p.coeff[w].action[m][e])];
    }
    q.coeff.push_back(std::move(x));
  }
  for (const auto& [key, per_rank] : p.action) {
    auto [wi, wj] = key;
    std::vector<Components> out_ranks;
    for (const auto& comps : per_rank) {
      Components cq(bc.object_count());
      for (int b = 0; b < bc.object_count(); ++b) {
        cq[b].assign(counts[wi][b], -1);
        for (int e = 0; e < p.coeff[wi].card[b]; ++e)
          cq[b][cls_of[vx(wi, b, e)]] = cls_of[vx(wj, b, comps[b][e])];
      }
      out_ranks.push_back(std::move(cq));
    }
    q.action[key] = std::move(out_ranks);
  }
  out.proj.resize(p.word_count());
  for (int w = 0; w < p.word_count(); ++w) {
    out.proj[w].resize(bc.object_count());
    for (int b = 0; b < bc.object_count(); ++b) {
      out.proj[w][b].resize(p.coeff[w].card[b]);
      for (int e = 0; e < p.coeff[w].card[b]; ++e)
        out.proj[w][b][e] = cls_of[vx(w, b, e)];
    }
  }
  return out;
}

bool coeff_nat_is_natural(const CoeffNat& phi) {
  const Species& p = *phi.dom;
  const Species& q = *phi.cod;
  if (p.dom_base.get() != q.dom_base.get() || p.cod_base.get() != q.cod_base.get())
    return false;
  const FinCat& bc = *p.cod_base;
  if (static_cast<int>(phi.comp.size()) != p.word_count()) return false;
  for (int w = 0; w < p.word_count(); ++w) {
    if (static_cast<int>(phi.comp[w].size()) != bc.object_count()) return false;
    for (int b = 0; b < bc.object_count(); ++b) {
      if (static_cast<int>(phi.comp[w][b].size()) != p.coeff[w].card[b]) return false;
      for (int e : phi.comp[w][b])
        if (e < 0 || e >= q.coeff[w].card[b]) return false;
    }
    // cod-base naturality
    for (int m = 0; m < bc.morphism_count(); ++m) {
      int cb = bc.cod(m), db = bc.dom(m);
      for (int e = 0; e < p.coeff[w].card[cb]; ++e)
        if (phi.comp[w][db][p.coeff[w].action[m][e]] !=
            q.coeff[w].action[m][phi.comp[w][cb][e]])
          return false;
    }
  }
  // transport naturality
  for (const auto& [key, per_rank] : p.action) {
    auto [wi, wj] = key;
    const auto& q_ranks = q.action.at(key);
    for (std::size_t r = 0; r < per_rank.size(); ++r) {
      for (int b = 0; b < bc.object_count(); ++b) {
        for (int e = 0; e < p.coeff[wi].card[b]; ++e)
          if (phi.comp[wj][b][per_rank[r][b][e]] != q_ranks[r][b][phi.comp[wi][b][e]])
            return false;
      }
    }
  }
  return true;
}

CoeffNat coeff_nat_identity(const Species& p) {
  CoeffNat phi;
  phi.dom = &p;
  phi.cod = &p;
  const FinCat& bc = *p.cod_base;
  for (int w = 0; w < p.word_count(); ++w) {
    Components comps(bc.object_count());
    for (int b = 0; b < bc.object_count(); ++b) {
      comps[b].resize(p.coeff[w].card[b]);
      std::iota(comps[b].begin(), comps[b].end(), 0);
    }
    phi.comp.push_back(std::move(comps));
  }
  return phi;
}

bool operator==(const Triple& a, const Triple& b) {
  return a.word == b.word && a.p == b.p && a.xs == b.xs;
}
bool operator<(const Triple& a, const Triple& b) {
  if (a.word != b.word) return a.word < b.word;
  if (a.p != b.p) return a.p < b.p;
  return a.xs < b.xs;
}

LanEval::LanEval(const Species& p, const Presheaf& x) : p_(&p), x_(x) {
  if (x.base.get() != p.dom_base.get())
    throw std::invalid_argument("lan_eval: argument over the wrong base");
  const FinCat& bc = *p.cod_base;
  const int nw = p.word_count();

  // tuple strides per word
  std::vector<long long> tuple_count(nw, 1);
  std::vector<std::vector<long long>> stride(nw);
  for (int w = 0; w < nw; ++w) {
    const auto& ls = p.words[w].letters;
    stride[w].assign(ls.size(), 1);
    for (int i = static_cast<int>(ls.size()) - 2; i >= 0; --i)
      stride[w][i] = stride[w][i + 1] * x.card[ls[i + 1]];
    for (int i = 0; i < static_cast<int>(ls.size()); ++i)
      tuple_count[w] *= x.card[ls[i]];
  }

  value_.base = p.cod_base;
  value_.card.assign(bc.object_count(), 0);
  value_.action.resize(bc.morphism_count());
  reps_.resize(bc.object_count());
  offsets_.resize(bc.object_count());
  class_of_vertex_.resize(bc.object_count());

  // hom sets between equal-length words, shared across cod objects
  std::map<std::pair<int, int>, std::vector<SmcMor>> homs;
  for (int wi = 0; wi < nw; ++wi)
    for (int wj = 0; wj < nw; ++wj)
      if (p.words[wi].size() == p.words[wj].size())
        homs[{wi, wj}] = homs_between(p.words[wi], p.words[wj]);

  for (int b = 0; b < bc.object_count(); ++b) {
    auto& off = offsets_[b];
    off.assign(nw + 1, 0);
    for (int w = 0; w < nw; ++w)
      off[w + 1] = off[w] + static_cast<long long>(p.coeff[w].card[b]) * tuple_count[w];
    const long long nv = off[nw];
    UnionFind uf(static_cast<int>(nv));

    std::vector<int> xs, ys;
    for (const auto& [key, hs] : homs) {
      auto [wi, wj] = key;
      const int k = p.words[wi].size();
      const auto& lj = p.words[wj].letters;
      const long long tcount = tuple_count[wj];
      if (tcount == 0 || p.coeff[wi].card[b] == 0) continue;
      for (std::size_t r = 0; r < hs.size(); ++r) {
        const SmcMor& alpha = hs[r];
        const auto& comps = p.transport_comp(wi, wj, static_cast<int>(r))[b];
        xs.assign(k, 0);
        for (long long t = 0; t < tcount; ++t) {
          // pull the tuple back along alpha
          ys.assign(k, 0);
          for (int i = 0; i < k; ++i)
            ys[i] = x.action[alpha.family[i]][xs[alpha.perm[i]]];
          long long yrank = 0;
          for (int i = 0; i < k; ++i) yrank += stride[wi][i] * ys[i];
          for (int pe = 0; pe < p.coeff[wi].card[b]; ++pe) {
            long long va = off[wi] + pe * tuple_count[wi] + yrank;
            long long vb = off[wj] + static_cast<long long>(comps[pe]) * tcount + t;
            uf.unite(static_cast<int>(va), static_cast<int>(vb));
          }
          // advance the tuple odometer
          for (int i = k - 1; i >= 0; --i) {
            if (++xs[i] < x.card[lj[i]]) break;
            xs[i] = 0;
          }
        }
      }
    }

    auto& cls = class_of_vertex_[b];
    cls.assign(nv, -1);
    int next = 0;
    for (long long v = 0; v < nv; ++v) {
      int root = uf.find(static_cast<int>(v));
      if (cls[root] < 0) {
        cls[root] = next++;
        // decode the root vertex into its representative triple
        int w = 0;
        while (off[w + 1] <= v) ++w;
        long long rest = v - off[w];
        Triple t;
        t.word = w;
        t.p = static_cast<int>(rest / tuple_count[w]);
        long long tr = rest % tuple_count[w];
        t.xs.resize(p.words[w].size());
        for (int i = 0; i < p.words[w].size(); ++i) {
          t.xs[i] = static_cast<int>(tr / stride[w][i]);
          tr %= stride[w][i];
        }
        reps_[b].push_back(std::move(t));
      }
      cls[v] = cls[root];
    }
    value_.card[b] = next;
  }

  // cod-base action on classes via coefficient actions
  for (int m = 0; m < bc.morphism_count(); ++m) {
    int cb = bc.cod(m), db = bc.dom(m);
    value_.action[m].resize(value_.card[cb]);
    for (int cl = 0; cl < value_.card[cb]; ++cl) {
      const Triple& t = reps_[cb][cl];
      Triple u{t.word, p.coeff[t.word].action[m][t.p], t.xs};
      value_.action[m][cl] = class_of(db, u);
    }
  }
}

long long LanEval::vertex_of(int b, const Triple& t) const {
  const Species& p = *p_;
  const auto& off = offsets_.at(b);
  const auto& ls = p.words.at(t.word).letters;
  if (t.p < 0 || t.p >= p.coeff[t.word].card[b])
    throw std::invalid_argument("class_of: coefficient element out of range");
  long long rank = 0;
  long long stride = 1;
  for (int i = static_cast<int>(ls.size()) - 1; i >= 0; --i) {
    if (t.xs[i] < 0 || t.xs[i] >= x_.card[ls[i]])
      throw std::invalid_argument("class_of: tuple element out of range");
    rank += stride * t.xs[i];
    stride *= x_.card[ls[i]];
  }
  return off[t.word] + static_cast<long long>(t.p) * stride + rank;
}

int LanEval::class_of(int b, const Triple& t) const {
  return class_of_vertex_.at(b).at(vertex_of(b, t));
}

std::string LanEval::describe(int b, int cls) const {
  const Triple& t = rep(b, cls);
  const Species& p = *p_;
  std::ostringstream out;
  out << "[";
  for (int i = 0; i < p.words[t.word].size(); ++i) {
    if (i) out << ",";
    out << p.dom_base->object_name(p.words[t.word].letters[i]);
  }
  out << "] |> p" << t.p << " (";
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    if (i) out << ",";
    out << t.xs[i];
  }
  out << ")";
  return out.str();
}

LanEval lan_eval(const Species& p, const Presheaf& x) { return LanEval(p, x); }

NatTrans lan_map(const LanEval& lx, const LanEval& ly, const NatTrans& f) {
  NatTrans out{lx.value(), ly.value(), {}};
  lan_map_comp(lx, ly, f, out.comp);
  return out;
}

void lan_map_comp(const LanEval& lx, const LanEval& ly, const NatTrans& f,
                  Components& out) {
  if (&lx.species() != &ly.species())
    throw std::invalid_argument("lan_map: evaluations of different species");
  if (!(f.dom == lx.argument()) || !(f.cod == ly.argument()))
    throw std::invalid_argument("lan_map: endpoints do not match the evaluations");
  const Species& p = lx.species();
  const FinCat& bc = *p.cod_base;
  out.resize(bc.object_count());
  Triple t;
  for (int b = 0; b < bc.object_count(); ++b) {
    out[b].resize(lx.class_count(b));
    for (int cl = 0; cl < lx.class_count(b); ++cl) {
      t = lx.rep(b, cl);
      const auto& ls = p.words[t.word].letters;
      for (std::size_t i = 0; i < t.xs.size(); ++i) t.xs[i] = f.comp[ls[i]][t.xs[i]];
      out[b][cl] = ly.class_of(b, t);
    }
  }
}

NatTrans lan_nat_at(const CoeffNat& phi, const LanEval& lpx, const LanEval& lqx) {
  if (phi.dom != &lpx.species() || phi.cod != &lqx.species())
    throw std::invalid_argument("lan_nat_at: species mismatch");
  if (!(lpx.argument() == lqx.argument()))
    throw std::invalid_argument("lan_nat_at: different arguments");
  const FinCat& bc = *phi.dom->cod_base;
  NatTrans out{lpx.value(), lqx.value(), {}};
  out.comp.resize(bc.object_count());
  for (int b = 0; b < bc.object_count(); ++b) {
    out.comp[b].resize(lpx.class_count(b));
    for (int cl = 0; cl < lpx.class_count(b); ++cl) {
      Triple t = lpx.rep(b, cl);
      t.p = phi.apply(t.word, b, t.p);
      out.comp[b][cl] = lqx.class_of(b, t);
    }
  }
  return out;
}

TaylorEval taylor_eval(const Species& p, const Presheaf& x) {
  if (x.base.get() != p.dom_base.get())
    throw std::invalid_argument("taylor_eval: argument over the wrong base");
  const FinCat& ac = *p.dom_base;
  const FinCat& bc = *p.cod_base;
  const int nobj = ac.object_count();

  // vertex space enumerated over explicit object tuples, graded by length;
  // the tuple sequence coincides with the graded-lex word order, so block
  // index == word rank
  struct Block {
    std::vector<int> tuple;  // objects a_1..a_n
    int word;                // species word rank of the induced word
    long long tuples;        // argument tuple count
    long long offset;
  };
  std::vector<std::vector<int>> tuple_seq;
  for (int n = 0; n <= p.degree; ++n) {
    std::vector<int> objs(n, 0);
    if (n > 0 && nobj == 0) break;
    while (true) {
      tuple_seq.push_back(objs);
      if (n == 0) break;
      int i = n - 1;
      while (i >= 0 && objs[i] + 1 == nobj) objs[i--] = 0;
      if (i < 0) break;
      ++objs[i];
    }
  }

  TaylorEval out;
  out.value.base = p.cod_base;
  out.value.card.assign(bc.object_count(), 0);
  out.value.action.resize(bc.morphism_count());
  out.reps.resize(bc.object_count());
  out.to_lan.resize(bc.object_count());

  std::vector<std::vector<Block>> blocks_by_b(bc.object_count());
  std::vector<std::vector<int>> cls_by_b(bc.object_count());

  for (int b = 0; b < bc.object_count(); ++b) {
    std::vector<Block>& blocks = blocks_by_b[b];
    long long total = 0;
    for (const auto& objs : tuple_seq) {
      Block blk;
      blk.tuple = objs;
      blk.word = word_rank(Word{p.dom_base, objs});
      if (blk.word != static_cast<int>(blocks.size()))
        throw std::logic_error("taylor_eval: tuple order out of sync with word ranks");
      blk.tuples = 1;
      for (int o : objs) blk.tuples *= x.card[o];
      blk.offset = total;
      total += static_cast<long long>(p.coeff[blk.word].card[b]) * blk.tuples;
      blocks.push_back(std::move(blk));
    }

    auto vertex = [&](const Block& blk, int pe, const std::vector<int>& xs) {
      long long rank = 0;
      for (std::size_t i = 0; i < xs.size(); ++i)
        rank = rank * x.card[blk.tuple[i]] + xs[i];
      return blk.offset + static_cast<long long>(pe) * blk.tuples + rank;
    };

    UnionFind uf(static_cast<int>(total));

    // relation edges: one per permutation-with-families between tuples
    for (const auto& src : blocks) {
      const int n = static_cast<int>(src.tuple.size());
      if (p.coeff[src.word].card[b] == 0) continue;
      for (const auto& dst : blocks) {
        if (static_cast<int>(dst.tuple.size()) != n) continue;
        if (dst.tuples == 0) continue;
        std::vector<int> sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        do {
          std::vector<std::vector<int>> fams(n);
          bool ok = true;
          for (int i = 0; i < n && ok; ++i) {
            fams[i] = ac.hom(src.tuple[i], dst.tuple[sigma[i]]);
            ok = !fams[i].empty();
          }
          if (!ok) continue;
          std::vector<int> pick(n, 0);
          while (true) {
            SmcMor alpha{Word{p.dom_base, src.tuple}, Word{p.dom_base, dst.tuple}, sigma,
                         std::vector<int>(n)};
            for (int i = 0; i < n; ++i) alpha.family[i] = fams[i][pick[i]];
            const auto& comps = p.transport_comp(src.word, dst.word, hom_rank(alpha));
            // (src, pe, pulled tuple) ~ (dst, comps(pe), tuple)
            std::vector<int> xs(n, 0), ys(n, 0);
            for (long long t = 0; t < dst.tuples; ++t) {
              for (int i = 0; i < n; ++i) ys[i] = x.action[alpha.family[i]][xs[sigma[i]]];
              for (int pe = 0; pe < p.coeff[src.word].card[b]; ++pe)
                uf.unite(static_cast<int>(vertex(src, pe, ys)),
                         static_cast<int>(vertex(dst, comps[b][pe], xs)));
              for (int i = n - 1; i >= 0; --i) {
                if (++xs[i] < x.card[dst.tuple[i]]) break;
                xs[i] = 0;
              }
            }
            int i = n - 1;
            while (i >= 0 && pick[i] + 1 == static_cast<int>(fams[i].size())) pick[i--] = 0;
            if (i < 0) break;
            ++pick[i];
          }
        } while (std::next_permutation(sigma.begin(), sigma.end()));
      }
    }

    std::vector<int>& cls = cls_by_b[b];
    cls.assign(total, -1);
    int next = 0;
    for (long long v = 0; v < total; ++v) {
      int root = uf.find(static_cast<int>(v));
      if (cls[root] < 0) {
        cls[root] = next++;
        // decode the representative
        std::size_t bi = 0;
        while (bi + 1 < blocks.size() && blocks[bi + 1].offset <= v) ++bi;
        const Block& blk = blocks[bi];
        long long rest = v - blk.offset;
        Triple t;
        t.word = blk.word;
        t.p = static_cast<int>(rest / blk.tuples);
        long long tr = rest % blk.tuples;
        t.xs.assign(blk.tuple.size(), 0);
        for (int i = static_cast<int>(blk.tuple.size()) - 1; i >= 0; --i) {
          t.xs[i] = static_cast<int>(tr % x.card[blk.tuple[i]]);
          tr /= x.card[blk.tuple[i]];
        }
        out.reps[b].push_back(std::move(t));
      }
      cls[v] = cls[root];
    }
    out.value.card[b] = next;
  }

  // cod-base action, computed through this evaluation's own class tables
  for (int m = 0; m < bc.morphism_count(); ++m) {
    int cb = bc.cod(m), db = bc.dom(m);
    out.value.action[m].resize(out.value.card[cb]);
    for (int cl = 0; cl < out.value.card[cb]; ++cl) {
      Triple t = out.reps[cb][cl];
      int pe = p.coeff[t.word].action[m][t.p];
      const Block& blk = blocks_by_b[db][t.word];
      long long rank = 0;
      for (std::size_t i = 0; i < t.xs.size(); ++i)
        rank = rank * x.card[blk.tuple[i]] + t.xs[i];
      out.value.action[m][cl] =
          cls_by_b[db][blk.offset + static_cast<long long>(pe) * blk.tuples + rank];
    }
  }

  // the witnessed comparison against the coend form
  LanEval lan(p, x);
  out.bijective = true;
  for (int b = 0; b < bc.object_count(); ++b) {
    out.to_lan[b].resize(out.value.card[b]);
    std::vector<bool> hit(lan.class_count(b), false);
    if (out.value.card[b] != lan.class_count(b)) out.bijective = false;
    for (int cl = 0; cl < out.value.card[b]; ++cl) {
      int target = lan.class_of(b, out.reps[b][cl]);
      out.to_lan[b][cl] = target;
      if (hit[target]) out.bijective = false;
      hit[target] = true;
    }
  }
  return out;
}

AlgebraChain initial_algebra_chain(const Species& p, int steps) {
  if (p.dom_base.get() != p.cod_base.get())
    throw std::invalid_argument("initial_algebra_chain: species is not an endofunctor");
  AlgebraChain chain;
  chain.stages.push_back(empty_presheaf(p.dom_base));
  std::vector<LanEval> evals;
  for (int i = 0; i < steps; ++i) {
    evals.emplace_back(p, chain.stages.back());
    chain.stages.push_back(evals.back().value());
    if (i == 0) {
      NatTrans k0{chain.stages[0], chain.stages[1],
                  std::vector<std::vector<int>>(p.dom_base->object_count())};
      chain.connecting.push_back(std::move(k0));
    } else {
      chain.connecting.push_back(
          lan_map(evals[i - 1], evals[i], chain.connecting.back()));
    }
  }
  if (!chain.connecting.empty())
    chain.stabilized = morphism_class(chain.connecting.back()).iso;
  return chain;
}

PreservationReport preserves_quasi_pullbacks(const Species& p,
                                             const std::vector<QpbProbe>& probes) {
  PreservationReport report;
  report.guarantee = p.dom_base->is_groupoid();
  // probes share endpoints heavily, so evaluations are memoized by argument
  std::map<Presheaf, LanEval, decltype(&presheaf_less)> cache(&presheaf_less);
  auto at = [&](const Presheaf& x) -> const LanEval& {
    auto it = cache.find(x);
    if (it == cache.end()) it = cache.emplace(x, LanEval(p, x)).first;
    return it->second;
  };
  for (const auto& probe : probes) {
    if (!is_quasi_pullback(probe.cone, probe.cospan))
      throw std::invalid_argument("preserves_quasi_pullbacks: probe is not a quasi-pullback");
    ++report.probes;
    const LanEval& lq = at(probe.cone[0].dom);
    const LanEval& lz = at(probe.cospan[0].cod);
    std::vector<NatTrans> cone, cospan;
    for (std::size_t i = 0; i < probe.cone.size(); ++i) {
      const LanEval& ld = at(probe.cone[i].cod);
      cone.push_back(lan_map(lq, ld, probe.cone[i]));
      cospan.push_back(lan_map(ld, lz, probe.cospan[i]));
    }
    if (is_quasi_pullback(cone, cospan)) {
      ++report.preserved;
    } else {
      report.failures.push_back("image of probe " + std::to_string(report.probes - 1) +
                                " is not a quasi-pullback");
    }
  }
  return report;
}

}  // namespace specat
