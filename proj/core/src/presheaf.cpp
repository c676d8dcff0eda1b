#include "specat/presheaf.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace specat {

int Presheaf::total() const {
  int t = 0;
  for (int k : card) t += k;
  return t;
}

bool operator==(const Presheaf& x, const Presheaf& y) {
  return x.base.get() == y.base.get() && x.card == y.card && x.action == y.action;
}
bool operator!=(const Presheaf& x, const Presheaf& y) { return !(x == y); }

bool presheaf_less(const Presheaf& x, const Presheaf& y) {
  if (x.base.get() != y.base.get()) return x.base.get() < y.base.get();
  if (x.card != y.card) return x.card < y.card;
  return x.action < y.action;
}

ValidationReport presheaf_validate(const Presheaf& x) {
  ValidationReport r;
  const FinCat& c = *x.base;
  if (static_cast<int>(x.card.size()) != c.object_count())
    r.structural.push_back("carrier table has wrong size");
  if (static_cast<int>(x.action.size()) != c.morphism_count())
    r.structural.push_back("action table has wrong size");
  if (!r.structural.empty()) return r;
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (static_cast<int>(x.action[m].size()) != x.card[c.cod(m)]) {
      r.structural.push_back("action of " + c.morphism_name(m) + " has wrong arity");
      continue;
    }
    for (int e : x.action[m])
      if (e < 0 || e >= x.card[c.dom(m)])
        r.structural.push_back("action of " + c.morphism_name(m) + " lands out of range");
  }
  if (!r.structural.empty()) return r;
  for (int o = 0; o < c.object_count(); ++o) {
    int id = c.identity(o);
    for (int e = 0; e < x.card[o]; ++e)
      if (x.action[id][e] != e) {
        r.violations.push_back("identity action at " + c.object_name(o) + " moves elements");
        break;
      }
  }
  for (int f = 0; f < c.morphism_count(); ++f) {
    for (int g = 0; g < c.morphism_count(); ++g) {
      if (!c.composable(f, g)) continue;
      int fg = c.compose(f, g);
      // X(f;g) = X(f) o X(g) : X(cod g) -> X(dom f)
      for (int e = 0; e < x.card[c.cod(g)]; ++e) {
        if (x.action[fg][e] != x.action[f][x.action[g][e]]) {
          r.violations.push_back("functoriality fails on (" + c.morphism_name(f) + ";" +
                                 c.morphism_name(g) + ")");
          break;
        }
      }
    }
  }
  return r;
}

Presheaf empty_presheaf(const CatPtr& base) {
  Presheaf x{base, std::vector<int>(base->object_count(), 0), {}};
  x.action.assign(base->morphism_count(), {});
  return x;
}

Presheaf terminal_presheaf(const CatPtr& base) {
  Presheaf x{base, std::vector<int>(base->object_count(), 1), {}};
  x.action.assign(base->morphism_count(), {0});
  return x;
}

Presheaf yoneda(const CatPtr& base, int c) {
  if (c < 0 || c >= base->object_count())
    throw std::invalid_argument("yoneda: bad object index");
  const FinCat& cat = *base;
  Presheaf x{base, {}, {}};
  std::vector<std::vector<int>> carrier(cat.object_count());
  for (int d = 0; d < cat.object_count(); ++d) carrier[d] = cat.hom(d, c);
  for (int d = 0; d < cat.object_count(); ++d)
    x.card.push_back(static_cast<int>(carrier[d].size()));
  x.action.resize(cat.morphism_count());
  for (int m = 0; m < cat.morphism_count(); ++m) {
    // precomposition: hom(d, c) -> hom(d', c) along m : d' -> d
    const auto& from = carrier[cat.cod(m)];
    const auto& to = carrier[cat.dom(m)];
    x.action[m].resize(from.size());
    for (std::size_t e = 0; e < from.size(); ++e) {
      int g = cat.compose(m, from[e]);
      auto it = std::find(to.begin(), to.end(), g);
      x.action[m][e] = static_cast<int>(it - to.begin());
    }
  }
  return x;
}

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

Presheaf canonical_form(const Presheaf& x) {
  const FinCat& c = *x.base;
  std::vector<std::vector<std::vector<int>>> perms;
  for (int o = 0; o < c.object_count(); ++o) perms.push_back(all_permutations(x.card[o]));
  std::vector<std::size_t> pick(c.object_count(), 0);
  Presheaf best = x;
  bool first = true;
  while (true) {
    Presheaf y = x;
    // relabel: new element pi(e); action'[m] = pi_dom . action[m] . pi_cod^-1
    for (int m = 0; m < c.morphism_count(); ++m) {
      const auto& pd = perms[c.dom(m)][pick[c.dom(m)]];
      const auto& pc = perms[c.cod(m)][pick[c.cod(m)]];
      for (int e = 0; e < x.card[c.cod(m)]; ++e) y.action[m][pc[e]] = pd[x.action[m][e]];
    }
    if (first || presheaf_less(y, best)) best = y;
    first = false;
    int o = c.object_count() - 1;
    while (o >= 0 && pick[o] + 1 == perms[o].size()) pick[o--] = 0;
    if (o < 0) break;
    ++pick[o];
  }
  return best;
}

bool operator==(const NatTrans& f, const NatTrans& g) {
  return f.dom == g.dom && f.cod == g.cod && f.comp == g.comp;
}

NatTrans nat_identity(const Presheaf& x) {
  NatTrans f{x, x, {}};
  for (int k : x.card) {
    std::vector<int> id(k);
    std::iota(id.begin(), id.end(), 0);
    f.comp.push_back(std::move(id));
  }
  return f;
}

NatTrans nat_compose(const NatTrans& f, const NatTrans& g) {
  if (!(f.cod == g.dom)) throw std::invalid_argument("nat_compose: middle mismatch");
  NatTrans h{f.dom, g.cod, f.comp};
  for (std::size_t c = 0; c < h.comp.size(); ++c)
    for (int& e : h.comp[c]) e = g.comp[c][e];
  return h;
}

bool nat_is_natural(const NatTrans& f) {
  const FinCat& c = *f.dom.base;
  if (f.dom.base.get() != f.cod.base.get()) return false;
  for (std::size_t o = 0; o < f.comp.size(); ++o) {
    if (static_cast<int>(f.comp[o].size()) != f.dom.card[o]) return false;
    for (int e : f.comp[o])
      if (e < 0 || e >= f.cod.card[o]) return false;
  }
  for (int m = 0; m < c.morphism_count(); ++m) {
    int d = c.cod(m);
    for (int e = 0; e < f.dom.card[d]; ++e) {
      if (f.comp[c.dom(m)][f.dom.action[m][e]] != f.cod.action[m][f.comp[d][e]])
        return false;
    }
  }
  return true;
}

MorphismClass morphism_class(const NatTrans& f) {
  MorphismClass out{true, true, false};
  for (std::size_t c = 0; c < f.comp.size(); ++c) {
    std::vector<int> hits(f.cod.card[c], 0);
    for (int e : f.comp[c]) ++hits[e];
    for (int h : hits) {
      if (h > 1) out.mono = false;
      if (h == 0) out.epi = false;
    }
  }
  out.iso = out.mono && out.epi;
  return out;
}

int TaggedSum::index_of(int obj, int tag, int mor) const {
  const auto& es = elems.at(obj);
  for (std::size_t i = 0; i < es.size(); ++i)
    if (es[i].first == tag && es[i].second == mor) return static_cast<int>(i);
  throw std::invalid_argument("TaggedSum: no such element");
}

TaggedSum sum_of(const Word& w) {
  const FinCat& c = *w.base;
  TaggedSum s{w, Presheaf{w.base, std::vector<int>(c.object_count(), 0), {}}, {}};
  s.elems.resize(c.object_count());
  for (int d = 0; d < c.object_count(); ++d) {
    for (int i = 0; i < w.size(); ++i)
      for (int g : c.hom(d, w.letters[i])) s.elems[d].push_back({i, g});
    s.presheaf.card[d] = static_cast<int>(s.elems[d].size());
  }
  s.presheaf.action.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    const auto& from = s.elems[c.cod(m)];
    s.presheaf.action[m].resize(from.size());
    for (std::size_t e = 0; e < from.size(); ++e) {
      auto [i, g] = from[e];
      s.presheaf.action[m][e] = s.index_of(c.dom(m), i, c.compose(m, g));
    }
  }
  return s;
}

NatTrans sum_of(const SmcMor& m) {
  TaggedSum a = sum_of(m.dom), b = sum_of(m.cod);
  const FinCat& c = *m.dom.base;
  NatTrans f{a.presheaf, b.presheaf, {}};
  f.comp.resize(c.object_count());
  for (int d = 0; d < c.object_count(); ++d) {
    f.comp[d].resize(a.elems[d].size());
    for (std::size_t e = 0; e < a.elems[d].size(); ++e) {
      auto [i, g] = a.elems[d][e];
      f.comp[d][e] = b.index_of(d, m.perm[i], c.compose(g, m.family[i]));
    }
  }
  return f;
}

std::vector<int> underlying_function(const TaggedSum& a, const TaggedSum& b,
                                     const NatTrans& f) {
  if (!(f.dom == a.presheaf) || !(f.cod == b.presheaf))
    throw std::invalid_argument("underlying_function: endpoints are not the given sums");
  const FinCat& c = *a.word.base;
  std::vector<int> phi(a.word.size());
  for (int i = 0; i < a.word.size(); ++i) {
    int obj = a.word.letters[i];
    int e = a.index_of(obj, i, c.identity(obj));
    phi[i] = b.decode(obj, f.apply(obj, e)).first;
  }
  return phi;
}

IndexClass index_class(const TaggedSum& a, const TaggedSum& b, const NatTrans& f) {
  auto phi = underlying_function(a, b, f);
  IndexClass out;
  std::vector<int> hits(b.word.size(), 0);
  for (int j : phi) ++hits[j];
  out.injective = true;
  out.surjective = true;
  for (int h : hits) {
    if (h > 1) out.injective = false;
    if (h == 0) out.surjective = false;
  }
  out.bijective = out.injective && out.surjective;
  return out;
}

std::optional<SmcMor> lift_to_freesmc(const TaggedSum& a, const TaggedSum& b,
                                      const NatTrans& f) {
  auto cls = index_class(a, b, f);
  if (!cls.bijective) return std::nullopt;
  const FinCat& c = *a.word.base;
  SmcMor m{a.word, b.word, std::vector<int>(a.word.size()),
           std::vector<int>(a.word.size())};
  for (int i = 0; i < a.word.size(); ++i) {
    int obj = a.word.letters[i];
    int e = a.index_of(obj, i, c.identity(obj));
    auto [j, g] = b.decode(obj, f.apply(obj, e));
    m.perm[i] = j;
    m.family[i] = g;
  }
  if (!(sum_of(m) == f)) return std::nullopt;
  return m;
}

std::vector<NatTrans> hom_enumerate(const Presheaf& x, const Presheaf& y,
                                    int per_object_cap) {
  if (x.base.get() != y.base.get())
    throw std::invalid_argument("hom_enumerate: mismatched base");
  const FinCat& c = *x.base;
  for (int k : x.card)
    if (k > per_object_cap)
      throw std::length_error("hom_enumerate: carrier exceeds the size cap");
  // variables in (object, element) order
  std::vector<std::pair<int, int>> vars;
  for (int o = 0; o < c.object_count(); ++o)
    for (int e = 0; e < x.card[o]; ++e) vars.push_back({o, e});
  std::vector<std::vector<int>> comp(c.object_count());
  for (int o = 0; o < c.object_count(); ++o) comp[o].assign(x.card[o], -1);

  // naturality constraints touching a variable, precomputed:
  // for m : o' -> o and e in X(o), comp[o'][X(m)(e)] == Y(m)(comp[o][e])
  struct Constraint { int m, src_obj, src_e, dst_obj, dst_e; };
  std::vector<Constraint> cons;
  for (int m = 0; m < c.morphism_count(); ++m)
    for (int e = 0; e < x.card[c.cod(m)]; ++e)
      cons.push_back({m, c.cod(m), e, c.dom(m), x.action[m][e]});

  std::vector<NatTrans> out;
  std::vector<int> order(vars.size());
  std::iota(order.begin(), order.end(), 0);

  auto consistent = [&](int obj, int e) {
    for (const auto& k : cons) {
      if (k.src_obj == obj && k.src_e == e) {
        int v = comp[k.dst_obj][k.dst_e];
        if (v >= 0 && v != y.action[k.m][comp[obj][e]]) return false;
      }
      if (k.dst_obj == obj && k.dst_e == e) {
        int v = comp[k.src_obj][k.src_e];
        if (v >= 0 && comp[obj][e] != y.action[k.m][v]) return false;
      }
    }
    return true;
  };

  // iterative backtracking in lexicographic value order
  std::size_t depth = 0;
  std::vector<int> val(vars.size(), -1);
  while (true) {
    if (depth == vars.size()) {
      NatTrans f{x, y, comp};
      out.push_back(std::move(f));
      if (depth == 0) break;
      --depth;
      comp[vars[depth].first][vars[depth].second] = -1;
      continue;
    }
    auto [obj, e] = vars[depth];
    int start = val[depth] + 1;
    bool advanced = false;
    for (int v = start; v < y.card[obj]; ++v) {
      comp[obj][e] = v;
      if (consistent(obj, e)) {
        val[depth] = v;
        ++depth;
        if (depth < vars.size()) val[depth] = -1;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      comp[obj][e] = -1;
      val[depth] = -1;
      if (depth == 0) break;
      --depth;
      comp[vars[depth].first][vars[depth].second] = -1;
    }
  }
  return out;
}

std::uint64_t hom_count(const Presheaf& x, const Presheaf& y) {
  return hom_enumerate(x, y).size();
}

WidePullback wide_pullback(const std::vector<NatTrans>& legs) {
  if (legs.empty()) throw std::invalid_argument("wide_pullback: empty cospan");
  const Presheaf& z = legs[0].cod;
  for (const auto& l : legs)
    if (!(l.cod == z)) throw std::invalid_argument("wide_pullback: mismatched codomains");
  const FinCat& c = *z.base;
  const int k = static_cast<int>(legs.size());

  WidePullback out;
  out.apex.base = z.base;
  out.apex.card.assign(c.object_count(), 0);
  out.tuples.resize(c.object_count());
  for (int o = 0; o < c.object_count(); ++o) {
    std::vector<int> t(k, 0);
    bool any_empty = false;
    for (int i = 0; i < k; ++i)
      if (legs[i].dom.card[o] == 0) any_empty = true;
    if (any_empty) continue;
    while (true) {
      int target = legs[0].comp[o][t[0]];
      bool agree = true;
      for (int i = 1; i < k && agree; ++i) agree = legs[i].comp[o][t[i]] == target;
      if (agree) out.tuples[o].push_back(t);
      int i = k - 1;
      while (i >= 0 && t[i] + 1 == legs[i].dom.card[o]) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
    out.apex.card[o] = static_cast<int>(out.tuples[o].size());
  }
  out.apex.action.resize(c.morphism_count());
  auto tuple_index = [&](int o, const std::vector<int>& t) {
    auto it = std::lower_bound(out.tuples[o].begin(), out.tuples[o].end(), t);
    return static_cast<int>(it - out.tuples[o].begin());
  };
  for (int m = 0; m < c.morphism_count(); ++m) {
    int src = c.cod(m), dst = c.dom(m);
    out.apex.action[m].resize(out.apex.card[src]);
    for (int e = 0; e < out.apex.card[src]; ++e) {
      std::vector<int> t(k);
      for (int i = 0; i < k; ++i) t[i] = legs[i].dom.action[m][out.tuples[src][e][i]];
      out.apex.action[m][e] = tuple_index(dst, t);
    }
  }
  for (int i = 0; i < k; ++i) {
    NatTrans pr{out.apex, legs[i].dom, {}};
    pr.comp.resize(c.object_count());
    for (int o = 0; o < c.object_count(); ++o) {
      pr.comp[o].resize(out.apex.card[o]);
      for (int e = 0; e < out.apex.card[o]; ++e) pr.comp[o][e] = out.tuples[o][e][i];
    }
    out.projections.push_back(std::move(pr));
  }
  return out;
}

bool is_quasi_pullback(const std::vector<NatTrans>& cone,
                       const std::vector<NatTrans>& cospan) {
  if (cone.size() != cospan.size() || cone.empty())
    throw std::invalid_argument("is_quasi_pullback: leg count mismatch");
  const int k = static_cast<int>(cone.size());
  NatTrans first = nat_compose(cone[0], cospan[0]);
  for (int i = 1; i < k; ++i)
    if (!(nat_compose(cone[i], cospan[i]) == first))
      throw std::invalid_argument("is_quasi_pullback: the given diagram does not commute");
  const FinCat& c = *first.dom.base;
  const Presheaf& q = cone[0].dom;
  for (int o = 0; o < c.object_count(); ++o) {
    // every agreeing tuple must be hit by some apex element
    std::vector<int> t(k, 0);
    bool any_empty = false;
    for (int i = 0; i < k; ++i)
      if (cospan[i].dom.card[o] == 0) any_empty = true;
    if (any_empty) continue;
    while (true) {
      int target = cospan[0].comp[o][t[0]];
      bool agree = true;
      for (int i = 1; i < k && agree; ++i) agree = cospan[i].comp[o][t[i]] == target;
      if (agree) {
        bool hit = false;
        for (int e = 0; e < q.card[o] && !hit; ++e) {
          hit = true;
          for (int i = 0; i < k && hit; ++i) hit = cone[i].comp[o][e] == t[i];
        }
        if (!hit) return false;
      }
      int i = k - 1;
      while (i >= 0 && t[i] + 1 == cospan[i].dom.card[o]) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
  }
  return true;
}

bool is_quasi_pullback(const NatTrans& h, const NatTrans& k, const NatTrans& f,
                       const NatTrans& g) {
  return is_quasi_pullback({h, k}, {f, g});
}

EpiMonoFactorization epi_mono_factorize(const NatTrans& f) {
  const FinCat& c = *f.dom.base;
  // pointwise image carriers, kept in codomain order
  std::vector<std::vector<int>> image(c.object_count());
  for (int o = 0; o < c.object_count(); ++o) {
    std::vector<bool> hit(f.cod.card[o], false);
    for (int e : f.comp[o]) hit[e] = true;
    for (int e = 0; e < f.cod.card[o]; ++e)
      if (hit[e]) image[o].push_back(e);
  }
  Presheaf im{f.dom.base, {}, {}};
  for (int o = 0; o < c.object_count(); ++o)
    im.card.push_back(static_cast<int>(image[o].size()));
  auto rank = [&](int o, int e) {
    auto it = std::lower_bound(image[o].begin(), image[o].end(), e);
    return static_cast<int>(it - image[o].begin());
  };
  im.action.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    im.action[m].resize(im.card[c.cod(m)]);
    for (int e = 0; e < im.card[c.cod(m)]; ++e)
      im.action[m][e] = rank(c.dom(m), f.cod.action[m][image[c.cod(m)][e]]);
  }
  EpiMonoFactorization out{{f.dom, im, {}}, {im, f.cod, {}}};
  out.epi.comp.resize(c.object_count());
  out.mono.comp.resize(c.object_count());
  for (int o = 0; o < c.object_count(); ++o) {
    out.epi.comp[o].resize(f.dom.card[o]);
    for (int e = 0; e < f.dom.card[o]; ++e) out.epi.comp[o][e] = rank(o, f.comp[o][e]);
    out.mono.comp[o] = image[o];
  }
  return out;
}

std::vector<SumSubobject> subobjects_of_sum(const Word& g) {
  if (!g.base->is_groupoid())
    throw std::logic_error("subobjects_of_sum: base is not a groupoid");
  TaggedSum whole = sum_of(g);
  const FinCat& c = *g.base;
  std::vector<SumSubobject> out;
  const int n = g.size();
  for (int mask = 0; mask < (1 << n); ++mask) {
    SumSubobject s;
    Word sub{g.base, {}};
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) {
        s.indices.push_back(i);
        sub.letters.push_back(g.letters[i]);
      }
    s.subword = sub;
    TaggedSum part = sum_of(sub);
    NatTrans inc{part.presheaf, whole.presheaf, {}};
    inc.comp.resize(c.object_count());
    for (int o = 0; o < c.object_count(); ++o) {
      inc.comp[o].resize(part.presheaf.card[o]);
      for (int e = 0; e < part.presheaf.card[o]; ++e) {
        auto [i, mor] = part.decode(o, e);
        inc.comp[o][e] = whole.index_of(o, s.indices[i], mor);
      }
    }
    s.inclusion = std::move(inc);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const SumSubobject& a, const SumSubobject& b) { return a.indices < b.indices; });
  return out;
}

}  // namespace specat
