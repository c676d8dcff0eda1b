#include "specat/generic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace specat {

namespace {

/// All structurally valid presheaves with the given carrier sizes, found by
/// assigning action tables under the functor laws.
void enumerate_actions(const CatPtr& base, const std::vector<int>& card,
                       std::vector<Presheaf>& out) {
  const FinCat& c = *base;
  Presheaf x{base, card, {}};
  x.action.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) x.action[m].assign(card[c.cod(m)], -1);
  for (int o = 0; o < c.object_count(); ++o) {
    int id = c.identity(o);
    for (int e = 0; e < card[o]; ++e) x.action[id][e] = e;
  }
  // variables: non-identity morphism entries
  std::vector<std::pair<int, int>> vars;
  for (int m = 0; m < c.morphism_count(); ++m) {
    bool is_id = false;
    for (int o = 0; o < c.object_count(); ++o) is_id |= c.identity(o) == m;
    if (is_id) continue;
    for (int e = 0; e < card[c.cod(m)]; ++e) vars.push_back({m, e});
  }

  auto consistent = [&]() {
    for (int f = 0; f < c.morphism_count(); ++f) {
      for (int g = 0; g < c.morphism_count(); ++g) {
        if (!c.composable(f, g)) continue;
        int fg = c.compose(f, g);
        for (int e = 0; e < card[c.cod(g)]; ++e) {
          int ge = x.action[g][e];
          int fge = ge < 0 ? -1 : x.action[f][ge];
          int direct = x.action[fg][e];
          if (direct >= 0 && fge >= 0 && direct != fge) return false;
        }
      }
    }
    return true;
  };

  std::vector<int> val(vars.size(), -1);
  std::size_t depth = 0;
  if (vars.empty()) {
    if (consistent()) out.push_back(x);
    return;
  }
  while (true) {
    if (depth == vars.size()) {
      if (consistent()) out.push_back(x);
      --depth;
      continue;
    }
    auto [m, e] = vars[depth];
    int v = val[depth] + 1;
    int limit = card[c.dom(m)];
    bool advanced = false;
    for (; v < limit; ++v) {
      x.action[m][e] = v;
      if (consistent()) {
        val[depth] = v;
        ++depth;
        if (depth < vars.size()) val[depth] = -1;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      x.action[m][e] = -1;
      val[depth] = -1;
      if (depth == 0) break;
      --depth;
      x.action[vars[depth].first][vars[depth].second] = -1;
    }
  }
}

}  // namespace

ProbeFamily::ProbeFamily(CatPtr base, int bound, int sum_len)
    : base_(std::move(base)), bound_(bound) {
  const int nobj = base_->object_count();
  std::vector<Presheaf> all;
  // all carrier size vectors with total <= bound
  std::vector<int> card(nobj, 0);
  while (true) {
    int total = 0;
    for (int k : card) total += k;
    if (total <= bound) enumerate_actions(base_, card, all);
    int i = nobj - 1;
    while (i >= 0 && card[i] == bound) card[i--] = 0;
    if (i < 0) break;
    ++card[i];
  }
  // isomorphism classes, canonically labeled
  std::vector<Presheaf> canon;
  for (const auto& x : all) canon.push_back(canonical_form(x));
  std::sort(canon.begin(), canon.end(), [](const Presheaf& a, const Presheaf& b) {
    if (a.total() != b.total()) return a.total() < b.total();
    return presheaf_less(a, b);
  });
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
  members_ = std::move(canon);
  // close under the literal tagged sums
  for (const Word& w : enumerate_words(base_, sum_len)) {
    Presheaf s = sum_of(w).presheaf;
    if (find(s) < 0) members_.push_back(std::move(s));
  }
  for (const Presheaf& m : members_)
    for (int k : m.card) carrier_cap_ = std::max(carrier_cap_, k);
}

int ProbeFamily::find(const Presheaf& x) const {
  for (int i = 0; i < size(); ++i)
    if (members_[i] == x) return i;
  return -1;
}

const std::vector<NatTrans>& ProbeFamily::homs(int i, int j) const {
  auto it = hom_cache_.find({i, j});
  if (it == hom_cache_.end())
    it = hom_cache_.emplace(std::pair{i, j}, hom_enumerate(members_.at(i), members_.at(j),
                                                           carrier_cap_))
             .first;
  return it->second;
}

const LanEval& AnalyticCtx::at(const Presheaf& x) {
  auto it = cache_.find(x);
  if (it == cache_.end()) it = cache_.emplace(x, LanEval(*p_, x)).first;
  return it->second;
}

NatTrans tuple_as_nat(const TaggedSum& sw, const Presheaf& x, const std::vector<int>& xs) {
  const FinCat& c = *x.base;
  NatTrans f{sw.presheaf, x, {}};
  f.comp.resize(c.object_count());
  for (int d = 0; d < c.object_count(); ++d) {
    f.comp[d].resize(sw.presheaf.card[d]);
    for (int e = 0; e < sw.presheaf.card[d]; ++e) {
      auto [i, g] = sw.decode(d, e);
      f.comp[d][e] = x.action[g][xs[i]];
    }
  }
  return f;
}

std::vector<int> identity_tuple(const TaggedSum& sw) {
  const FinCat& c = *sw.word.base;
  std::vector<int> xs(sw.word.size());
  for (int i = 0; i < sw.word.size(); ++i) {
    int obj = sw.word.letters[i];
    xs[i] = sw.index_of(obj, i, c.identity(obj));
  }
  return xs;
}

namespace {

NatTrans rep_family_map(const LanEval& fx, int b, int cls) {
  const Species& p = fx.species();
  const Triple& t = fx.rep(b, cls);
  TaggedSum sw = sum_of(p.words[t.word]);
  return tuple_as_nat(sw, fx.argument(), t.xs);
}

}  // namespace

bool is_generic_whitebox(const LanEval& fx, int b, int cls) {
  if (!fx.species().dom_base->is_groupoid())
    throw std::logic_error("is_generic_whitebox: dom base is not a groupoid");
  return morphism_class(rep_family_map(fx, b, cls)).iso;
}

bool is_minimal_whitebox(const LanEval& fx, int b, int cls) {
  if (!fx.species().dom_base->is_groupoid())
    throw std::logic_error("is_minimal_whitebox: dom base is not a groupoid");
  return morphism_class(rep_family_map(fx, b, cls)).epi;
}

namespace {

/// hom-count upper bound ignoring naturality, for budget decisions.
std::uint64_t hom_bound(const Presheaf& x, const Presheaf& y) {
  std::uint64_t b = 1;
  for (std::size_t o = 0; o < x.card.size(); ++o) {
    for (int i = 0; i < x.card[o]; ++i) {
      b *= static_cast<std::uint64_t>(y.card[o]);
      if (b > (1ull << 40)) return b;  // saturate
    }
  }
  return b;
}

/// The defining genericity clause for one cospan f : X -> Z <- Y : g.
/// elem and the cospan images live in the evaluations; hx is hom(X, Y).
bool generic_clause(AnalyticCtx& ctx, const LanEval& fx, int b, int cls,
                    const NatTrans& f, const LanEval& fz, const NatTrans& g,
                    const LanEval& fy, const std::vector<NatTrans>& hom_xy) {
  NatTrans fmap = lan_map(fx, fz, f);
  NatTrans gmap = lan_map(fy, fz, g);
  int target = fmap.comp[b][cls];
  for (int y = 0; y < fy.class_count(b); ++y) {
    if (gmap.comp[b][y] != target) continue;
    bool found = false;
    for (const NatTrans& h : hom_xy) {
      if (!(nat_compose(h, g) == f)) continue;
      if (lan_map(fx, fy, h).comp[b][cls] == y) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  (void)ctx;
  return true;
}

}  // namespace

bool is_generic_bounded(AnalyticCtx& ctx, const Presheaf& x, int b, int cls,
                        const BoundedOpts& opts) {
  const LanEval& fx = ctx.at(x);
  const Species& p = ctx.species();

  // cospans with the identity leg against every tagged-sum leg; these are
  // the decisive ones on groupoid bases
  NatTrans idx = nat_identity(x);
  for (int wi = 0; wi < p.word_count(); ++wi) {
    TaggedSum sw = sum_of(p.words[wi]);
    const LanEval& fy = ctx.at(sw.presheaf);
    auto gs = hom_enumerate(sw.presheaf, x);
    auto hs = hom_enumerate(x, sw.presheaf);
    for (const NatTrans& g : gs)
      if (!generic_clause(ctx, fx, b, cls, idx, fx, g, fy, hs)) return false;
  }

  // general cospans from the family, within the search budget
  const ProbeFamily& fam = ctx.probes();
  for (int zi = 0; zi < fam.size(); ++zi) {
    const Presheaf& z = fam.member(zi);
    std::uint64_t fz_bound = hom_bound(x, z);
    if (fz_bound > opts.cospan_budget) continue;
    for (int yi = 0; yi < fam.size(); ++yi) {
      const Presheaf& y = fam.member(yi);
      if (fz_bound * hom_bound(y, z) > opts.cospan_budget) continue;
      if (hom_bound(x, y) > opts.cospan_budget) continue;
      const LanEval& fzz = ctx.at(z);
      const LanEval& fyy = ctx.at(y);
      auto fs = hom_enumerate(x, z);
      auto gs = hom_enumerate(y, z);
      auto hs = hom_enumerate(x, y);
      for (const NatTrans& f : fs)
        for (const NatTrans& g : gs)
          if (!generic_clause(ctx, fx, b, cls, f, fzz, g, fyy, hs)) return false;
    }
  }
  return true;
}

bool is_minimal_bounded(AnalyticCtx& ctx, const Presheaf& x, int b, int cls,
                        const BoundedOpts& opts) {
  const LanEval& fx = ctx.at(x);
  const Species& p = ctx.species();

  // engendering maps out of tagged sums decide minimality on groupoid bases
  for (int wi = 0; wi < p.word_count(); ++wi) {
    TaggedSum sw = sum_of(p.words[wi]);
    const LanEval& fy = ctx.at(sw.presheaf);
    for (const NatTrans& f : hom_enumerate(sw.presheaf, x)) {
      NatTrans fmap = lan_map(fy, fx, f);
      bool hits = false;
      for (int y = 0; y < fy.class_count(b) && !hits; ++y) hits = fmap.comp[b][y] == cls;
      if (hits && !morphism_class(f).epi) return false;
    }
  }
  const ProbeFamily& fam = ctx.probes();
  for (int yi = 0; yi < fam.size(); ++yi) {
    const Presheaf& y = fam.member(yi);
    if (hom_bound(y, x) > opts.cospan_budget) continue;
    const LanEval& fy = ctx.at(y);
    for (const NatTrans& f : hom_enumerate(y, x)) {
      NatTrans fmap = lan_map(fy, fx, f);
      bool hits = false;
      for (int yc = 0; yc < fy.class_count(b) && !hits; ++yc) hits = fmap.comp[b][yc] == cls;
      if (hits && !morphism_class(f).epi) return false;
    }
  }
  return true;
}

CoefficientsResult coefficients_of(AnalyticCtx& ctx) {
  const Species& p = ctx.species();
  if (!p.dom_base->is_groupoid() || !p.cod_base->is_groupoid())
    throw std::logic_error("coefficients_of: both bases must be groupoids");
  const FinCat& bc = *p.cod_base;

  CoefficientsResult out;
  out.fcirc.dom_base = p.dom_base;
  out.fcirc.cod_base = p.cod_base;
  out.fcirc.degree = p.degree;
  out.fcirc.words = p.words;

  const int nw = p.word_count();
  std::vector<TaggedSum> sums;
  for (int w = 0; w < nw; ++w) sums.push_back(sum_of(p.words[w]));

  // generic classes per (word, cod object), densely renumbered
  std::vector<std::vector<std::vector<int>>> glist(nw);  // [w][h] -> class ids
  std::vector<std::vector<std::vector<int>>> gidx(nw);   // [w][h] -> cls -> dense or -1
  for (int w = 0; w < nw; ++w) {
    const LanEval& l = ctx.at(sums[w].presheaf);
    glist[w].resize(bc.object_count());
    gidx[w].resize(bc.object_count());
    for (int h = 0; h < bc.object_count(); ++h) {
      gidx[w][h].assign(l.class_count(h), -1);
      for (int cls = 0; cls < l.class_count(h); ++cls)
        if (is_generic_whitebox(l, h, cls)) {
          gidx[w][h][cls] = static_cast<int>(glist[w][h].size());
          glist[w][h].push_back(cls);
        }
    }
  }

  for (int w = 0; w < nw; ++w) {
    const LanEval& l = ctx.at(sums[w].presheaf);
    Presheaf x{p.cod_base, {}, {}};
    for (int h = 0; h < bc.object_count(); ++h)
      x.card.push_back(static_cast<int>(glist[w][h].size()));
    x.action.resize(bc.morphism_count());
    for (int m = 0; m < bc.morphism_count(); ++m) {
      int cb = bc.cod(m), db = bc.dom(m);
      x.action[m].resize(x.card[cb]);
      for (int e = 0; e < x.card[cb]; ++e) {
        int img = l.value().action[m][glist[w][cb][e]];
        int dense = gidx[w][db][img];
        if (dense < 0)
          throw std::logic_error("coefficients_of: generic elements not closed under "
                                 "the cod action");
        x.action[m][e] = dense;
      }
    }
    out.fcirc.coeff.push_back(std::move(x));
  }

  for (int wi = 0; wi < nw; ++wi) {
    for (int wj = 0; wj < nw; ++wj) {
      if (p.words[wi].size() != p.words[wj].size()) continue;
      auto hs = enumerate_homs(p.words[wi], p.words[wj]);
      const LanEval& li = ctx.at(sums[wi].presheaf);
      const LanEval& lj = ctx.at(sums[wj].presheaf);
      std::vector<Components> ranks;
      for (const SmcMor& sigma : hs) {
        NatTrans smap = lan_map(li, lj, sum_of(sigma));
        Components comps(bc.object_count());
        for (int h = 0; h < bc.object_count(); ++h) {
          comps[h].resize(glist[wi][h].size());
          for (std::size_t e = 0; e < glist[wi][h].size(); ++e) {
            int dense = gidx[wj][h][smap.comp[h][glist[wi][h][e]]];
            if (dense < 0)
              throw std::logic_error("coefficients_of: generic elements not closed "
                                     "under transport");
            comps[h][e] = dense;
          }
        }
        ranks.push_back(std::move(comps));
      }
      out.fcirc.action[{wi, wj}] = std::move(ranks);
    }
  }

  // the canonical comparison p |-> class of (p (x) id)
  out.to_generic.resize(nw);
  out.from_generic.resize(nw);
  out.iso_ok = true;
  for (int w = 0; w < nw; ++w) {
    const LanEval& l = ctx.at(sums[w].presheaf);
    std::vector<int> idt = identity_tuple(sums[w]);
    out.to_generic[w].resize(bc.object_count());
    out.from_generic[w].resize(bc.object_count());
    for (int h = 0; h < bc.object_count(); ++h) {
      auto& fwd = out.to_generic[w][h];
      fwd.resize(p.coeff[w].card[h]);
      std::vector<int> seen(glist[w][h].size(), 0);
      for (int pe = 0; pe < p.coeff[w].card[h]; ++pe) {
        int cls = l.class_of(h, Triple{w, pe, idt});
        int dense = gidx[w][h][cls];
        if (dense < 0) {
          out.iso_ok = false;
          out.failure = "p (x) id is not generic";
          fwd[pe] = -1;
          continue;
        }
        fwd[pe] = dense;
        ++seen[dense];
      }
      for (int s : seen)
        if (s != 1) {
          out.iso_ok = false;
          if (out.failure.empty()) out.failure = "p |-> p (x) id is not bijective";
        }
      // inverse via the representative's completion lift
      auto& bwd = out.from_generic[w][h];
      bwd.resize(glist[w][h].size());
      for (std::size_t e = 0; e < glist[w][h].size(); ++e) {
        const Triple& t = l.rep(h, glist[w][h][e]);
        NatTrans xhat = tuple_as_nat(sum_of(p.words[t.word]), sums[w].presheaf, t.xs);
        auto gamma = lift_to_freesmc(sum_of(p.words[t.word]), sums[w], xhat);
        if (!gamma) {
          out.iso_ok = false;
          out.failure = "generic representative does not lift";
          bwd[e] = -1;
          continue;
        }
        bwd[e] = p.transport(*gamma).comp[h][t.p];
      }
      if (out.iso_ok) {
        for (int pe = 0; pe < p.coeff[w].card[h]; ++pe)
          if (bwd[fwd[pe]] != pe) {
            out.iso_ok = false;
            out.failure = "comparison maps are not mutually inverse";
          }
      }
    }
  }

  // eta at every probe: classes of lan(fcirc) map into classes of lan(p)
  AnalyticCtx cf(out.fcirc, ctx.probes());
  for (int mi = 0; mi < ctx.probes().size(); ++mi) {
    const Presheaf& x = ctx.probes().member(mi);
    const LanEval& lf = cf.at(x);
    const LanEval& lp = ctx.at(x);
    for (int h = 0; h < bc.object_count(); ++h) {
      std::vector<int> hit(lp.class_count(h), 0);
      for (int cls = 0; cls < lf.class_count(h); ++cls) {
        const Triple& t = lf.rep(h, cls);
        // unfold the generic coefficient back to its class in lan(p)(S w)
        int ocls = glist[t.word][h][t.p];
        NatTrans xhat = tuple_as_nat(sums[t.word], x, t.xs);
        int target = lan_map(ctx.at(sums[t.word].presheaf), lp, xhat).comp[h][ocls];
        ++hit[target];
      }
      for (int s : hit) {
        if (s > 1) out.eta_mono = false;
        if (s == 0) out.eta_epi = false;
      }
    }
  }
  return out;
}

ProbeNat lan_nat(AnalyticCtx& cp, AnalyticCtx& cq, const CoeffNat& phi) {
  if (phi.dom != &cp.species() || phi.cod != &cq.species())
    throw std::invalid_argument("lan_nat: family does not match the contexts");
  if (!coeff_nat_is_natural(phi))
    throw std::invalid_argument("lan_nat: coefficient family is not natural");
  ProbeNat psi;
  for (int i = 0; i < cp.probes().size(); ++i)
    psi.comp.push_back(lan_nat_at(phi, cp.at_member(i), cq.at_member(i)).comp);
  return psi;
}

namespace {

struct SquareCheck {
  bool natural = true;
  bool qpb = true;
  int fail_b = -1;
  int fail_u = -1, fail_s = -1;
};

SquareCheck check_square(const Components& pf, const Components& qf,
                         const Components& psi_x, const Components& psi_y) {
  SquareCheck out;
  const int nb = static_cast<int>(pf.size());
  for (int b = 0; b < nb; ++b) {
    for (std::size_t t = 0; t < pf[b].size(); ++t)
      if (psi_y[b][pf[b][t]] != qf[b][psi_x[b][t]]) {
        out.natural = false;
        return out;
      }
  }
  for (int b = 0; b < nb; ++b) {
    const int nu = static_cast<int>(qf[b].size());     // |QX(b)|
    const int ns = static_cast<int>(psi_y[b].size());  // |PY(b)|
    if (nu == 0 || ns == 0) continue;
    std::vector<char> hit(static_cast<std::size_t>(nu) * ns, 0);
    for (std::size_t t = 0; t < pf[b].size(); ++t)
      hit[static_cast<std::size_t>(psi_x[b][t]) * ns + pf[b][t]] = 1;
    for (int u = 0; u < nu; ++u)
      for (int s = 0; s < ns; ++s)
        if (qf[b][u] == psi_y[b][s] && !hit[static_cast<std::size_t>(u) * ns + s]) {
          out.qpb = false;
          out.fail_b = b;
          out.fail_u = u;
          out.fail_s = s;
          return out;
        }
  }
  return out;
}

bool nat_is_iso(const NatTrans& f) { return morphism_class(f).iso; }

}  // namespace

bool probe_nat_is_natural(AnalyticCtx& cp, AnalyticCtx& cq, const ProbeNat& psi) {
  const ProbeFamily& fam = cp.probes();
  Components pf, qf;
  for (int i = 0; i < fam.size(); ++i) {
    for (int j = 0; j < fam.size(); ++j) {
      for (const NatTrans& f : fam.homs(i, j)) {
        lan_map_comp(cp.at_member(i), cp.at_member(j), f, pf);
        lan_map_comp(cq.at_member(i), cq.at_member(j), f, qf);
        if (!check_square(pf, qf, psi.comp[i], psi.comp[j]).natural) return false;
      }
    }
  }
  return true;
}

QcReport is_quasi_cartesian(AnalyticCtx& cp, AnalyticCtx& cq, const ProbeNat& psi) {
  const ProbeFamily& fam = cp.probes();
  QcReport report;
  Components pf, qf;
  for (int i = 0; i < fam.size(); ++i) {
    for (int j = 0; j < fam.size(); ++j) {
      const auto& homs = fam.homs(i, j);
      for (std::size_t fi = 0; fi < homs.size(); ++fi) {
        const NatTrans& f = homs[fi];
        if (nat_is_iso(f)) continue;  // squares at isos are quasi-pullbacks
        lan_map_comp(cp.at_member(i), cp.at_member(j), f, pf);
        lan_map_comp(cq.at_member(i), cq.at_member(j), f, qf);
        SquareCheck sc = check_square(pf, qf, psi.comp[i], psi.comp[j]);
        if (!sc.natural)
          throw std::invalid_argument("is_quasi_cartesian: the family is not natural");
        if (!sc.qpb) {
          report.quasi_cartesian = false;
          std::ostringstream w;
          w << "square at probe morphism " << fi << " : member " << i << " -> member "
            << j << " fails at cod object " << sc.fail_b << " on pullback element ("
            << sc.fail_u << "," << sc.fail_s << ")";
          report.witness = w.str();
          return report;
        }
      }
    }
  }
  return report;
}

ExtractionResult extract_coefficient_nat(AnalyticCtx& cp, AnalyticCtx& cq,
                                         const ProbeNat& psi) {
  const Species& p = cp.species();
  const Species& q = cq.species();
  const FinCat& bc = *p.cod_base;
  ExtractionResult out;
  out.phi.dom = &p;
  out.phi.cod = &q;
  out.phi.comp.resize(p.word_count());
  for (int w = 0; w < p.word_count(); ++w) {
    TaggedSum sw = sum_of(p.words[w]);
    int mi = cp.probes().find(sw.presheaf);
    if (mi < 0)
      throw std::logic_error("extract_coefficient_nat: probe family is not closed "
                             "under tagged sums");
    const LanEval& lp = cp.at_member(mi);
    const LanEval& lq = cq.at_member(mi);
    std::vector<int> idt = identity_tuple(sw);
    out.phi.comp[w].resize(bc.object_count());
    for (int b = 0; b < bc.object_count(); ++b) {
      out.phi.comp[w][b].resize(p.coeff[w].card[b]);
      for (int pe = 0; pe < p.coeff[w].card[b]; ++pe) {
        int elem = lp.class_of(b, Triple{w, pe, idt});
        int img = psi.comp[mi][b][elem];
        const Triple& t = lq.rep(b, img);
        NatTrans xhat = tuple_as_nat(sum_of(q.words[t.word]), sw.presheaf, t.xs);
        auto gamma = lift_to_freesmc(sum_of(q.words[t.word]), sw, xhat);
        if (!gamma) {
          std::ostringstream msg;
          msg << "not quasi-cartesian at (word " << w << ", cod object " << b
              << ", element " << pe << "): the image class has no representative of "
              << "the form q (x) id";
          out.failure = msg.str();
          return out;
        }
        out.phi.comp[w][b][pe] = q.transport(*gamma).comp[b][t.p];
      }
    }
  }
  out.ok = true;
  return out;
}

CounterexampleReport check_counterexample(int probe_bound) {
  CounterexampleReport report;
  CatPtr scat = cats::walking_arrow();
  CatPtr setc = cats::terminal();
  const int degree = 2;

  Word top{scat, {1}};
  Species p = block_species(top, {}, terminal_presheaf(setc), degree);
  Species one = terminal_species(scat, setc, degree);
  CoeffNat phi;
  phi.dom = &p;
  phi.cod = &one;
  for (int w = 0; w < p.word_count(); ++w) {
    Components comps(1);
    comps[0].assign(p.coeff[w].card[0], 0);
    phi.comp.push_back(std::move(comps));
  }

  // the explicit failing square, off the probe family path
  Presheaf ybot = yoneda(scat, 0), ytop = yoneda(scat, 1);
  auto fs = hom_enumerate(ybot, ytop);
  if (fs.size() != 1)
    throw std::logic_error("check_counterexample: expected a single map y(bot) -> y(top)");
  const NatTrans& f = fs[0];
  LanEval lpb(p, ybot), lpt(p, ytop), lqb(one, ybot), lqt(one, ytop);
  NatTrans pf = lan_map(lpb, lpt, f);
  NatTrans qf = lan_map(lqb, lqt, f);
  NatTrans psi_b = lan_nat_at(phi, lpb, lqb);
  NatTrans psi_t = lan_nat_at(phi, lpt, lqt);
  report.square_commutes = nat_compose(pf, psi_t) == nat_compose(psi_b, qf);
  report.square_is_quasi_pullback = is_quasi_pullback(psi_b, pf, qf, psi_t);
  if (!report.square_is_quasi_pullback) {
    // name the missed pullback element
    for (int u = 0; u < lqb.class_count(0) && report.witness.empty(); ++u)
      for (int s = 0; s < lpt.class_count(0) && report.witness.empty(); ++s) {
        if (qf.comp[0][u] != psi_t.comp[0][s]) continue;
        bool hit = false;
        for (int t = 0; t < lpb.class_count(0) && !hit; ++t)
          hit = psi_b.comp[0][t] == u && pf.comp[0][t] == s;
        if (!hit) {
          std::ostringstream w;
          w << "pullback element (" << lqb.describe(0, u) << " , " << lpt.describe(0, s)
            << ") has no preimage";
          report.witness = w.str();
        }
      }
  }

  // full sweep over the probe family
  ProbeFamily fam(scat, probe_bound, degree + 1);
  AnalyticCtx cp(p, fam), cq(one, fam);
  ProbeNat psi = lan_nat(cp, cq, phi);
  report.full_sweep_quasi_cartesian = is_quasi_cartesian(cp, cq, psi).quasi_cartesian;

  // identity family on the same non-groupoid base
  CoeffNat idp = coeff_nat_identity(p);
  ProbeNat psi_id = lan_nat(cp, cp, idp);
  report.identity_variant_quasi_cartesian = is_quasi_cartesian(cp, cp, psi_id).quasi_cartesian;

  // the discrete subcategory is a groupoid: same construction passes
  CatPtr disc = cats::discrete(2);
  Word dtop{disc, {1}};
  Species pd = block_species(dtop, {}, terminal_presheaf(setc), degree);
  Species oned = terminal_species(disc, setc, degree);
  CoeffNat phid;
  phid.dom = &pd;
  phid.cod = &oned;
  for (int w = 0; w < pd.word_count(); ++w) {
    Components comps(1);
    comps[0].assign(pd.coeff[w].card[0], 0);
    phid.comp.push_back(std::move(comps));
  }
  ProbeFamily famd(disc, probe_bound, degree + 1);
  AnalyticCtx cpd(pd, famd), cqd(oned, famd);
  ProbeNat psid = lan_nat(cpd, cqd, phid);
  report.discrete_variant_quasi_cartesian = is_quasi_cartesian(cpd, cqd, psid).quasi_cartesian;
  return report;
}

ComposeResult compose_analytic(const Species& p, const Species& q, int out_degree,
                               int probe_bound) {
  ComposeResult out;
  if (p.cod_base.get() != q.dom_base.get()) {
    out.failure = "cod base of the first species is not the dom base of the second";
    return out;
  }
  if (!p.dom_base->is_groupoid() || !q.dom_base->is_groupoid()) {
    out.failure = "compose_analytic requires groupoid dom bases";
    return out;
  }
  if (static_cast<long long>(p.degree) * q.degree < out_degree) {
    std::ostringstream msg;
    msg << "insufficient input degrees: output degree " << out_degree
        << " requires P.degree * Q.degree >= " << out_degree << " (have " << p.degree
        << " * " << q.degree << ")";
    out.failure = msg.str();
    return out;
  }
  const FinCat& kc = *q.cod_base;

  Species r;
  r.dom_base = p.dom_base;
  r.cod_base = q.cod_base;
  r.degree = out_degree;
  r.words = enumerate_words(p.dom_base, out_degree);
  const int nw = static_cast<int>(r.words.size());

  // per word: evaluate Q at P(S w) and keep the jointly-bijective classes
  std::vector<TaggedSum> sums;
  std::vector<LanEval> lp, lq;
  for (int w = 0; w < nw; ++w) {
    sums.push_back(sum_of(r.words[w]));
    lp.emplace_back(p, sums[w].presheaf);
    lq.emplace_back(q, lp[w].value());
  }

  auto tags_bijective = [&](int w, int k, const Triple& t) {
    // t is a class of lan(q)(lan(p)(S w)) at k; collect the letter tags of
    // every inner representative
    (void)k;
    const Word& hw = q.words[t.word];
    std::vector<int> seen(r.words[w].size(), 0);
    int total = 0;
    for (int j = 0; j < hw.size(); ++j) {
      const Triple& inner = lp[w].rep(hw.letters[j], t.xs[j]);
      const Word& aw = p.words[inner.word];
      for (int i = 0; i < aw.size(); ++i) {
        auto [tag, mor] = sums[w].decode(aw.letters[i], inner.xs[i]);
        (void)mor;
        ++seen[tag];
        ++total;
      }
    }
    if (total != r.words[w].size()) return false;
    for (int s : seen)
      if (s != 1) return false;
    return true;
  };

  std::vector<std::vector<std::vector<int>>> glist(nw), gidx(nw);
  for (int w = 0; w < nw; ++w) {
    glist[w].resize(kc.object_count());
    gidx[w].resize(kc.object_count());
    for (int k = 0; k < kc.object_count(); ++k) {
      gidx[w][k].assign(lq[w].class_count(k), -1);
      for (int cls = 0; cls < lq[w].class_count(k); ++cls)
        if (tags_bijective(w, k, lq[w].rep(k, cls))) {
          gidx[w][k][cls] = static_cast<int>(glist[w][k].size());
          glist[w][k].push_back(cls);
        }
    }
  }

  for (int w = 0; w < nw; ++w) {
    Presheaf x{q.cod_base, {}, {}};
    for (int k = 0; k < kc.object_count(); ++k)
      x.card.push_back(static_cast<int>(glist[w][k].size()));
    x.action.resize(kc.morphism_count());
    for (int m = 0; m < kc.morphism_count(); ++m) {
      int cb = kc.cod(m), db = kc.dom(m);
      x.action[m].resize(x.card[cb]);
      for (int e = 0; e < x.card[cb]; ++e) {
        int img = lq[w].value().action[m][glist[w][cb][e]];
        int dense = gidx[w][db][img];
        if (dense < 0) {
          out.failure = "composite classes are not closed under the cod action";
          return out;
        }
        x.action[m][e] = dense;
      }
    }
    r.coeff.push_back(std::move(x));
  }

  for (int wi = 0; wi < nw; ++wi) {
    for (int wj = 0; wj < nw; ++wj) {
      if (r.words[wi].size() != r.words[wj].size()) continue;
      auto hs = enumerate_homs(r.words[wi], r.words[wj]);
      std::vector<Components> ranks;
      for (const SmcMor& sigma : hs) {
        NatTrans inner = lan_map(lp[wi], lp[wj], sum_of(sigma));
        NatTrans outer = lan_map(lq[wi], lq[wj], inner);
        Components comps(kc.object_count());
        for (int k = 0; k < kc.object_count(); ++k) {
          comps[k].resize(glist[wi][k].size());
          for (std::size_t e = 0; e < glist[wi][k].size(); ++e) {
            int dense = gidx[wj][k][outer.comp[k][glist[wi][k][e]]];
            if (dense < 0) {
              out.failure = "composite classes are not closed under transport";
              return out;
            }
            comps[k][e] = dense;
          }
        }
        ranks.push_back(std::move(comps));
      }
      r.action[{wi, wj}] = std::move(ranks);
    }
  }
  out.composite = std::move(r);
  const Species& rr = out.composite;

  // extensional certificate against the two-step evaluation, graded by the
  // total arity the output degree covers
  out.certificate_ok = true;
  ProbeFamily fam(p.dom_base, probe_bound, out_degree + 1);
  for (int mi = 0; mi < fam.size() && out.certificate_ok; ++mi) {
    const Presheaf& x = fam.member(mi);
    LanEval lr(rr, x);
    LanEval lpx(p, x);
    LanEval lqpx(q, lpx.value());
    for (int k = 0; k < kc.object_count() && out.certificate_ok; ++k) {
      // grade of a two-step class: total inner representative word length
      auto grade = [&](const Triple& t) {
        int g = 0;
        const Word& hw = q.words[t.word];
        for (int j = 0; j < hw.size(); ++j)
          g += p.words[lpx.rep(hw.letters[j], t.xs[j]).word].size();
        return g;
      };
      std::vector<int> hit(lqpx.class_count(k), 0);
      int in_grade = 0;
      for (int cls = 0; cls < lqpx.class_count(k); ++cls)
        if (grade(lqpx.rep(k, cls)) <= out_degree) ++in_grade;
      for (int cls = 0; cls < lr.class_count(k); ++cls) {
        const Triple& t = lr.rep(k, cls);
        int inner_cls = glist[t.word][k][t.p];
        const Triple& ct = lq[t.word].rep(k, inner_cls);
        // push the composite element along the family map S w -> X
        NatTrans xhat = tuple_as_nat(sums[t.word], x, t.xs);
        NatTrans push = lan_map(lp[t.word], lpx, xhat);
        Triple img;
        img.word = ct.word;
        img.p = ct.p;
        const Word& hw = q.words[ct.word];
        for (int j = 0; j < hw.size(); ++j)
          img.xs.push_back(push.comp[hw.letters[j]][ct.xs[j]]);
        int target = lqpx.class_of(k, img);
        ++hit[target];
      }
      int covered = 0;
      for (int cls = 0; cls < lqpx.class_count(k); ++cls) {
        bool in = grade(lqpx.rep(k, cls)) <= out_degree;
        if (hit[cls] > 1 || (hit[cls] == 1 && !in)) out.certificate_ok = false;
        if (hit[cls] == 1 && in) ++covered;
      }
      if (covered != in_grade || static_cast<int>(lr.class_count(k)) != in_grade)
        out.certificate_ok = false;
    }
  }
  if (!out.certificate_ok && out.failure.empty())
    out.failure = "extensional certificate failed";
  out.ok = out.certificate_ok;
  return out;
}

}  // namespace specat
