#include "specat/classical.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
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
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

const std::vector<std::vector<int>>& all_perms(int n) {
  static std::vector<std::vector<std::vector<int>>> cache;
  if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1);
  if (cache[n].empty()) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      cache[n].push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return cache[n];
}

int perm_rank(int n, const std::vector<int>& p) {
  const auto& ps = all_perms(n);
  auto it = std::lower_bound(ps.begin(), ps.end(), p);
  return static_cast<int>(it - ps.begin());
}

std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

std::vector<int> inverse_perm(const std::vector<int>& a) {
  std::vector<int> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
  return c;
}

/// Builds a species over terminal bases from per-degree set sizes and a
/// right permutation action given by (n, p, sigma rank) -> p'.
Species from_action_tables(int degree, const std::vector<int>& sizes,
                           const std::function<int(int, int, int)>& act) {
  CatPtr t = cats::terminal();
  Species p;
  p.dom_base = t;
  p.cod_base = t;
  p.degree = degree;
  p.words = enumerate_words(t, degree);
  for (int n = 0; n <= degree; ++n) {
    Presheaf x{t, {sizes[n]}, {{}}};
    x.action[0].resize(sizes[n]);
    std::iota(x.action[0].begin(), x.action[0].end(), 0);
    p.coeff.push_back(std::move(x));
  }
  for (int n = 0; n <= degree; ++n) {
    const auto& ps = all_perms(n);
    std::vector<Components> ranks;
    for (std::size_t r = 0; r < ps.size(); ++r) {
      Components comps(1);
      comps[0].resize(sizes[n]);
      for (int e = 0; e < sizes[n]; ++e) comps[0][e] = act(n, e, static_cast<int>(r));
      ranks.push_back(std::move(comps));
    }
    p.action[{n, n}] = std::move(ranks);
  }
  return p;
}

}  // namespace

int ClassicalSpecies::set_size(int n) const { return species.coeff.at(n).card[0]; }

int ClassicalSpecies::act(int n, int p, int sigma_rank) const {
  return species.transport_comp(n, n, sigma_rank)[0].at(p);
}

ClassicalSpecies as_classical(const Species& p) {
  if (p.dom_base.get() != cats::terminal().get() ||
      p.cod_base.get() != cats::terminal().get())
    throw std::invalid_argument("as_classical: bases are not the terminal groupoid");
  return ClassicalSpecies{p};
}

ClassicalSpecies free_symmetric(const LinearSpecies& l) {
  std::vector<int> sizes(l.degree + 1, 0);
  for (int n = 0; n <= l.degree; ++n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    sizes[n] = static_cast<int>(l.sizes.at(n) * f);
  }
  auto act = [](int n, int e, int r) {
    const auto& ps = all_perms(n);
    int nf = static_cast<int>(ps.size());
    int ell = e / nf, s = e % nf;
    return ell * nf + perm_rank(n, compose_perm(ps[s], ps[r]));
  };
  return ClassicalSpecies{from_action_tables(l.degree, sizes, act)};
}

std::vector<std::uint64_t> count_labelled(const ClassicalSpecies& p, int k) {
  if (k < 0) throw std::invalid_argument("count_labelled: negative label count");
  std::vector<std::uint64_t> out;
  for (int n = 0; n <= p.degree(); ++n) {
    const int sz = p.set_size(n);
    long long tuples = 1;
    for (int i = 0; i < n; ++i) tuples *= k;
    if (sz == 0 || tuples == 0) {
      out.push_back(0);
      continue;
    }
    UnionFind uf(static_cast<int>(sz * tuples));
    const auto& ps = all_perms(n);
    std::vector<int> xs(n, 0);
    for (long long t = 0; t < tuples; ++t) {
      for (std::size_t r = 0; r < ps.size(); ++r) {
        // (p, x o sigma) ~ (p . sigma, x)
        long long moved = 0;
        for (int i = 0; i < n; ++i) moved = moved * k + xs[ps[r][i]];
        for (int e = 0; e < sz; ++e)
          uf.unite(static_cast<int>(e * tuples + moved),
                   static_cast<int>(p.act(n, e, static_cast<int>(r)) * tuples + t));
      }
      for (int i = n - 1; i >= 0; --i) {
        if (++xs[i] < k) break;
        xs[i] = 0;
      }
    }
    std::uint64_t classes = 0;
    for (int v = 0; v < sz * tuples; ++v)
      if (uf.find(v) == v) ++classes;
    out.push_back(classes);
  }
  return out;
}

std::vector<std::uint64_t> count_unlabelled(const ClassicalSpecies& p) {
  std::vector<std::uint64_t> out;
  for (int n = 0; n <= p.degree(); ++n) {
    const int sz = p.set_size(n);
    const auto& ps = all_perms(n);
    UnionFind uf(sz);
    std::uint64_t fixed = 0;
    for (std::size_t r = 0; r < ps.size(); ++r) {
      for (int e = 0; e < sz; ++e) {
        int img = p.act(n, e, static_cast<int>(r));
        uf.unite(e, img);
        if (img == e) ++fixed;
      }
    }
    std::uint64_t orbits = 0;
    for (int e = 0; e < sz; ++e)
      if (uf.find(e) == e) ++orbits;
    if (orbits * ps.size() != fixed)
      throw std::logic_error("count_unlabelled: orbit count disagrees with the "
                             "fixed-point average");
    out.push_back(orbits);
  }
  return out;
}

ClassicalSpecies catalog(const std::string& name, int degree) {
  CatPtr t = cats::terminal();
  if (name == "E") {
    return ClassicalSpecies{terminal_species(t, t, degree)};
  }
  if (name == "X") {
    Word one{t, {0}};
    return ClassicalSpecies{block_species(one, {}, terminal_presheaf(t), degree)};
  }
  if (name == "L") {
    LinearSpecies l{degree, std::vector<int>(degree + 1, 1)};
    return free_symmetric(l);
  }
  if (name == "C") {
    // degree n >= 1: cosets of the rotation subgroup, right translation
    std::vector<int> sizes(degree + 1, 0);
    std::vector<std::vector<int>> coset_of(degree + 1), reps(degree + 1);
    for (int n = 1; n <= degree; ++n) {
      const auto& ps = all_perms(n);
      const int nf = static_cast<int>(ps.size());
      // rotation subgroup generated by i |-> i+1 mod n
      std::vector<int> rot(n);
      for (int i = 0; i < n; ++i) rot[i] = (i + 1) % n;
      std::vector<int> members;
      std::vector<int> g(n);
      std::iota(g.begin(), g.end(), 0);
      for (int i = 0; i < n; ++i) {
        members.push_back(perm_rank(n, g));
        g = compose_perm(g, rot);
      }
      UnionFind uf(nf);
      for (int r = 0; r < nf; ++r)
        for (int m : members) uf.unite(r, perm_rank(n, compose_perm(all_perms(n)[m], ps[r])));
      coset_of[n].resize(nf);
      for (int r = 0; r < nf; ++r) {
        int root = uf.find(r);
        if (root == r) {
          coset_of[n][r] = static_cast<int>(reps[n].size());
          reps[n].push_back(r);
        }
      }
      for (int r = 0; r < nf; ++r) coset_of[n][r] = coset_of[n][uf.find(r)];
      sizes[n] = static_cast<int>(reps[n].size());
    }
    auto act = [coset_of, reps](int n, int e, int r) {
      if (n == 0) return e;
      const auto& ps = all_perms(n);
      return coset_of[n][perm_rank(n, compose_perm(ps[reps[n][e]], ps[r]))];
    };
    return ClassicalSpecies{from_action_tables(degree, sizes, act)};
  }
  if (name == "Perm") {
    std::vector<int> sizes(degree + 1);
    for (int n = 0; n <= degree; ++n) sizes[n] = static_cast<int>(all_perms(n).size());
    auto act = [](int n, int e, int r) {
      const auto& ps = all_perms(n);
      // conjugation p . s = s^-1 p s
      return perm_rank(n, compose_perm(inverse_perm(ps[r]), compose_perm(ps[e], ps[r])));
    };
    return ClassicalSpecies{from_action_tables(degree, sizes, act)};
  }
  throw std::invalid_argument("catalog: unknown species name '" + name + "'");
}

Presheaf label_set(int k) {
  CatPtr t = cats::terminal();
  Presheaf x{t, {k}, {{}}};
  x.action[0].resize(k);
  std::iota(x.action[0].begin(), x.action[0].end(), 0);
  return x;
}

std::vector<std::uint64_t> class_counts_by_degree(const LanEval& e, int b, int degree) {
  std::vector<std::uint64_t> out(degree + 1, 0);
  const Species& p = e.species();
  for (int cl = 0; cl < e.class_count(b); ++cl) {
    int len = p.words[e.rep(b, cl).word].size();
    if (len <= degree) ++out[len];
  }
  return out;
}

}  // namespace specat
