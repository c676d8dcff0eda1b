#include "specat/freesmc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace specat {

bool operator==(const Word& a, const Word& b) {
  return a.base.get() == b.base.get() && a.letters == b.letters;
}
bool operator!=(const Word& a, const Word& b) { return !(a == b); }

bool operator==(const SmcMor& a, const SmcMor& b) {
  return a.dom == b.dom && a.cod == b.cod && a.perm == b.perm && a.family == b.family;
}

bool smc_valid(const SmcMor& m) {
  const int k = m.dom.size();
  if (m.cod.size() != k || m.size() != k ||
      static_cast<int>(m.family.size()) != k)
    return false;
  if (m.dom.base.get() != m.cod.base.get()) return false;
  std::vector<bool> hit(k, false);
  for (int i = 0; i < k; ++i) {
    int j = m.perm[i];
    if (j < 0 || j >= k || hit[j]) return false;
    hit[j] = true;
  }
  const FinCat& c = *m.dom.base;
  for (int i = 0; i < k; ++i) {
    int f = m.family[i];
    if (f < 0 || f >= c.morphism_count()) return false;
    if (c.dom(f) != m.dom.letters[i] || c.cod(f) != m.cod.letters[m.perm[i]])
      return false;
  }
  return true;
}

SmcMor smc_identity(const Word& w) {
  SmcMor m{w, w, {}, {}};
  for (int i = 0; i < w.size(); ++i) {
    m.perm.push_back(i);
    m.family.push_back(w.base->identity(w.letters[i]));
  }
  return m;
}

SmcMor smc_compose(const SmcMor& alpha, const SmcMor& beta) {
  if (alpha.cod != beta.dom)
    throw std::invalid_argument("smc_compose: middle word mismatch");
  const FinCat& c = *alpha.dom.base;
  const int k = alpha.size();
  SmcMor out{alpha.dom, beta.cod, std::vector<int>(k), std::vector<int>(k)};
  for (int i = 0; i < k; ++i) {
    out.perm[i] = beta.perm[alpha.perm[i]];
    out.family[i] = c.compose(alpha.family[i], beta.family[alpha.perm[i]]);
  }
  return out;
}

SmcMor smc_inverse(const SmcMor& m) {
  const FinCat& c = *m.dom.base;
  if (!c.is_groupoid()) throw std::logic_error("smc_inverse: base is not a groupoid");
  const int k = m.size();
  SmcMor out{m.cod, m.dom, std::vector<int>(k), std::vector<int>(k)};
  for (int i = 0; i < k; ++i) {
    out.perm[m.perm[i]] = i;
    out.family[m.perm[i]] = c.inverse(m.family[i]);
  }
  return out;
}

Word smc_tensor(const Word& x, const Word& y) {
  if (x.base.get() != y.base.get())
    throw std::invalid_argument("smc_tensor: mismatched base");
  Word out{x.base, x.letters};
  out.letters.insert(out.letters.end(), y.letters.begin(), y.letters.end());
  return out;
}

SmcMor smc_tensor(const SmcMor& x, const SmcMor& y) {
  if (x.dom.base.get() != y.dom.base.get())
    throw std::invalid_argument("smc_tensor: mismatched base");
  const int kx = x.size();
  SmcMor out{smc_tensor(x.dom, y.dom), smc_tensor(x.cod, y.cod), x.perm, x.family};
  for (int i = 0; i < y.size(); ++i) {
    out.perm.push_back(kx + y.perm[i]);
    out.family.push_back(y.family[i]);
  }
  return out;
}

SmcMor smc_symmetry(const Word& a, const Word& b) {
  if (a.base.get() != b.base.get())
    throw std::invalid_argument("smc_symmetry: mismatched base");
  const int ka = a.size(), kb = b.size();
  SmcMor out{smc_tensor(a, b), smc_tensor(b, a), std::vector<int>(ka + kb),
             std::vector<int>(ka + kb)};
  const FinCat& c = *a.base;
  for (int i = 0; i < ka; ++i) {
    out.perm[i] = kb + i;
    out.family[i] = c.identity(a.letters[i]);
  }
  for (int i = 0; i < kb; ++i) {
    out.perm[ka + i] = i;
    out.family[ka + i] = c.identity(b.letters[i]);
  }
  return out;
}

std::vector<Word> enumerate_words(const CatPtr& base, int max_len) {
  if (max_len < 0) throw std::invalid_argument("enumerate_words: negative bound");
  std::vector<Word> out;
  const int n = base->object_count();
  for (int len = 0; len <= max_len; ++len) {
    std::vector<int> letters(len, 0);
    if (len == 0) {
      out.push_back(Word{base, {}});
      continue;
    }
    if (n == 0) continue;
    while (true) {
      out.push_back(Word{base, letters});
      int i = len - 1;
      while (i >= 0 && letters[i] == n - 1) letters[i--] = 0;
      if (i < 0) break;
      ++letters[i];
    }
  }
  return out;
}

std::vector<SmcMor> enumerate_homs(const Word& a, const Word& b) {
  if (a.base.get() != b.base.get())
    throw std::invalid_argument("enumerate_homs: mismatched base");
  std::vector<SmcMor> out;
  const int k = a.size();
  if (b.size() != k) return out;
  if (k == 0) {
    out.push_back(SmcMor{a, b, {}, {}});
    return out;
  }
  const FinCat& c = *a.base;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::vector<int>> homs(k);
    bool nonempty = true;
    for (int i = 0; i < k && nonempty; ++i) {
      homs[i] = c.hom(a.letters[i], b.letters[perm[i]]);
      nonempty = !homs[i].empty();
    }
    if (!nonempty) continue;
    std::vector<int> pick(k, 0);
    while (true) {
      SmcMor m{a, b, perm, std::vector<int>(k)};
      for (int i = 0; i < k; ++i) m.family[i] = homs[i][pick[i]];
      out.push_back(std::move(m));
      int i = k - 1;
      while (i >= 0 && pick[i] + 1 == static_cast<int>(homs[i].size())) pick[i--] = 0;
      if (i < 0) break;
      ++pick[i];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::uint64_t count_homs(const Word& a, const Word& b) {
  if (a.base.get() != b.base.get())
    throw std::invalid_argument("count_homs: mismatched base");
  const int k = a.size();
  if (b.size() != k) return 0;
  if (k == 0) return 1;
  const FinCat& c = *a.base;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t total = 0;
  do {
    std::uint64_t prod = 1;
    for (int i = 0; i < k && prod; ++i)
      prod *= c.hom(a.letters[i], b.letters[perm[i]]).size();
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

int hom_rank(const SmcMor& m) {
  // Walk the permutations in lex order, adding the family-block size of the
  // ones preceding m.perm, then the family's mixed-radix rank inside its block.
  const int k = m.size();
  if (k == 0) return 0;
  const FinCat& c = *m.dom.base;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t rank = 0;
  do {
    if (perm == m.perm) break;
    std::uint64_t prod = 1;
    for (int i = 0; i < k && prod; ++i)
      prod *= c.hom(m.dom.letters[i], m.cod.letters[perm[i]]).size();
    rank += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::uint64_t inner = 0;
  for (int i = 0; i < k; ++i) {
    auto hs = c.hom(m.dom.letters[i], m.cod.letters[m.perm[i]]);
    auto it = std::find(hs.begin(), hs.end(), m.family[i]);
    if (it == hs.end()) throw std::invalid_argument("hom_rank: invalid family member");
    inner = inner * hs.size() + static_cast<std::uint64_t>(it - hs.begin());
  }
  return static_cast<int>(rank + inner);
}

int word_rank(const Word& w) {
  const int n = w.base->object_count();
  const int len = w.size();
  // words shorter than len, then the lex rank within the length block
  std::uint64_t prior = 0, power = 1;
  for (int l = 0; l < len; ++l) {
    prior += power;
    power *= static_cast<std::uint64_t>(n);
  }
  std::uint64_t inner = 0;
  for (int i = 0; i < len; ++i) inner = inner * n + w.letters[i];
  return static_cast<int>(prior + inner);
}

}  // namespace specat
