#pragma once

#include <cstdint>
#include <vector>

#include "specat/fincat.hpp"

namespace specat {

/// An object of the free symmetric strict monoidal completion of a base
/// category: a finite sequence of base objects.
struct Word {
  CatPtr base;
  std::vector<int> letters;

  int size() const { return static_cast<int>(letters.size()); }
  int letter(int i) const { return letters.at(i); }
};

bool operator==(const Word& a, const Word& b);
bool operator!=(const Word& a, const Word& b);

/// A morphism of the completion: a permutation of positions together with a
/// family of base morphisms, family[i] : dom[i] -> cod[perm[i]].
/// The permutation is stored in one-line notation as the forward map.
struct SmcMor {
  Word dom;
  Word cod;
  std::vector<int> perm;
  std::vector<int> family;

  int size() const { return static_cast<int>(perm.size()); }
};

bool operator==(const SmcMor& a, const SmcMor& b);

/// Structural sanity: matching lengths, perm a bijection, each family
/// member with the stated endpoints in the base.
bool smc_valid(const SmcMor& m);

SmcMor smc_identity(const Word& w);

/// Diagrammatic composite: alpha then beta. Throws on a middle-word mismatch.
SmcMor smc_compose(const SmcMor& alpha, const SmcMor& beta);

/// Inverse morphism; requires a groupoid base.
SmcMor smc_inverse(const SmcMor& m);

/// Concatenation of words; unit is the empty word, strictly associative.
Word smc_tensor(const Word& x, const Word& y);

/// Block sum of permutations, concatenation of families.
SmcMor smc_tensor(const SmcMor& x, const SmcMor& y);

/// The block-swap a (+) b -> b (+) a with identity components.
SmcMor smc_symmetry(const Word& a, const Word& b);

/// All words of length <= max_len in graded lexicographic order.
std::vector<Word> enumerate_words(const CatPtr& base, int max_len);

/// All morphisms a -> b, ordered lexicographically by (perm, family).
/// Empty unless the words have equal length.
std::vector<SmcMor> enumerate_homs(const Word& a, const Word& b);

/// Number of morphisms a -> b without materialising them.
std::uint64_t count_homs(const Word& a, const Word& b);

/// Position of m in enumerate_homs(m.dom, m.cod); O(k^2 + k log h).
int hom_rank(const SmcMor& m);

/// Position of w in enumerate_words(base, any bound >= w.size()).
int word_rank(const Word& w);

}  // namespace specat
