#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specat/species.hpp"

namespace specat {

/// A degree-indexed family of plain finite sets (no group action).
struct LinearSpecies {
  int degree = 0;
  std::vector<int> sizes;  // sizes[n] = |L_n|, n <= degree
};

/// A species over the terminal groupoid on both sides, viewed through its
/// symmetric-group presentation: per degree n a set with a right action of
/// the permutations of n letters (in lexicographic one-line order).
struct ClassicalSpecies {
  Species species;

  int degree() const { return species.degree; }
  /// |P_n|.
  int set_size(int n) const;
  /// p . sigma for the sigma with the given lexicographic rank.
  int act(int n, int p, int sigma_rank) const;
};

/// Wraps a species over terminal bases; throws if the bases are not both
/// the terminal groupoid.
ClassicalSpecies as_classical(const Species& p);

/// The free species on a linear one: (L x S)_n = L_n x S_n with the
/// right-translation action.
ClassicalSpecies free_symmetric(const LinearSpecies& l);

/// Labelled structure counts on k labels, one entry per degree <= N:
/// the size of the quotient of P_n x k^n by the diagonal identification,
/// computed by direct orbit enumeration.
std::vector<std::uint64_t> count_labelled(const ClassicalSpecies& p, int k);

/// Unlabelled counts per degree: orbits of P_n under the symmetric group,
/// cross-checked against the Burnside fixed-point average (the two must
/// agree; a mismatch throws).
std::vector<std::uint64_t> count_unlabelled(const ClassicalSpecies& p);

/// Stock species: E (sets), X (the singleton), L (linear orders),
/// C (cyclic orders, empty at degree 0), Perm (permutations under
/// conjugation). Throws on an unknown name.
ClassicalSpecies catalog(const std::string& name, int degree);

/// The k-element presheaf over the terminal groupoid.
Presheaf label_set(int k);

/// Class counts of a lan evaluation at cod object b, grouped by the length
/// of the representative's word.
std::vector<std::uint64_t> class_counts_by_degree(const LanEval& e, int b,
                                                  int degree);

}  // namespace specat
