#pragma once

#include <cstdint>
#include <vector>

#include "specat/species.hpp"

namespace specat {

/// Splitmix64 stream. Deliberately not std::uniform_int_distribution so that
/// seeded reports are byte-identical across standard libraries.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  /// Uniform-enough draw in [0, n); n must be positive.
  int below(int n);
  bool coin() { return next() & 1; }
  /// Derived independent stream.
  Rng fork();
};

/// Random presheaf over a groupoid: a sum of representable orbits and their
/// subgroup quotients, relabeled canonically. Total size <= max_total.
Presheaf random_presheaf(Rng& rng, const CatPtr& base, int max_total);

/// Random species over groupoid bases: a coproduct of representable-block
/// species with random quotient subgroups and random cod-side presheaves.
Species random_species(Rng& rng, const CatPtr& dom_base, const CatPtr& cod_base,
                       int degree, int max_blocks = 2, int max_coeff = 2);

/// Random natural coefficient family out of p: builds q (into the caller's
/// storage) as a quotient of p extended by fresh blocks, so the family mixes
/// mono and epi behaviour. The returned family points at p and q_storage.
CoeffNat random_coeff_nat(Rng& rng, const Species& p, Species& q_storage);

/// All subgroups of the automorphisms of w0, each given as a sorted list of
/// hom ranks. Deterministic order; index 0 is the trivial group.
std::vector<std::vector<int>> automorphism_subgroups(const Word& w0);

}  // namespace specat
