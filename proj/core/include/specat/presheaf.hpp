#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "specat/freesmc.hpp"

namespace specat {

/// A finite presheaf: per object c a carrier {0..card[c]-1}, per morphism
/// g : c -> d a function action[g] : X(d) -> X(c) (contravariant).
struct Presheaf {
  CatPtr base;
  std::vector<int> card;
  std::vector<std::vector<int>> action;

  int at(int c) const { return card.at(c); }
  int act(int g, int e) const { return action.at(g).at(e); }
  int total() const;
};

bool operator==(const Presheaf& x, const Presheaf& y);
bool operator!=(const Presheaf& x, const Presheaf& y);

/// Strict total order on presheaves over one base; used for canonical forms
/// and as a map key.
bool presheaf_less(const Presheaf& x, const Presheaf& y);

/// Identity and functoriality checks.
ValidationReport presheaf_validate(const Presheaf& x);

Presheaf empty_presheaf(const CatPtr& base);
Presheaf terminal_presheaf(const CatPtr& base);

/// The representable presheaf hom(-, c) with precomposition action.
Presheaf yoneda(const CatPtr& base, int c);

/// Lexicographically least relabeling of x; two presheaves are isomorphic
/// iff their canonical forms are equal.
Presheaf canonical_form(const Presheaf& x);

/// A natural transformation with its endpoints carried along.
struct NatTrans {
  Presheaf dom;
  Presheaf cod;
  std::vector<std::vector<int>> comp;

  int apply(int c, int e) const { return comp.at(c).at(e); }
};

bool operator==(const NatTrans& f, const NatTrans& g);

NatTrans nat_identity(const Presheaf& x);

/// Diagrammatic composite f then g; throws on a middle mismatch.
NatTrans nat_compose(const NatTrans& f, const NatTrans& g);

/// Naturality of the component family.
bool nat_is_natural(const NatTrans& f);

struct MorphismClass {
  bool mono = false;
  bool epi = false;
  bool iso = false;
};

/// Pointwise classification: mono iff every component is injective, epi iff
/// every component is surjective, iso iff both.
MorphismClass morphism_class(const NatTrans& f);

/// The coproduct of representables of a word's letters, with the element
/// decode table. Element (i, g) at object d has tag i < |word| and
/// g : d -> word[i]; elements are ordered by (tag, morphism index).
struct TaggedSum {
  Word word;
  Presheaf presheaf;
  std::vector<std::vector<std::pair<int, int>>> elems;

  int index_of(int obj, int tag, int mor) const;
  std::pair<int, int> decode(int obj, int e) const { return elems.at(obj).at(e); }
};

/// Object part of the sum functor.
TaggedSum sum_of(const Word& w);

/// Morphism part: (i, g) |-> (perm(i), g ; family[i]).
NatTrans sum_of(const SmcMor& m);

/// The index-level function |A| -> |B| of a map S A -> S B, read off at the
/// identity elements. Throws unless f's endpoints are the given sums.
std::vector<int> underlying_function(const TaggedSum& a, const TaggedSum& b,
                                     const NatTrans& f);

struct IndexClass {
  bool injective = false;
  bool surjective = false;
  bool bijective = false;
};

IndexClass index_class(const TaggedSum& a, const TaggedSum& b, const NatTrans& f);

/// The unique completion morphism with sum_of(result) == f when f is
/// bijective on indices; nullopt otherwise.
std::optional<SmcMor> lift_to_freesmc(const TaggedSum& a, const TaggedSum& b,
                                      const NatTrans& f);

/// All natural transformations x -> y in lexicographic component order.
/// Guarded by a per-object carrier cap (the enumeration is exponential).
std::vector<NatTrans> hom_enumerate(const Presheaf& x, const Presheaf& y,
                                    int per_object_cap = 8);

std::uint64_t hom_count(const Presheaf& x, const Presheaf& y);

/// Pointwise limit of a wide cospan legs[i] : D_i -> Z. The apex carrier at
/// c enumerates the agreeing tuples in lexicographic order; `tuples` decodes
/// them.
struct WidePullback {
  Presheaf apex;
  std::vector<std::vector<std::vector<int>>> tuples;
  std::vector<NatTrans> projections;
};

WidePullback wide_pullback(const std::vector<NatTrans>& legs);

/// True iff the mediating map from the cone into the pointwise (wide)
/// pullback of the cospan is surjective at every object. The cone must
/// commute with the cospan; a non-commuting input throws.
bool is_quasi_pullback(const std::vector<NatTrans>& cone,
                       const std::vector<NatTrans>& cospan);

/// Binary convenience: square with span h : Q -> X, k : Q -> Y over
/// cospan f : X -> Z <- Y : g.
bool is_quasi_pullback(const NatTrans& h, const NatTrans& k,
                       const NatTrans& f, const NatTrans& g);

struct EpiMonoFactorization {
  NatTrans epi;   // X ->> image
  NatTrans mono;  // image >-> Y
};

/// f = epi ; mono through the pointwise image with its induced action.
EpiMonoFactorization epi_mono_factorize(const NatTrans& f);

struct SumSubobject {
  std::vector<int> indices;  // the subset I of |G|, ascending
  Word subword;
  NatTrans inclusion;        // S(G|I) >-> S G
};

/// All 2^|G| subobjects of S G over a groupoid base, one per index subset in
/// lexicographic subset order. Throws on a non-groupoid base.
std::vector<SumSubobject> subobjects_of_sum(const Word& g);

}  // namespace specat
