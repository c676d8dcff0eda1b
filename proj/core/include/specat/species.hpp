#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "specat/presheaf.hpp"

namespace specat {

/// Components of a natural transformation between presheaves over one base,
/// without the endpoint copies: comp[b] maps dom(b) -> cod(b).
using Components = std::vector<std::vector<int>>;

/// A truncated species: for every word over dom_base of length <= degree a
/// coefficient presheaf over cod_base, plus the transport map for every
/// completion morphism between such words.
///
/// Words are indexed by their rank in enumerate_words(dom_base, degree);
/// transports are keyed by (dom word rank, cod word rank) and aligned with
/// enumerate_homs order. Coefficients above the degree are empty by
/// convention, which makes the truncation exact rather than approximate.
struct Species {
  CatPtr dom_base;
  CatPtr cod_base;
  int degree = 0;
  std::vector<Word> words;
  std::vector<Presheaf> coeff;
  std::map<std::pair<int, int>, std::vector<Components>> action;

  int word_count() const { return static_cast<int>(words.size()); }
  int word_index(const Word& w) const;

  /// Transport along alpha as a full NatTrans between coefficients.
  NatTrans transport(const SmcMor& alpha) const;

  /// Transport components for the alpha with the given ranks.
  const Components& transport_comp(int wi, int wj, int rank) const;
};

/// Checks coefficient presheaf laws, identity/composition functoriality of
/// the transports, and compatibility with the cod_base actions.
ValidationReport species_validate(const Species& p);

/// Species whose every coefficient is the terminal presheaf.
Species terminal_species(const CatPtr& dom_base, const CatPtr& cod_base, int degree);

/// Species with all coefficients empty.
Species empty_species(const CatPtr& dom_base, const CatPtr& cod_base, int degree);

/// Coefficient-wise coproduct (left summand first).
Species species_sum(const Species& p, const Species& q);

/// The representable-block species hom(w0, -)/H x y, where H is a set of
/// automorphisms of w0 acting by precomposition and y is a presheaf over the
/// cod base. H must contain the identity; pass {} for the trivial group.
Species block_species(const Word& w0, const std::vector<SmcMor>& h,
                      const Presheaf& y, int degree);

/// The identity species on a base: coefficient y(c) at each singleton word
/// [c], empty elsewhere. Its analytic functor is the identity.
Species identity_species(const CatPtr& base, int degree);

/// Quotient of a species by the congruence generated by the given element
/// identifications; pairs are (word rank, cod object, elem, elem).
/// `proj` carries the per-(word, object) projection onto classes.
struct QuotientResult {
  Species q;
  std::vector<std::vector<std::vector<int>>> proj;
};

QuotientResult quotient_species(const Species& p,
                                const std::vector<std::array<int, 4>>& pairs);

/// A natural family of coefficient maps phi : P => Q, one component per
/// (word, cod object).
struct CoeffNat {
  const Species* dom = nullptr;
  const Species* cod = nullptr;
  std::vector<Components> comp;  // indexed by word rank

  int apply(int wi, int b, int p) const { return comp.at(wi).at(b).at(p); }
};

/// Commutation with transports and with the cod_base actions.
bool coeff_nat_is_natural(const CoeffNat& phi);

CoeffNat coeff_nat_identity(const Species& p);

/// A value of the analytic functor of a species at a presheaf: per cod
/// object the quotient of all triples (word, coefficient element, argument
/// tuple) by the relation generated by transport along completion
/// morphisms. Classes are indexed densely by the rank of their
/// lexicographically least member.
struct Triple {
  int word = 0;  // word rank in the species
  int p = 0;     // coefficient element
  std::vector<int> xs;
};

bool operator==(const Triple& a, const Triple& b);
bool operator<(const Triple& a, const Triple& b);

struct CoendElement {
  int b = 0;
  int class_id = 0;
  Triple rep;
};

class LanEval {
public:
  LanEval() = default;
  LanEval(const Species& p, const Presheaf& x);

  const Presheaf& value() const { return value_; }
  const Presheaf& argument() const { return x_; }
  const Species& species() const { return *p_; }

  int class_count(int b) const { return value_.card.at(b); }
  const Triple& rep(int b, int cls) const { return reps_.at(b).at(cls); }
  CoendElement element(int b, int cls) const { return {b, cls, rep(b, cls)}; }

  /// Class of an explicit triple; throws if the triple is out of range.
  int class_of(int b, const Triple& t) const;

  /// Pretty form "word |> p (x0,..)" of a class representative.
  std::string describe(int b, int cls) const;

private:
  const Species* p_ = nullptr;
  Presheaf x_;
  Presheaf value_;
  std::vector<std::vector<Triple>> reps_;
  // per b: per word rank, offset of its vertex block and tuple strides
  std::vector<std::vector<long long>> offsets_;
  std::vector<std::vector<int>> class_of_vertex_;

  long long vertex_of(int b, const Triple& t) const;
};

/// Coend evaluation of the species' analytic functor.
LanEval lan_eval(const Species& p, const Presheaf& x);

/// Functorial action on f : X -> Y, as a map between the two evaluations.
NatTrans lan_map(const LanEval& lx, const LanEval& ly, const NatTrans& f);

/// Same map as bare components, without the endpoint copies; for sweeps.
void lan_map_comp(const LanEval& lx, const LanEval& ly, const NatTrans& f,
                  Components& out);

/// Component at X of the transformation induced by a coefficient family.
NatTrans lan_nat_at(const CoeffNat& phi, const LanEval& lpx, const LanEval& lqx);

/// Taylor-form evaluation: the same quotient computed over explicit object
/// tuples with its own relation enumeration, plus the witnessed bijection
/// (class -> class, per cod object) onto a coend evaluation.
struct TaylorEval {
  Presheaf value;
  std::vector<std::vector<Triple>> reps;
  std::vector<std::vector<int>> to_lan;  // bijection witness per cod object
  bool bijective = false;
};

TaylorEval taylor_eval(const Species& p, const Presheaf& x);

/// F^0 = empty, F^{i+1} = lan(P, F^i), with the canonical connecting maps.
struct AlgebraChain {
  std::vector<Presheaf> stages;    // k+1 stages starting at the empty presheaf
  std::vector<NatTrans> connecting;
  bool stabilized = false;         // last connecting map is an iso
};

AlgebraChain initial_algebra_chain(const Species& p, int steps);

/// Applies the functor to validated quasi-pullback probes and reports which
/// images remain quasi-pullbacks. `guarantee` is set when dom_base is a
/// groupoid (the case in which preservation is promised).
struct PreservationReport {
  bool guarantee = false;
  int probes = 0;
  int preserved = 0;
  std::vector<std::string> failures;
  bool all_preserved() const { return preserved == probes; }
};

struct QpbProbe {
  std::vector<NatTrans> cone;    // legs Q -> D_i
  std::vector<NatTrans> cospan;  // legs D_i -> Z
};

PreservationReport preserves_quasi_pullbacks(const Species& p,
                                             const std::vector<QpbProbe>& probes);

}  // namespace specat
