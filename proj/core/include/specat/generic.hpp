#pragma once

#include <map>
#include <optional>
#include <string>

#include "specat/species.hpp"

namespace specat {

/// Deterministic family of probe presheaves over one base: every presheaf
/// with at most `bound` total elements up to isomorphism (canonical forms,
/// sorted), extended with the literal tagged sums S A for |A| <= sum_len.
/// Hom-sets between members are enumerated lazily and cached.
class ProbeFamily {
public:
  ProbeFamily(CatPtr base, int bound, int sum_len);

  const CatPtr& base() const { return base_; }
  int bound() const { return bound_; }
  int size() const { return static_cast<int>(members_.size()); }
  const Presheaf& member(int i) const { return members_.at(i); }
  const std::vector<Presheaf>& members() const { return members_; }

  /// Index of a member equal to x, or -1.
  int find(const Presheaf& x) const;

  const std::vector<NatTrans>& homs(int i, int j) const;

private:
  CatPtr base_;
  int bound_;
  int carrier_cap_ = 8;  // per-object cap for hom enumeration between members
  std::vector<Presheaf> members_;
  mutable std::map<std::pair<int, int>, std::vector<NatTrans>> hom_cache_;
};

/// Evaluation cache for one species over a probe family.
class AnalyticCtx {
public:
  AnalyticCtx(const Species& p, const ProbeFamily& probes)
      : p_(&p), probes_(&probes) {}

  const Species& species() const { return *p_; }
  const ProbeFamily& probes() const { return *probes_; }

  const LanEval& at(const Presheaf& x);
  const LanEval& at_member(int i) { return at(probes_->member(i)); }

private:
  const Species* p_;
  const ProbeFamily* probes_;
  std::map<Presheaf, LanEval, decltype(&presheaf_less)> cache_{&presheaf_less};
};

/// Builds the natural map S w -> X picking xs[i] at the i-th identity.
NatTrans tuple_as_nat(const TaggedSum& sw, const Presheaf& x,
                      const std::vector<int>& xs);

/// The tuple of identity elements, i.e. id_{S w} in tuple form.
std::vector<int> identity_tuple(const TaggedSum& sw);

/// Whitebox genericity over a groupoid base: the representative's family map
/// S w -> X is an isomorphism. Throws on a non-groupoid dom base.
bool is_generic_whitebox(const LanEval& fx, int b, int cls);

/// Whitebox minimality: the representative's family map is an epimorphism.
bool is_minimal_whitebox(const LanEval& fx, int b, int cls);

/// Probe-bounded genericity: the defining condition checked against every
/// cospan with apex X and every cospan drawn from the family within the
/// given search budget. Sound for refutation on any base; on groupoid bases
/// it agrees with the whitebox check because the decisive cospans (identity
/// leg against a tagged-sum leg) are always enumerated.
struct BoundedOpts {
  std::uint64_t cospan_budget = 4096;  // cap on |hom(X,Z)|*|hom(Y,Z)| per pair
};

bool is_generic_bounded(AnalyticCtx& ctx, const Presheaf& x, int b, int cls,
                        const BoundedOpts& opts = {});

bool is_minimal_bounded(AnalyticCtx& ctx, const Presheaf& x, int b, int cls,
                        const BoundedOpts& opts = {});

/// The generic-elements species of lan(P) together with the comparison data:
/// the witnessed coefficient isomorphism P = F and the mono/epi certificate
/// for eta at every probe.
struct CoefficientsResult {
  Species fcirc;
  // per word rank, per cod object: bijections p <-> generic class id
  std::vector<Components> to_generic;
  std::vector<Components> from_generic;
  bool iso_ok = false;
  bool eta_mono = true;
  bool eta_epi = true;
  std::string failure;
};

CoefficientsResult coefficients_of(AnalyticCtx& ctx);

/// A transformation between two analytic functors given extensionally by
/// components at every probe member (class -> class, per cod object).
struct ProbeNat {
  std::vector<Components> comp;  // indexed by probe member
};

/// lan of a coefficient family, evaluated at every probe member.
ProbeNat lan_nat(AnalyticCtx& cp, AnalyticCtx& cq, const CoeffNat& phi);

bool probe_nat_is_natural(AnalyticCtx& cp, AnalyticCtx& cq, const ProbeNat& psi);

/// Quasi-cartesianness over the probe family: every naturality square at
/// every probe morphism is a quasi-pullback. Naturality is pre-checked and
/// its failure throws. Squares at isomorphisms are skipped (they are
/// quasi-pullbacks for any natural family).
struct QcReport {
  bool quasi_cartesian = true;
  std::string witness;  // first failing square, if any
};

QcReport is_quasi_cartesian(AnalyticCtx& cp, AnalyticCtx& cq, const ProbeNat& psi);

/// Coefficient extraction from a quasi-cartesian family: phi(p) is the
/// unique q with psi(p (x) id) = q (x) id. A class with no such
/// representative is reported as a quasi-cartesianness failure witness.
struct ExtractionResult {
  bool ok = false;
  CoeffNat phi;
  std::string failure;  // "not quasi-cartesian at (word, b, p)" evidence
};

ExtractionResult extract_coefficient_nat(AnalyticCtx& cp, AnalyticCtx& cq,
                                         const ProbeNat& psi);

/// The walking-arrow counterexample: the representable species P at the top
/// letter, phi : P => 1, and the naturality square induced by
/// y(bot) -> y(top). The square commutes but is not a quasi-pullback; the
/// same construction over the discrete subcategory is quasi-cartesian.
struct CounterexampleReport {
  bool square_commutes = false;
  bool square_is_quasi_pullback = true;  // expected false
  bool full_sweep_quasi_cartesian = true;  // expected false
  bool discrete_variant_quasi_cartesian = false;  // expected true
  bool identity_variant_quasi_cartesian = false;  // expected true
  std::string witness;  // pullback element missed by the mediating map
  bool ok() const {
    return square_commutes && !square_is_quasi_pullback &&
           !full_sweep_quasi_cartesian && discrete_variant_quasi_cartesian &&
           identity_variant_quasi_cartesian;
  }
};

CounterexampleReport check_counterexample(int probe_bound = 6);

/// Coefficients of the composite analytic functor of Q after P, computed
/// combinatorially (composite elements whose family maps are jointly
/// bijective on indices) and certified extensionally against Q(P(X)) on
/// every probe, in the grades the output degree covers.
struct ComposeResult {
  bool ok = false;
  Species composite;
  bool certificate_ok = false;
  std::string failure;
};

ComposeResult compose_analytic(const Species& p, const Species& q, int out_degree,
                               int probe_bound = 6);

}  // namespace specat
