#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace specat {

/// Outcome of a structural/law validation pass.
///
/// `structural` lists malformed-data problems (bad indices, wrong table
/// sizes); `violations` lists broken laws. A report is clean iff both are
/// empty. Law checks are skipped while structural problems are present, so
/// the two kinds never mix.
struct ValidationReport {
  std::vector<std::string> structural;
  std::vector<std::string> violations;

  bool ok() const { return structural.empty() && violations.empty(); }
  std::string to_string() const;
};

struct Morphism {
  int dom = 0;
  int cod = 0;
  std::string name;
};

/// A finite category presented by a full composition table.
///
/// Objects are 0..object_count()-1 and morphisms 0..morphism_count()-1 in
/// load order; every enumeration in the library is ascending in these
/// indices. Composition is written diagrammatically: compose(f, g) is
/// "f then g" and requires cod(f) == dom(g).
///
/// Construction never checks the category laws — build the value, then run
/// validate_category() to get a report. Accessors do bounds-check.
class FinCat {
public:
  FinCat(int object_count,
         std::vector<Morphism> morphisms,
         std::vector<int> identities,
         std::vector<std::vector<int>> compose_table,
         std::optional<std::vector<int>> inverses = std::nullopt,
         std::vector<std::string> object_names = {});

  int object_count() const { return n_objects_; }
  int morphism_count() const { return static_cast<int>(mors_.size()); }

  int dom(int m) const;
  int cod(int m) const;
  int identity(int c) const;
  bool composable(int f, int g) const;
  int compose(int f, int g) const;

  bool is_groupoid() const { return inverses_.has_value(); }
  int inverse(int m) const;

  /// Morphisms a -> b in ascending index order.
  std::vector<int> hom(int a, int b) const;

  const std::string& object_name(int c) const;
  const std::string& morphism_name(int m) const;

  /// Raw table access used by the validator; -1 marks an undefined entry.
  int raw_compose(int f, int g) const { return table_[f][g]; }
  const std::vector<Morphism>& morphisms() const { return mors_; }
  const std::vector<int>& identities() const { return ids_; }
  const std::optional<std::vector<int>>& inverses() const { return inverses_; }

  /// True once validate_category() would produce no structural issues.
  bool structurally_sound() const;

private:
  int n_objects_;
  std::vector<Morphism> mors_;
  std::vector<int> ids_;
  std::vector<std::vector<int>> table_;
  std::optional<std::vector<int>> inverses_;
  std::vector<std::string> obj_names_;
};

using CatPtr = std::shared_ptr<const FinCat>;

/// Reports every violated law: units, associativity, composability closure,
/// and the inverse laws when the category claims to be a groupoid.
/// Pure; running it twice yields the same report.
ValidationReport validate_category(const FinCat& cat);

/// Stock categories used as bases throughout the test fixtures.
namespace cats {

/// One object, one morphism.
CatPtr terminal();

/// n objects, identities only.
CatPtr discrete(int n);

/// The cyclic group Z/n as a one-object groupoid.
CatPtr cyclic(int n);

/// Two objects with a single isomorphism between them (4 morphisms).
CatPtr iso_pair();

/// The arrow category bot -> top; the smallest non-groupoid base.
CatPtr walking_arrow();

}  // namespace cats

}  // namespace specat
