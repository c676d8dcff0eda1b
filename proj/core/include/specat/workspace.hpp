#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "specat/classical.hpp"
#include "specat/species.hpp"

namespace specat {

/// Unreadable file or malformed JSON text. Maps to exit code 2 in the CLI.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Schema violations, unknown references, and failed validation on load.
/// Maps to exit code 1 in the CLI.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorkspaceConfig {
  int truncation = 2;
  int probe_bound = 6;
  int size_cap = 8;
  std::uint64_t seed = 20260801;
};

/// Named objects loaded from definition files. Every object is validated on
/// load; a name collision or dangling reference is a LoadError that names
/// the offender and its location.
class Workspace {
public:
  WorkspaceConfig config;

  void load_file(const std::string& path);
  void load_text(const std::string& text, const std::string& where);

  const CatPtr& category(const std::string& name) const;
  const Presheaf& presheaf(const std::string& name) const;
  const Species& species(const std::string& name) const;
  const LinearSpecies& linear_species(const std::string& name) const;

  bool has_category(const std::string& name) const { return cats_.count(name) > 0; }
  bool has_presheaf(const std::string& name) const { return sheaves_.count(name) > 0; }
  bool has_species(const std::string& name) const { return species_.count(name) > 0; }

  /// Loaded species by name, else a catalog species (E, X, L, C, Perm) at
  /// the configured truncation.
  Species resolve_species(const std::string& name) const;

  std::map<std::string, CatPtr> cats_;
  std::map<std::string, Presheaf> sheaves_;
  std::map<std::string, Species> species_;
  std::map<std::string, LinearSpecies> linear_;
};

}  // namespace specat
