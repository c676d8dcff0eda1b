#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specat/workspace.hpp"

namespace specat {

/// Knobs shared by the named verification suites. Case counts are the suite
/// sizes; the defaults match the library's documented guarantees.
struct SuiteConfig {
  int truncation = 2;
  int probe_bound = 6;
  int size_cap = 8;
  std::uint64_t seed = 20260801;
  int qc_cases = 200;        // quasi-cartesian / round-trip seeded cases
  int generic_species = 50;  // dual-mode generic/minimal seeded species
  int qpb_probe_cap = 3;     // probe size cap for preservation sweeps
};

struct SuiteReport {
  std::string name;
  bool passed = false;
  std::vector<std::string> lines;
};

/// Suite names: counterexample, roundtrip, generic-char, qc-groupoid,
/// eq2-count, taylor-coend, prop3, prop4, qpb-preserve, burnside, all.
std::vector<std::string> suite_names();

/// Runs one named suite; throws std::invalid_argument on an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

/// The quasi-cartesian and round-trip sweeps share their seeded cases; this
/// runs them in one pass. Used by the acceptance harness; the named suites
/// call it with a single flag set.
std::pair<SuiteReport, SuiteReport> qc_roundtrip_suites(const SuiteConfig& cfg,
                                                        bool do_qc, bool do_rt);

std::string render_text(const SuiteReport& report);
std::string render_json(const SuiteReport& report);

}  // namespace specat
