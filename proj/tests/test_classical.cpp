#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <set>

#include "specat/classical.hpp"

using namespace specat;

namespace {

// independent partition-count oracle (Euler recurrence would be overkill at
// this size; enumerate non-increasing compositions directly)
int partitions_oracle(int n) {
  std::function<int(int, int)> go = [&](int left, int max_part) -> int {
    if (left == 0) return 1;
    int total = 0;
    for (int k = std::min(left, max_part); k >= 1; --k) total += go(left - k, k);
    return total;
  };
  return go(n, n);
}

// orbit count by canonical forms, independent of the union-find route
std::uint64_t orbit_oracle(const ClassicalSpecies& p, int n) {
  std::set<int> reps;
  const int sz = p.set_size(n);
  int nf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  for (int e = 0; e < sz; ++e) {
    int least = e;
    for (int r = 0; r < nf; ++r) least = std::min(least, p.act(n, e, r));
    reps.insert(least);
  }
  return reps.size();
}

}  // namespace

TEST_CASE("the free species on an empty linear species is empty") {
  LinearSpecies none{2, {0, 0, 0}};
  ClassicalSpecies p = free_symmetric(none);
  for (int n = 0; n <= 2; ++n) CHECK(p.set_size(n) == 0);
  CHECK(count_labelled(p, 3) == std::vector<std::uint64_t>{0, 0, 0});
}

TEST_CASE("the free species counts by powers of the label set") {
  LinearSpecies ones{2, {1, 1, 1}};
  ClassicalSpecies orders = free_symmetric(ones);
  CHECK(species_validate(orders.species).ok());
  // the generating identity: one structure per word of labels
  for (int k = 0; k <= 3; ++k) {
    auto counts = count_labelled(orders, k);
    std::uint64_t power = 1;
    for (int n = 0; n <= 2; ++n) {
      CHECK(counts[n] == power);
      power *= k;
    }
  }
  LinearSpecies point{2, {1, 0, 0}};
  auto constant = count_labelled(free_symmetric(point), 5);
  CHECK(constant == std::vector<std::uint64_t>{1, 0, 0});
}

TEST_CASE("labelled counts of the stock catalog") {
  CHECK(count_labelled(catalog("E", 2), 2) == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(count_labelled(catalog("E", 2), 0) == std::vector<std::uint64_t>{1, 0, 0});
  CHECK(count_labelled(catalog("L", 2), 2) == std::vector<std::uint64_t>{1, 2, 4});
  CHECK(count_labelled(catalog("X", 2), 3) == std::vector<std::uint64_t>{0, 3, 0});
}

TEST_CASE("unlabelled counts of the stock catalog") {
  CHECK(count_unlabelled(catalog("E", 3)) == std::vector<std::uint64_t>{1, 1, 1, 1});
  CHECK(count_unlabelled(catalog("L", 3)) == std::vector<std::uint64_t>{1, 1, 1, 1});

  auto perm = count_unlabelled(catalog("Perm", 3));
  for (int n = 0; n <= 3; ++n)
    CHECK(perm[n] == static_cast<std::uint64_t>(partitions_oracle(n)));
  REQUIRE(perm == std::vector<std::uint64_t>{1, 1, 2, 3});

  auto cyc = count_unlabelled(catalog("C", 4));
  CHECK(cyc == std::vector<std::uint64_t>{0, 1, 1, 1, 1});
  CHECK(catalog("C", 4).set_size(4) == 6);  // (4-1)! rotation cosets
}

TEST_CASE("orbit counts agree with the canonical-form oracle") {
  for (const std::string& name : {"E", "X", "L", "C", "Perm"}) {
    ClassicalSpecies p = catalog(name, 3);
    auto counts = count_unlabelled(p);
    for (int n = 0; n <= 3; ++n) CHECK(counts[n] == orbit_oracle(p, n));
  }
}

TEST_CASE("catalog species validate and reject unknown names") {
  for (const std::string& name : {"E", "X", "L", "C", "Perm"})
    CHECK(species_validate(catalog(name, 3).species).ok());
  CHECK_THROWS_AS(catalog("nope", 2), std::invalid_argument);
}

TEST_CASE("labelled counts specialize the evaluation") {
  for (const std::string& name : {"E", "X", "L", "C", "Perm"}) {
    ClassicalSpecies p = catalog(name, 3);
    for (int k = 0; k <= 3; ++k) {
      LanEval e(p.species, label_set(k));
      CHECK(count_labelled(p, k) == class_counts_by_degree(e, 0, 3));
    }
  }
}

TEST_CASE("classical wrappers demand terminal bases") {
  CHECK_THROWS_AS(as_classical(terminal_species(cats::cyclic(2), cats::terminal(), 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(count_labelled(catalog("E", 1), -1), std::invalid_argument);
}

TEST_CASE("group actions on the catalog satisfy the action laws") {
  ClassicalSpecies perm = catalog("Perm", 3);
  int nf = 6;
  for (int e = 0; e < perm.set_size(3); ++e) {
    CHECK(perm.act(3, e, 0) == e);  // lexicographic rank 0 is the identity
    for (int r = 0; r < nf; ++r)
      for (int s = 0; s < nf; ++s) {
        // composite rank via the species transports themselves
        int via_pair = perm.act(3, perm.act(3, e, r), s);
        // find the rank of the diagrammatic composite by its action on the
        // free species, which carries the regular representation
        static ClassicalSpecies regular = catalog("L", 3);
        int composite_rank = regular.act(3, r, s);
        CHECK(perm.act(3, e, composite_rank) == via_pair);
      }
  }
}
