#include "specat/fincat.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace specat {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& s : structural) out << "structural: " << s << "\n";
  for (const auto& v : violations) out << "violation: " << v << "\n";
  if (ok()) out << "ok\n";
  return out.str();
}

FinCat::FinCat(int object_count, std::vector<Morphism> morphisms,
               std::vector<int> identities,
               std::vector<std::vector<int>> compose_table,
               std::optional<std::vector<int>> inverses,
               std::vector<std::string> object_names)
    : n_objects_(object_count),
      mors_(std::move(morphisms)),
      ids_(std::move(identities)),
      table_(std::move(compose_table)),
      inverses_(std::move(inverses)),
      obj_names_(std::move(object_names)) {
  if (obj_names_.empty()) {
    for (int c = 0; c < n_objects_; ++c) obj_names_.push_back("o" + std::to_string(c));
  }
  for (std::size_t m = 0; m < mors_.size(); ++m) {
    if (mors_[m].name.empty()) mors_[m].name = "m" + std::to_string(m);
  }
}

int FinCat::dom(int m) const { return mors_.at(m).dom; }
int FinCat::cod(int m) const { return mors_.at(m).cod; }

int FinCat::identity(int c) const {
  if (c < 0 || c >= n_objects_) throw std::invalid_argument("identity: bad object index");
  return ids_.at(c);
}

bool FinCat::composable(int f, int g) const { return cod(f) == dom(g); }

int FinCat::compose(int f, int g) const {
  if (!composable(f, g))
    throw std::invalid_argument("compose: cod(" + morphism_name(f) + ") != dom(" +
                                morphism_name(g) + ")");
  int h = table_.at(f).at(g);
  if (h < 0) throw std::logic_error("compose: table entry missing for composable pair");
  return h;
}

int FinCat::inverse(int m) const {
  if (!is_groupoid()) throw std::logic_error("inverse: category is not a groupoid");
  return inverses_->at(m);
}

std::vector<int> FinCat::hom(int a, int b) const {
  if (a < 0 || a >= n_objects_ || b < 0 || b >= n_objects_)
    throw std::invalid_argument("hom: bad object index");
  std::vector<int> out;
  for (int m = 0; m < morphism_count(); ++m)
    if (dom(m) == a && cod(m) == b) out.push_back(m);
  return out;
}

const std::string& FinCat::object_name(int c) const { return obj_names_.at(c); }
const std::string& FinCat::morphism_name(int m) const { return mors_.at(m).name; }

bool FinCat::structurally_sound() const {
  ValidationReport r = validate_category(*this);
  return r.structural.empty();
}

namespace {

void check_structure(const FinCat& c, ValidationReport& r) {
  const int n = c.object_count();
  const int m = c.morphism_count();
  if (n < 0) r.structural.push_back("negative object count");
  for (int i = 0; i < m; ++i) {
    const auto& mor = c.morphisms()[i];
    if (mor.dom < 0 || mor.dom >= n)
      r.structural.push_back("morphism " + c.morphism_name(i) + " has bad dom index");
    if (mor.cod < 0 || mor.cod >= n)
      r.structural.push_back("morphism " + c.morphism_name(i) + " has bad cod index");
  }
  if (static_cast<int>(c.identities().size()) != n) {
    r.structural.push_back("identity table has wrong size");
  } else {
    for (int o = 0; o < n; ++o) {
      int e = c.identities()[o];
      if (e < 0 || e >= m)
        r.structural.push_back("identity of object " + c.object_name(o) + " out of range");
    }
  }
  // compose table must be an m x m matrix of entries in [-1, m)
  bool shape_ok = true;
  for (int f = 0; f < m; ++f) {
    // raw_compose bounds-checks through .at; catch shape problems here
    try {
      for (int g = 0; g < m; ++g) {
        int h = c.raw_compose(f, g);
        if (h < -1 || h >= m) {
          r.structural.push_back("composition entry (" + c.morphism_name(f) + ";" +
                                 c.morphism_name(g) + ") out of range");
        }
      }
    } catch (const std::out_of_range&) {
      shape_ok = false;
    }
  }
  if (!shape_ok) r.structural.push_back("composition table is not a full matrix");
  if (c.inverses()) {
    if (static_cast<int>(c.inverses()->size()) != m) {
      r.structural.push_back("inverse table has wrong size");
    } else {
      for (int f = 0; f < m; ++f) {
        int i = (*c.inverses())[f];
        if (i < 0 || i >= m)
          r.structural.push_back("inverse of " + c.morphism_name(f) + " out of range");
      }
    }
  }
}

void check_laws(const FinCat& c, ValidationReport& r) {
  const int n = c.object_count();
  const int m = c.morphism_count();
  for (int o = 0; o < n; ++o) {
    int e = c.identities()[o];
    if (c.dom(e) != o || c.cod(e) != o)
      r.violations.push_back("identity of " + c.object_name(o) + " is not an endomorphism");
  }
  // composability closure: entry defined iff cod(f) == dom(g)
  for (int f = 0; f < m; ++f) {
    for (int g = 0; g < m; ++g) {
      int h = c.raw_compose(f, g);
      bool comp = c.cod(f) == c.dom(g);
      if (comp && h < 0)
        r.violations.push_back("composite (" + c.morphism_name(f) + ";" +
                               c.morphism_name(g) + ") undefined");
      if (!comp && h >= 0)
        r.violations.push_back("composite (" + c.morphism_name(f) + ";" +
                               c.morphism_name(g) + ") defined on a non-composable pair");
      if (comp && h >= 0 && (c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g)))
        r.violations.push_back("composite (" + c.morphism_name(f) + ";" +
                               c.morphism_name(g) + ") has wrong endpoints");
    }
  }
  // unit laws
  for (int f = 0; f < m; ++f) {
    int l = c.raw_compose(c.identities()[c.dom(f)], f);
    int rr = c.raw_compose(f, c.identities()[c.cod(f)]);
    if (l != f)
      r.violations.push_back("left unit law fails for " + c.morphism_name(f));
    if (rr != f)
      r.violations.push_back("right unit law fails for " + c.morphism_name(f));
  }
  // associativity on all composable triples
  for (int f = 0; f < m; ++f) {
    for (int g = 0; g < m; ++g) {
      if (c.cod(f) != c.dom(g)) continue;
      int fg = c.raw_compose(f, g);
      if (fg < 0) continue;
      for (int h = 0; h < m; ++h) {
        if (c.cod(g) != c.dom(h)) continue;
        int gh = c.raw_compose(g, h);
        if (gh < 0) continue;
        int left = c.raw_compose(fg, h);
        int right = c.raw_compose(f, gh);
        if (left != right)
          r.violations.push_back("associativity fails on triple (" + c.morphism_name(f) +
                                 ";" + c.morphism_name(g) + ";" + c.morphism_name(h) + ")");
      }
    }
  }
  if (c.inverses()) {
    for (int f = 0; f < m; ++f) {
      int i = (*c.inverses())[f];
      if (c.dom(i) != c.cod(f) || c.cod(i) != c.dom(f)) {
        r.violations.push_back("inverse of " + c.morphism_name(f) + " has wrong endpoints");
        continue;
      }
      if (c.raw_compose(f, i) != c.identities()[c.dom(f)])
        r.violations.push_back("inverse law f;f^-1 fails for " + c.morphism_name(f));
      if (c.raw_compose(i, f) != c.identities()[c.cod(f)])
        r.violations.push_back("inverse law f^-1;f fails for " + c.morphism_name(f));
    }
  }
}

}  // namespace

ValidationReport validate_category(const FinCat& cat) {
  ValidationReport r;
  check_structure(cat, r);
  if (r.structural.empty()) check_laws(cat, r);
  return r;
}

namespace cats {

// The builders return process-wide singletons: bases are compared by
// identity, so two calls must hand back the same object.

CatPtr terminal() {
  static CatPtr c = std::make_shared<FinCat>(
      1, std::vector<Morphism>{{0, 0, "id"}}, std::vector<int>{0},
      std::vector<std::vector<int>>{{0}}, std::vector<int>{0},
      std::vector<std::string>{"*"});
  return c;
}

namespace {

CatPtr make_discrete(int n) {
  std::vector<Morphism> mors;
  std::vector<int> ids;
  std::vector<std::vector<int>> table(n, std::vector<int>(n, -1));
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) {
    mors.push_back({i, i, "id" + std::to_string(i)});
    ids.push_back(i);
    table[i][i] = i;
    inv[i] = i;
  }
  return std::make_shared<FinCat>(n, std::move(mors), std::move(ids), std::move(table),
                                  std::move(inv));
}

CatPtr make_cyclic(int n) {
  std::vector<Morphism> mors;
  for (int i = 0; i < n; ++i)
    mors.push_back({0, 0, i == 0 ? std::string("id") : "s" + std::to_string(i)});
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
    inv[i] = (n - i) % n;
  }
  return std::make_shared<FinCat>(1, std::move(mors), std::vector<int>{0},
                                  std::move(table), std::move(inv),
                                  std::vector<std::string>{"*"});
}

CatPtr cached(std::map<int, CatPtr>& cache, int n, CatPtr (*make)(int)) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

CatPtr discrete(int n) {
  static std::map<int, CatPtr> cache;
  return cached(cache, n, &make_discrete);
}

CatPtr cyclic(int n) {
  static std::map<int, CatPtr> cache;
  return cached(cache, n, &make_cyclic);
}

CatPtr iso_pair() {
  // 0: id0, 1: id1, 2: u : 0 -> 1, 3: u^-1 : 1 -> 0
  static CatPtr c = [] {
    std::vector<Morphism> mors{{0, 0, "id0"}, {1, 1, "id1"}, {0, 1, "u"}, {1, 0, "v"}};
    std::vector<std::vector<int>> t(4, std::vector<int>(4, -1));
    t[0][0] = 0; t[0][2] = 2;
    t[1][1] = 1; t[1][3] = 3;
    t[2][1] = 2; t[2][3] = 0;
    t[3][0] = 3; t[3][2] = 1;
    return std::make_shared<FinCat>(2, std::move(mors), std::vector<int>{0, 1},
                                    std::move(t), std::vector<int>{0, 1, 3, 2},
                                    std::vector<std::string>{"a", "b"});
  }();
  return c;
}

CatPtr walking_arrow() {
  // 0: id_bot, 1: id_top, 2: u : bot -> top
  static CatPtr c = [] {
    std::vector<Morphism> mors{{0, 0, "id_bot"}, {1, 1, "id_top"}, {0, 1, "u"}};
    std::vector<std::vector<int>> t(3, std::vector<int>(3, -1));
    t[0][0] = 0; t[0][2] = 2;
    t[1][1] = 1;
    t[2][1] = 2;
    return std::make_shared<FinCat>(2, std::move(mors), std::vector<int>{0, 1},
                                    std::move(t), std::nullopt,
                                    std::vector<std::string>{"bot", "top"});
  }();
  return c;
}

}  // namespace cats

}  // namespace specat
