#include "specat/workspace.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace specat {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw LoadError(where + ": " + what);
}

int object_index(const FinCat& c, const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    int i = v.get<int>();
    if (i < 0 || i >= c.object_count()) fail(where, "object index out of range");
    return i;
  }
  if (v.is_string()) {
    for (int i = 0; i < c.object_count(); ++i)
      if (c.object_name(i) == v.get<std::string>()) return i;
    fail(where, "unknown object '" + v.get<std::string>() + "'");
  }
  fail(where, "expected an object name or index");
}

int morphism_index(const FinCat& c, const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    int i = v.get<int>();
    if (i < 0 || i >= c.morphism_count()) fail(where, "morphism index out of range");
    return i;
  }
  if (v.is_string()) {
    for (int i = 0; i < c.morphism_count(); ++i)
      if (c.morphism_name(i) == v.get<std::string>()) return i;
    fail(where, "unknown morphism '" + v.get<std::string>() + "'");
  }
  fail(where, "expected a morphism name or index");
}

CatPtr load_category(const json& j, const std::string& where) {
  if (!j.contains("objects") || !j.contains("morphisms") || !j.contains("identities") ||
      !j.contains("composition"))
    fail(where, "a category needs objects, morphisms, identities, composition");
  std::vector<std::string> objects = j.at("objects").get<std::vector<std::string>>();
  const int n = static_cast<int>(objects.size());

  std::vector<Morphism> mors;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < j.at("morphisms").size(); ++i) {
    const json& jm = j.at("morphisms")[i];
    std::string mw = where + ".morphisms[" + std::to_string(i) + "]";
    Morphism m;
    m.name = jm.value("name", "m" + std::to_string(i));
    auto obj_of = [&](const json& v) -> int {
      if (v.is_number_integer()) {
        int k = v.get<int>();
        if (k < 0 || k >= n) fail(mw, "object index out of range");
        return k;
      }
      if (v.is_string()) {
        for (int k = 0; k < n; ++k)
          if (objects[k] == v.get<std::string>()) return k;
        fail(mw, "unknown object '" + v.get<std::string>() + "'");
      }
      fail(mw, "expected an object name or index");
    };
    m.dom = obj_of(jm.at("dom"));
    m.cod = obj_of(jm.at("cod"));
    names.push_back(m.name);
    mors.push_back(std::move(m));
  }
  const int nm = static_cast<int>(mors.size());
  auto mor_of = [&](const json& v, const std::string& w) -> int {
    if (v.is_number_integer()) {
      int k = v.get<int>();
      if (k < 0 || k >= nm) fail(w, "morphism index out of range");
      return k;
    }
    if (v.is_string()) {
      for (int k = 0; k < nm; ++k)
        if (names[k] == v.get<std::string>()) return k;
      fail(w, "unknown morphism '" + v.get<std::string>() + "'");
    }
    fail(w, "expected a morphism name or index");
  };

  std::vector<int> ids;
  if (static_cast<int>(j.at("identities").size()) != n)
    fail(where, "identities must list one morphism per object");
  for (std::size_t i = 0; i < j.at("identities").size(); ++i)
    ids.push_back(mor_of(j.at("identities")[i], where + ".identities"));

  std::vector<std::vector<int>> table(nm, std::vector<int>(nm, -1));
  for (std::size_t i = 0; i < j.at("composition").size(); ++i) {
    const json& t = j.at("composition")[i];
    std::string tw = where + ".composition[" + std::to_string(i) + "]";
    if (!t.is_array() || t.size() != 3) fail(tw, "expected a triple [f, g, fg]");
    int f = mor_of(t[0], tw), g = mor_of(t[1], tw), h = mor_of(t[2], tw);
    table[f][g] = h;
  }

  std::optional<std::vector<int>> inverses;
  if (j.contains("inverses")) {
    if (static_cast<int>(j.at("inverses").size()) != nm)
      fail(where, "inverses must list one morphism per morphism");
    std::vector<int> inv;
    for (std::size_t i = 0; i < j.at("inverses").size(); ++i)
      inv.push_back(mor_of(j.at("inverses")[i], where + ".inverses"));
    inverses = std::move(inv);
  }
  auto cat = std::make_shared<FinCat>(n, std::move(mors), std::move(ids),
                                      std::move(table), std::move(inverses),
                                      std::move(objects));
  ValidationReport r = validate_category(*cat);
  if (!r.ok()) fail(where, "validation failed\n" + r.to_string());
  return cat;
}

Presheaf load_presheaf(const CatPtr& base, const json& j, const std::string& where) {
  const FinCat& c = *base;
  Presheaf x{base, {}, {}};
  if (!j.contains("carrier")) fail(where, "a presheaf needs a carrier list");
  x.card = j.at("carrier").get<std::vector<int>>();
  if (static_cast<int>(x.card.size()) != c.object_count())
    fail(where, "carrier must list one count per object");
  x.action.assign(c.morphism_count(), {});
  for (int o = 0; o < c.object_count(); ++o) {
    int id = c.identity(o);
    x.action[id].resize(x.card[o]);
    for (int e = 0; e < x.card[o]; ++e) x.action[id][e] = e;
  }
  if (j.contains("actions")) {
    for (const auto& [key, val] : j.at("actions").items()) {
      int m = morphism_index(c, json(key), where + ".actions");
      x.action[m] = val.get<std::vector<int>>();
    }
  }
  ValidationReport r = presheaf_validate(x);
  if (!r.ok()) fail(where, "validation failed\n" + r.to_string());
  return x;
}

Word load_word(const CatPtr& base, const json& j, const std::string& where) {
  Word w{base, {}};
  for (const auto& v : j) w.letters.push_back(object_index(*base, v, where));
  return w;
}

Species load_species(const CatPtr& dom, const CatPtr& cod, const json& j,
                     const std::string& where) {
  Species p;
  p.dom_base = dom;
  p.cod_base = cod;
  p.degree = j.value("degree", 2);
  p.words = enumerate_words(dom, p.degree);
  const FinCat& bc = *cod;
  p.coeff.assign(p.words.size(), empty_presheaf(cod));

  if (j.contains("coefficients")) {
    for (std::size_t i = 0; i < j.at("coefficients").size(); ++i) {
      const json& jc = j.at("coefficients")[i];
      std::string cw = where + ".coefficients[" + std::to_string(i) + "]";
      Word w = load_word(dom, jc.at("word"), cw);
      if (w.size() > p.degree) fail(cw, "word longer than the degree bound");
      p.coeff[p.word_index(w)] = load_presheaf(cod, jc, cw);
    }
  }

  // transports default to the empty map out of empty coefficients
  for (int wi = 0; wi < p.word_count(); ++wi) {
    for (int wj = 0; wj < p.word_count(); ++wj) {
      if (p.words[wi].size() != p.words[wj].size()) continue;
      auto hs = enumerate_homs(p.words[wi], p.words[wj]);
      std::vector<Components> ranks(hs.size(), Components(bc.object_count()));
      if (p.coeff[wi].total() != 0) {
        for (auto& comps : ranks)
          for (int b = 0; b < bc.object_count(); ++b) comps[b].assign(p.coeff[wi].card[b], -1);
      }
      p.action[{wi, wj}] = std::move(ranks);
    }
  }
  if (j.contains("transports")) {
    for (std::size_t i = 0; i < j.at("transports").size(); ++i) {
      const json& jt = j.at("transports")[i];
      std::string tw = where + ".transports[" + std::to_string(i) + "]";
      Word wd = load_word(dom, jt.at("dom_word"), tw);
      Word wc = load_word(dom, jt.at("cod_word"), tw);
      SmcMor alpha{wd, wc, jt.at("perm").get<std::vector<int>>(), {}};
      for (const auto& v : jt.at("family"))
        alpha.family.push_back(morphism_index(*dom, v, tw + ".family"));
      if (!smc_valid(alpha)) fail(tw, "malformed completion morphism");
      Components comps = jt.at("components").get<Components>();
      if (static_cast<int>(comps.size()) != bc.object_count())
        fail(tw, "components must list one map per cod object");
      p.action[{p.word_index(wd), p.word_index(wc)}][hom_rank(alpha)] = std::move(comps);
    }
  }
  // reject the leftover holes (nonempty coefficient without a stated map)
  for (const auto& [key, ranks] : p.action) {
    for (const auto& comps : ranks)
      for (int b = 0; b < bc.object_count(); ++b)
        for (int e : comps[b])
          if (e < 0)
            fail(where, "transport missing for a nonempty coefficient (words " +
                            std::to_string(key.first) + " -> " +
                            std::to_string(key.second) + ")");
  }
  ValidationReport r = species_validate(p);
  if (!r.ok()) fail(where, "validation failed\n" + r.to_string());
  return p;
}

}  // namespace

void Workspace::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path);
}

void Workspace::load_text(const std::string& text, const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where + ": " + e.what());
  }
  auto fresh = [&](const std::string& name, const std::string& w) {
    if (cats_.count(name) || sheaves_.count(name) || species_.count(name) ||
        linear_.count(name))
      fail(w, "name collision on '" + name + "'");
  };
  if (j.contains("categories")) {
    for (std::size_t i = 0; i < j.at("categories").size(); ++i) {
      std::string w = where + ":categories[" + std::to_string(i) + "]";
      const json& jc = j.at("categories")[i];
      std::string name = jc.at("name").get<std::string>();
      fresh(name, w);
      cats_[name] = load_category(jc, w);
    }
  }
  auto find_cat = [&](const json& v, const std::string& w) -> const CatPtr& {
    std::string name = v.get<std::string>();
    auto it = cats_.find(name);
    if (it == cats_.end()) fail(w, "unknown category '" + name + "'");
    return it->second;
  };
  if (j.contains("presheaves")) {
    for (std::size_t i = 0; i < j.at("presheaves").size(); ++i) {
      std::string w = where + ":presheaves[" + std::to_string(i) + "]";
      const json& jp = j.at("presheaves")[i];
      std::string name = jp.at("name").get<std::string>();
      fresh(name, w);
      sheaves_[name] = load_presheaf(find_cat(jp.at("base"), w), jp, w);
    }
  }
  if (j.contains("species")) {
    for (std::size_t i = 0; i < j.at("species").size(); ++i) {
      std::string w = where + ":species[" + std::to_string(i) + "]";
      const json& jp = j.at("species")[i];
      std::string name = jp.at("name").get<std::string>();
      fresh(name, w);
      species_[name] =
          load_species(find_cat(jp.at("dom_base"), w), find_cat(jp.at("cod_base"), w), jp, w);
    }
  }
  if (j.contains("linear_species")) {
    for (std::size_t i = 0; i < j.at("linear_species").size(); ++i) {
      std::string w = where + ":linear_species[" + std::to_string(i) + "]";
      const json& jl = j.at("linear_species")[i];
      std::string name = jl.at("name").get<std::string>();
      fresh(name, w);
      LinearSpecies l;
      l.sizes = jl.at("sizes").get<std::vector<int>>();
      l.degree = static_cast<int>(l.sizes.size()) - 1;
      linear_[name] = std::move(l);
    }
  }
  if (j.contains("config")) {
    const json& jc = j.at("config");
    config.truncation = jc.value("truncation", config.truncation);
    config.probe_bound = jc.value("probe_bound", config.probe_bound);
    config.size_cap = jc.value("size_cap", config.size_cap);
    config.seed = jc.value("seed", config.seed);
  }
}

const CatPtr& Workspace::category(const std::string& name) const {
  auto it = cats_.find(name);
  if (it == cats_.end()) throw LoadError("unknown category '" + name + "'");
  return it->second;
}

const Presheaf& Workspace::presheaf(const std::string& name) const {
  auto it = sheaves_.find(name);
  if (it == sheaves_.end()) throw LoadError("unknown presheaf '" + name + "'");
  return it->second;
}

const Species& Workspace::species(const std::string& name) const {
  auto it = species_.find(name);
  if (it == species_.end()) throw LoadError("unknown species '" + name + "'");
  return it->second;
}

const LinearSpecies& Workspace::linear_species(const std::string& name) const {
  auto it = linear_.find(name);
  if (it == linear_.end()) throw LoadError("unknown linear species '" + name + "'");
  return it->second;
}

Species Workspace::resolve_species(const std::string& name) const {
  auto it = species_.find(name);
  if (it != species_.end()) return it->second;
  return catalog(name, config.truncation).species;
}

}  // namespace specat
