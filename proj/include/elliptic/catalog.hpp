#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "elliptic/analysis.hpp"
#include "elliptic/ers.hpp"

namespace elliptic::catalog {

using cosets::CosetSet;
using ers::MarkedERS;
using finite::FiniteType;
using finite::LengthClass;
using geom::Vector;

// Pattern of values over the node positions 0..l of a family at rank l.
// Lookup priority per position i: the exact key "i", then "l" (last node),
// then "l-1", then "default".
using Pattern = std::map<std::string, Rational>;

inline std::vector<Rational> expand_pattern(const Pattern& p, long l) {
  std::vector<Rational> out;
  for (long i = 0; i <= l; ++i) {
    auto pick = [&](const std::string& key) -> const Rational* {
      auto it = p.find(key);
      return it == p.end() ? nullptr : &it->second;
    };
    const Rational* v = pick(std::to_string(i));
    if (!v && i == l) v = pick("l");
    if (!v && i == l - 1) v = pick("l-1");
    if (!v) v = pick("default");
    if (!v) throw std::domain_error("expand_pattern: no value for position " + std::to_string(i));
    out.push_back(*v);
  }
  return out;
}

// One tabulated family.
struct Entry {
  std::string name;                         // canonical ASCII identifier
  std::string display;                      // TeX-style display name
  std::vector<std::string> aliases;
  FiniteType base = FiniteType::A;
  long rank_min = 1;
  std::optional<long> rank_max;             // absent: unbounded
  std::map<LengthClass, CosetSet> layers;   // radical coset per length class
  long tier1 = 1, tier2 = 1;
  std::string dual;                         // name of the dual family
  std::string quotient_a;                   // affine code of R / (R a)
  std::string quotient_b;                   // affine code of R / (R delta_b)
  Pattern counting;                         // k at each node
  Pattern exponents;                        // m at each node
  Pattern nr_star;                          // k^nr((alpha')^*) at listed nodes
  std::map<LengthClass, long> orbits;       // Weyl orbit count per layer
  std::map<long, std::map<LengthClass, long>> orbits_by_rank;  // overrides
  std::optional<std::pair<std::string, std::string>> reduced_pair;  // (dc, mc)
  bool chain_compare = true;  // node patterns follow the chain from alpha_0

  bool admits_rank(long l) const {
    return l >= rank_min && (!rank_max || l <= *rank_max);
  }

  std::map<LengthClass, long> orbit_counts(long l) const {
    auto out = orbits;
    auto it = orbits_by_rank.find(l);
    if (it != orbits_by_rank.end())
      for (const auto& [c, n] : it->second) out[c] = n;
    return out;
  }
};

namespace detail {

inline LengthClass length_class_from_string(const std::string& s) {
  if (s == "short") return LengthClass::Short;
  if (s == "middle") return LengthClass::Middle;
  if (s == "long") return LengthClass::Long;
  throw std::invalid_argument("unknown length class: " + s);
}

inline Pattern pattern_from_json(const nlohmann::json& j) {
  Pattern p;
  for (const auto& [key, val] : j.items())
    p[key] = val.is_string() ? parse_rational(val.get<std::string>())
                             : rat(val.get<long>());
  return p;
}

inline Entry entry_from_json(const nlohmann::json& j) {
  Entry e;
  e.name = j.at("name").get<std::string>();
  e.display = j.at("display").get<std::string>();
  for (const auto& a : j.at("aliases")) e.aliases.push_back(a.get<std::string>());
  e.base = finite::finite_type_from_string(j.at("base").get<std::string>());
  e.rank_min = j.at("rank_min").get<long>();
  if (!j.at("rank_max").is_null()) e.rank_max = j.at("rank_max").get<long>();
  for (const auto& [cls, spec] : j.at("layers").items())
    e.layers[length_class_from_string(cls)] = cosets::coset_set_from_json(spec);
  e.tier1 = j.at("tier1").get<long>();
  e.tier2 = j.at("tier2").get<long>();
  e.dual = j.at("dual").get<std::string>();
  e.quotient_a = j.at("quotient_a").get<std::string>();
  e.quotient_b = j.at("quotient_b").get<std::string>();
  e.counting = pattern_from_json(j.at("counting"));
  e.exponents = pattern_from_json(j.at("exponents"));
  e.nr_star = pattern_from_json(j.at("nr_star"));
  for (const auto& [cls, n] : j.at("orbits").items())
    e.orbits[length_class_from_string(cls)] = n.get<long>();
  for (const auto& [rk, m] : j.at("orbits_by_rank").items()) {
    std::map<LengthClass, long> mm;
    for (const auto& [cls, n] : m.items())
      mm[length_class_from_string(cls)] = n.get<long>();
    e.orbits_by_rank[std::stol(rk)] = std::move(mm);
  }
  if (!j.at("reduced_pair").is_null())
    e.reduced_pair = {j.at("reduced_pair").at("dc").get<std::string>(),
                      j.at("reduced_pair").at("mc").get<std::string>()};
  e.chain_compare = j.at("compare").get<std::string>() == "chain";
  return e;
}

}  // namespace detail

// Walks the node graph of an analysis along nonzero inner products, starting
// at the distinguished node alpha_0 (pss.dc[0]); the nodes must form a path.
// Returns pss.dc indices in path order.
inline std::vector<std::size_t> chain_order(const analysis::Analysis& A) {
  const auto& dc = A.pss.dc;
  std::size_t n = dc.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (geom::inner(dc[i], dc[j]) != 0) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  std::vector<std::size_t> order = {0};
  std::vector<char> used(n, 0);
  used[0] = 1;
  while (order.size() < n) {
    std::size_t cur = order.back();
    std::optional<std::size_t> next;
    for (std::size_t cand : adj[cur]) {
      if (used[cand]) continue;
      if (next) throw std::domain_error("chain_order: node graph is not a path");
      next = cand;
    }
    if (!next) throw std::domain_error("chain_order: node graph is disconnected");
    used[*next] = 1;
    order.push_back(*next);
  }
  return order;
}

class Catalog {
 public:
  explicit Catalog(const std::string& dir = default_dir()) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
      throw std::invalid_argument("catalog directory not found: " + dir);
    for (const auto& de : fs::directory_iterator(dir)) {
      if (de.path().extension() != ".json") continue;
      std::ifstream in(de.path());
      nlohmann::json j;
      in >> j;
      Entry e = detail::entry_from_json(j);
      std::string nm = e.name;
      for (const auto& a : e.aliases) alias_[a] = nm;
      entries_.emplace(std::move(nm), std::move(e));
    }
    for (const auto& [nm, e] : entries_) {
      if (!entries_.count(e.dual))
        throw std::domain_error("catalog: dual of " + nm + " missing");
      if (e.reduced_pair &&
          (!entries_.count(e.reduced_pair->first) || !entries_.count(e.reduced_pair->second)))
        throw std::domain_error("catalog: reduction companions of " + nm + " missing");
    }
  }

  static std::string default_dir() {
    if (const char* env = std::getenv("ELLIPTIC_CATALOG_DIR")) return env;
#ifdef ELLIPTIC_DEFAULT_CATALOG_DIR
    return ELLIPTIC_DEFAULT_CATALOG_DIR;
#else
    return "catalog";
#endif
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [nm, e] : entries_) out.push_back(nm);
    return out;
  }

  const Entry& at(const std::string& name) const {
    auto it = entries_.find(resolve(name));
    if (it == entries_.end()) throw std::invalid_argument("unknown family: " + name);
    return it->second;
  }

  std::string resolve(const std::string& name) const {
    auto it = alias_.find(name);
    return it == alias_.end() ? name : it->second;
  }

  MarkedERS construct(const std::string& name, long l) const {
    const Entry& e = at(name);
    if (!e.admits_rank(l))
      throw std::invalid_argument(e.name + " does not admit rank " + std::to_string(l));
    auto base = finite::build_finite(e.base, l);
    std::vector<std::pair<LengthClass, CosetSet>> layers(e.layers.begin(), e.layers.end());
    return ers::from_layers(base, layers);
  }

  // All families whose elliptic diagram at the finite rank of R matches the
  // diagram of R.
  std::vector<std::pair<std::string, long>> classify_by_diagram(const MarkedERS& R) const {
    long l = static_cast<long>(R.finite_rank());
    diagram::Diagram D = analysis::analyze(R).graph;
    std::vector<std::pair<std::string, long>> hits;
    for (const auto& [nm, e] : entries_) {
      if (!e.admits_rank(l)) continue;
      if (diagram::isomorphic(D, cached_diagram(nm, l))) hits.push_back({nm, l});
    }
    return hits;
  }

  const diagram::Diagram& cached_diagram(const std::string& name, long l) const {
    auto key = std::make_pair(resolve(name), l);
    auto it = diagrams_.find(key);
    if (it == diagrams_.end())
      it = diagrams_.emplace(key, analysis::analyze(construct(key.first, l)).graph).first;
    return it->second;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> alias_;
  mutable std::map<std::pair<std::string, long>, diagram::Diagram> diagrams_;
};

}  // namespace elliptic::catalog
