// Command-line surface for the elliptic root system library: catalog
// browsing, diagram emission, verification suites, quotients, orbit counts,
// duality, isomorphism search, gluing, folding, tier numbers, classification
// of user-supplied systems, and the Weyl-group structural checks.

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "elliptic/affine.hpp"
#include "elliptic/analysis.hpp"
#include "elliptic/catalog.hpp"
#include "elliptic/diagram.hpp"
#include "elliptic/ers.hpp"
#include "elliptic/transforms.hpp"
#include "elliptic/weyl.hpp"

using json = nlohmann::json;
using namespace elliptic;
using cosets::CosetSet;
using ers::MarkedERS;
using geom::Vector;

namespace {

catalog::Catalog& cat() {
  static catalog::Catalog c;
  return c;
}

// ---------------------------------------------------------------------------
// formatting helpers (all numbers rendered as exact rationals)
// ---------------------------------------------------------------------------

std::string coset_text(const CosetSet& S) {
  if (S.is_empty()) return "empty";
  const auto& L = S.lattice();
  std::ostringstream os;
  os << "lattice (" << L.p << ",0),(" << L.q << "," << L.r << ")";
  os << "; offsets";
  for (const auto& o : S.offsets()) os << " (" << o.m << "," << o.n << ")";
  return os.str();
}

std::string rat_text(const Rational& r) { return to_string(r); }

json vector_json(const Vector& v) { return geom::to_json(v); }

json transform_json(const transforms::RadicalTransform& t) {
  json j;
  j["radical"] = {rat_text(t.radical[0]), rat_text(t.radical[1]), rat_text(t.radical[2]),
                  rat_text(t.radical[3])};
  j["shear_a"] = rat_text(t.shear_a);
  j["shear_b"] = rat_text(t.shear_b);
  if (!t.eps_perm.empty()) {
    j["eps_perm"] = t.eps_perm;
    j["eps_sign"] = t.eps_sign;
  }
  return j;
}

struct Ledger {
  std::vector<weyl::CheckLine> lines;
  void add(const std::string& name, bool ok, std::string note = "") {
    lines.push_back({name, ok, std::move(note)});
  }
  bool ok() const {
    return std::all_of(lines.begin(), lines.end(), [](const auto& l) { return l.ok; });
  }
  void print() const {
    for (const auto& l : lines) {
      std::printf("[%s] %s", l.ok ? "ok" : "FAIL", l.name.c_str());
      if (!l.note.empty()) std::printf(" (%s)", l.note.c_str());
      std::printf("\n");
    }
  }
  json to_json() const {
    json j = json::array();
    for (const auto& l : lines) j.push_back({{"check", l.name}, {"ok", l.ok}, {"note", l.note}});
    return j;
  }
};

// Known same-diagram companions at degenerate low ranks: a few families of
// different base coincide there, so classification may return the companion.
std::string companion_name(const std::string& n, long l) {
  if (l == 1) {
    if (n == "B-22" || n == "C-11") return "A-11";
    if (n == "B-22star" || n == "C-11star") return "A-11star";
  }
  if (l == 2) {
    if (n == "B-11") return "C-11";
    if (n == "B-12") return "C-12";
    if (n == "C-21") return "B-21";
    if (n == "C-22") return "B-22";
  }
  return n;
}

bool classifies_as(const MarkedERS& R, const std::string& name, long l) {
  std::string canon = cat().resolve(name);
  for (const auto& [nm, rank] : cat().classify_by_diagram(R))
    if (rank == l && (nm == canon || nm == companion_name(canon, l))) return true;
  return false;
}

// Orbit counts per length class within the window, keyed by the norm of the
// orbit members relative to the distinct layer norms of the system.
std::map<finite::LengthClass, long> orbit_counts(const MarkedERS& R, long N) {
  std::set<Rational> norms;
  for (const auto& [g, S] : R.fibers)
    if (!S.is_empty()) norms.insert(geom::inner(g, g));
  std::vector<Rational> sorted(norms.begin(), norms.end());
  std::vector<finite::LengthClass> classes;
  using finite::LengthClass;
  if (sorted.size() == 1)
    classes = {LengthClass::Short};
  else if (sorted.size() == 2)
    classes = {LengthClass::Short, LengthClass::Long};
  else if (sorted.size() == 3)
    classes = {LengthClass::Short, LengthClass::Middle, LengthClass::Long};
  else
    throw std::domain_error("orbit_counts: more than three layer norms");
  std::map<finite::LengthClass, long> out;
  for (const auto& orbit : analysis::w_orbits_window(R, N)) {
    if (orbit.empty()) continue;
    Rational nm = geom::inner(orbit.front(), orbit.front());
    auto it = std::find(sorted.begin(), sorted.end(), nm);
    if (it == sorted.end()) throw std::logic_error("orbit_counts: orbit norm not a layer norm");
    ++out[classes[static_cast<std::size_t>(it - sorted.begin())]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// the per-family verification ledger
// ---------------------------------------------------------------------------

Ledger verify_family(const std::string& name, long l, long window) {
  Ledger led;
  const catalog::Entry& e = cat().at(name);
  if (!e.admits_rank(l)) {
    led.add("rank " + std::to_string(l) + " is admitted", false,
            "valid ranks start at " + std::to_string(e.rank_min));
    return led;
  }
  MarkedERS R = cat().construct(name, l);

  auto rep = R.verify_axioms();
  led.add("axioms", rep.ok(), rep.notes.empty() ? "" : rep.notes.front());

  analysis::Analysis A = analysis::analyze(R);

  // counting numbers and exponents against the tabulated patterns
  bool km_ok = true;
  std::string km_note;
  try {
    auto want_k = catalog::expand_pattern(e.counting, l);
    auto want_m = catalog::expand_pattern(e.exponents, l);
    if (e.chain_compare) {
      auto order = catalog::chain_order(A);
      for (long i = 0; i <= l; ++i) {
        if (rat(analysis::counting_number(R, A.pss.dc[order[i]])) != want_k[i]) km_ok = false;
        if (A.exponents[order[i]] != want_m[i]) km_ok = false;
      }
    } else {
      std::multiset<std::pair<Rational, Rational>> got, want;
      for (long i = 0; i <= l; ++i) {
        got.insert({rat(analysis::counting_number(R, A.pss.dc[i])), A.exponents[i]});
        want.insert({want_k[i], want_m[i]});
      }
      km_ok = got == want;
    }
  } catch (const std::exception& ex) {
    km_ok = false;
    km_note = ex.what();
  }
  led.add("counting numbers and exponents", km_ok, km_note);

  led.add("diagram classifies back to the family", classifies_as(R, name, l));

  // quotients by the two radical lines
  bool q_ok = true;
  std::string q_note;
  try {
    auto qa = affine::identify_affine(ers::quotient_by_a(R));
    auto qb = affine::identify_affine(ers::quotient_by_b(R));
    if (affine::code_of(qa.first) != e.quotient_a || qa.second != l) {
      q_ok = false;
      q_note = "marking quotient " + affine::code_of(qa.first);
    }
    if (affine::code_of(qb.first) != e.quotient_b || qb.second != l) {
      q_ok = false;
      q_note = "second quotient " + affine::code_of(qb.first);
    }
  } catch (const std::exception& ex) {
    q_ok = false;
    q_note = ex.what();
  }
  led.add("affine quotient types", q_ok, q_note);

  auto td = transforms::tier_numbers(R);
  led.add("tier numbers", td.t1 == e.tier1 && td.t2 == e.tier2 &&
                              td.t_total == td.t1 * td.t1_dual &&
                              td.t_total == td.t2 * td.t2_dual);

  led.add("dual classifies as the tabulated partner",
          classifies_as(transforms::dual(R), e.dual, l));

  bool orb_ok = true;
  std::string orb_note;
  try {
    orb_ok = orbit_counts(R, window) == e.orbit_counts(l);
  } catch (const std::exception& ex) {
    orb_ok = false;
    orb_note = ex.what();
  }
  led.add("orbit counts per layer", orb_ok, orb_note);

  auto desc = analysis::description_R_check(R, window);
  led.add("window description by counting tubes", desc.ok,
          desc.notes.empty() ? "" : desc.notes.front());

  return led;
}

// ---------------------------------------------------------------------------
// system input files
// ---------------------------------------------------------------------------

// Accepted schema: {"family": name, "rank": l}  or
// {"base": finite code, "rank": l, "layers": {"short"|"middle"|"long": coset spec}}.
MarkedERS system_from_json(const json& j) {
  long l = j.at("rank").get<long>();
  if (j.contains("family")) return cat().construct(j.at("family").get<std::string>(), l);
  auto base = finite::finite_type_from_string(j.at("base").get<std::string>());
  std::vector<std::pair<finite::LengthClass, CosetSet>> layers;
  for (const auto& [cls, spec] : j.at("layers").items())
    layers.push_back({catalog::detail::length_class_from_string(cls), cosets::coset_set_from_json(spec)});
  return ers::from_layers(finite::build_finite(base, l), layers);
}

MarkedERS system_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return system_from_json(j);
}

void emit(const std::optional<std::string>& json_out, const json& payload) {
  if (!json_out) return;
  std::ofstream out(*json_out);
  out << payload.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elliptic root system toolkit"};
  app.require_subcommand(1);
  std::optional<std::string> json_out;
  app.add_option("--json-out", json_out, "write the machine-readable payload to this file");

  // ---- catalog ----
  auto* c_catalog = app.add_subcommand("catalog", "browse the family catalog");
  c_catalog->require_subcommand(1);
  auto* c_list = c_catalog->add_subcommand("list", "list all family names");
  std::string show_name;
  auto* c_show = c_catalog->add_subcommand("show", "show one family");
  c_show->add_option("name", show_name, "family name or alias")->required();

  // ---- diagram ----
  auto* c_diagram = app.add_subcommand("diagram", "emit the elliptic diagram");
  std::string d_name, d_format = "text";
  long d_rank = 2;
  c_diagram->add_option("name", d_name)->required();
  c_diagram->add_option("-l,--rank", d_rank, "rank");
  c_diagram->add_option("--format", d_format)->check(CLI::IsMember({"text", "dot", "json"}));

  // ---- verify / check-all ----
  auto* c_verify = app.add_subcommand("verify", "run the invariant suite for one family");
  std::string v_name;
  long v_rank = 2, v_window = 3;
  c_verify->add_option("name", v_name)->required();
  c_verify->add_option("-l,--rank", v_rank);
  c_verify->add_option("--window", v_window);

  auto* c_check = app.add_subcommand("check-all", "run the suite over the whole catalog");
  std::string ranks_spec = "1..3";
  c_check->add_option("--ranks", ranks_spec, "rank range, e.g. 1..3");

  // ---- quotient / orbits / dual / tiers ----
  auto* c_quot = app.add_subcommand("quotient", "affine types of the two radical quotients");
  std::string qt_name;
  long qt_rank = 2;
  c_quot->add_option("name", qt_name)->required();
  c_quot->add_option("-l,--rank", qt_rank);

  auto* c_orbits = app.add_subcommand("orbits", "Weyl orbits of the window roots");
  std::string or_name;
  long or_rank = 2, or_window = 3;
  c_orbits->add_option("name", or_name)->required();
  c_orbits->add_option("-l,--rank", or_rank);
  c_orbits->add_option("--window", or_window);

  auto* c_dual = app.add_subcommand("dual", "dual system and its classification");
  std::string du_name;
  long du_rank = 2;
  c_dual->add_option("name", du_name)->required();
  c_dual->add_option("-l,--rank", du_rank);

  auto* c_tiers = app.add_subcommand("tiers", "tier numbers");
  std::string ti_name;
  long ti_rank = 2;
  c_tiers->add_option("name", ti_name)->required();
  c_tiers->add_option("-l,--rank", ti_rank);

  // ---- iso ----
  auto* c_iso = app.add_subcommand("iso", "search for an isomorphism between two families");
  std::string iso_a, iso_b;
  long iso_rank = 2;
  bool iso_marked = false;
  c_iso->add_option("first", iso_a)->required();
  c_iso->add_option("second", iso_b)->required();
  c_iso->add_option("-l,--rank", iso_rank);
  c_iso->add_flag("--marked", iso_marked, "require the marking line to be preserved");

  // ---- glue ----
  auto* c_glue = app.add_subcommand("glue", "glue two systems along their shared layers");
  std::string glue_left, glue_right;
  std::string glue_tau;
  c_glue->add_option("left", glue_left, "JSON file with the first factor")->required();
  c_glue->add_option("right", glue_right, "JSON file with the second factor")->required();
  c_glue->add_option("--tau", glue_tau, "radical shift da,db applied to the second factor");

  // ---- fold ----
  auto* c_fold = app.add_subcommand("fold", "fold along a diagram automorphism");
  std::string fo_name, fo_mode = "sum";
  long fo_rank = 2;
  c_fold->add_option("name", fo_name)->required();
  c_fold->add_option("-l,--rank", fo_rank);
  c_fold->add_option("--mode", fo_mode)->check(CLI::IsMember({"sum", "mean"}));

  // ---- classify ----
  auto* c_classify = app.add_subcommand("classify", "classify a system from a JSON file");
  std::string cl_file;
  c_classify->add_option("file", cl_file)->required();

  // ---- weyl ----
  auto* c_weyl = app.add_subcommand("weyl", "Weyl group structure checks");
  c_weyl->require_subcommand(1);
  auto* c_wcheck = c_weyl->add_subcommand("check", "run the structural suite");
  std::string w_name;
  long w_rank = 2, w_window = 2;
  c_wcheck->add_option("name", w_name)->required();
  c_wcheck->add_option("-l,--rank", w_rank);
  c_wcheck->add_option("--window", w_window);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*c_list) {
      json names = json::array();
      for (const auto& n : cat().names()) {
        std::printf("%s\n", n.c_str());
        names.push_back(n);
      }
      emit(json_out, {{"families", names}});
      return 0;
    }

    if (*c_show) {
      const catalog::Entry& e = cat().at(show_name);
      std::printf("name:       %s\n", e.name.c_str());
      std::printf("display:    %s\n", e.display.c_str());
      if (!e.aliases.empty()) {
        std::printf("aliases:   ");
        for (const auto& a : e.aliases) std::printf(" %s", a.c_str());
        std::printf("\n");
      }
      std::printf("base:       %s\n", finite::to_string(e.base).c_str());
      std::printf("ranks:      %ld..%s\n", e.rank_min,
                  e.rank_max ? std::to_string(*e.rank_max).c_str() : "inf");
      for (const auto& [cls, S] : e.layers)
        std::printf("layer %-6s %s\n", (finite::to_string(cls) + ":").c_str(),
                    coset_text(S).c_str());
      std::printf("tiers:      (%ld, %ld)\n", e.tier1, e.tier2);
      std::printf("dual:       %s\n", e.dual.c_str());
      std::printf("quotients:  by marking %s, by b-line %s\n", e.quotient_a.c_str(),
                  e.quotient_b.c_str());
      if (e.reduced_pair)
        std::printf("reduced pair: dc=%s mc=%s\n", e.reduced_pair->first.c_str(),
                    e.reduced_pair->second.c_str());
      json j = {{"name", e.name},
                {"display", e.display},
                {"tiers", {e.tier1, e.tier2}},
                {"dual", e.dual},
                {"quotient_a", e.quotient_a},
                {"quotient_b", e.quotient_b}};
      emit(json_out, j);
      return 0;
    }

    if (*c_diagram) {
      MarkedERS R = cat().construct(d_name, d_rank);
      analysis::Analysis A = analysis::analyze(R);
      const diagram::Diagram& D = A.graph;
      if (d_format == "dot") {
        std::printf("%s", diagram::to_dot(D).c_str());
      } else if (d_format == "json") {
        std::printf("%s\n", diagram::to_json(D).dump(2).c_str());
      } else {
        for (std::size_t i = 0; i < D.nodes.size(); ++i)
          std::printf("node %zu: %s [%s] root %s\n", i, D.nodes[i].label.c_str(),
                      diagram::to_string(D.nodes[i].fill).c_str(),
                      geom::to_string(A.node_roots[i]).c_str());
        for (const auto& e : D.edges) {
          std::printf("edge %zu -- %zu: %s", e.i, e.j, diagram::to_string(e.kind).c_str());
          if (e.toward >= 0) std::printf(" toward %d", e.toward);
          std::printf("\n");
        }
      }
      emit(json_out, diagram::to_json(D));
      return 0;
    }

    if (*c_verify) {
      Ledger led = verify_family(v_name, v_rank, v_window);
      led.print();
      emit(json_out, {{"family", v_name}, {"rank", v_rank}, {"checks", led.to_json()}});
      return led.ok() ? 0 : 1;
    }

    if (*c_check) {
      long lo = 1, hi = 3;
      if (std::sscanf(ranks_spec.c_str(), "%ld..%ld", &lo, &hi) != 2)
        throw CLI::ValidationError("--ranks", "expected a range like 1..3");
      long checks = 0, failures = 0;
      json all = json::array();
      for (const auto& name : cat().names()) {
        const catalog::Entry& e = cat().at(name);
        for (long l = lo; l <= hi; ++l) {
          if (!e.admits_rank(l)) continue;
          Ledger led = verify_family(name, l, 3);
          checks += static_cast<long>(led.lines.size());
          if (!led.ok()) {
            ++failures;
            std::printf("FAIL %s at rank %ld:\n", name.c_str(), l);
            led.print();
          }
          all.push_back({{"family", name}, {"rank", l}, {"ok", led.ok()}});
        }
      }
      std::printf("%ld checks run, %ld failing family/rank pairs\n", checks, failures);
      emit(json_out, {{"checks", checks}, {"failures", failures}, {"results", all}});
      return failures == 0 ? 0 : 1;
    }

    if (*c_quot) {
      MarkedERS R = cat().construct(qt_name, qt_rank);
      auto qa = affine::identify_affine(ers::quotient_by_a(R));
      auto qb = affine::identify_affine(ers::quotient_by_b(R));
      std::printf("quotient by the marking line: %s rank %ld\n", affine::code_of(qa.first).c_str(),
                  qa.second);
      std::printf("quotient by the b-line:       %s rank %ld\n", affine::code_of(qb.first).c_str(),
                  qb.second);
      emit(json_out, {{"quotient_a", affine::code_of(qa.first)},
                      {"quotient_b", affine::code_of(qb.first)},
                      {"rank", qa.second}});
      return 0;
    }

    if (*c_orbits) {
      MarkedERS R = cat().construct(or_name, or_rank);
      auto orbits = analysis::w_orbits_window(R, or_window);
      std::printf("%zu orbits in window %ld\n", orbits.size(), or_window);
      json jorb = json::array();
      for (std::size_t i = 0; i < orbits.size(); ++i) {
        std::printf("orbit %zu: %zu roots, e.g. %s\n", i, orbits[i].size(),
                    geom::to_string(orbits[i].front()).c_str());
        jorb.push_back({{"size", orbits[i].size()},
                        {"representative", vector_json(orbits[i].front())}});
      }
      for (const auto& [cls, n] : orbit_counts(R, or_window))
        std::printf("%s orbits: %ld\n", finite::to_string(cls).c_str(), n);
      emit(json_out, {{"orbits", jorb}});
      return 0;
    }

    if (*c_dual) {
      MarkedERS R = cat().construct(du_name, du_rank);
      MarkedERS D = transforms::dual(R);
      auto hits = cat().classify_by_diagram(D);
      json jh = json::array();
      for (const auto& [nm, l] : hits) {
        std::printf("%s rank %ld\n", nm.c_str(), l);
        jh.push_back({{"family", nm}, {"rank", l}});
      }
      if (hits.empty()) std::printf("no catalog match\n");
      emit(json_out, {{"dual_of", du_name}, {"matches", jh}});
      return hits.empty() ? 1 : 0;
    }

    if (*c_tiers) {
      MarkedERS R = cat().construct(ti_name, ti_rank);
      auto td = transforms::tier_numbers(R);
      std::printf("t = %ld, (t1, t2) = (%ld, %ld), dual (t1, t2) = (%ld, %ld)\n", td.t_total,
                  td.t1, td.t2, td.t1_dual, td.t2_dual);
      emit(json_out, {{"t", td.t_total},
                      {"t1", td.t1},
                      {"t2", td.t2},
                      {"t1_dual", td.t1_dual},
                      {"t2_dual", td.t2_dual}});
      return 0;
    }

    if (*c_iso) {
      MarkedERS A = cat().construct(iso_a, iso_rank);
      MarkedERS B = cat().construct(iso_b, iso_rank);
      auto res = transforms::isomorphic(A, B, iso_marked);
      json j;
      switch (res.verdict) {
        case transforms::IsoVerdict::Certificate: {
          std::printf("certificate: %zu step(s)\n", res.chain.size());
          json steps = json::array();
          for (const auto& s : res.chain) {
            std::printf("  %s\n", s.name.c_str());
            steps.push_back({{"name", s.name}, {"transform", transform_json(s.t)}});
          }
          j = {{"verdict", "certificate"}, {"chain", steps}};
          emit(json_out, j);
          return 0;
        }
        case transforms::IsoVerdict::Separated:
          std::printf("separated: %s\n", res.witness.c_str());
          emit(json_out, {{"verdict", "separated"}, {"witness", res.witness}});
          return 0;
        case transforms::IsoVerdict::Inconclusive:
          std::printf("inconclusive\n");
          emit(json_out, {{"verdict", "inconclusive"}});
          return 1;
      }
    }

    if (*c_glue) {
      MarkedERS L = system_from_file(glue_left);
      MarkedERS Rt = system_from_file(glue_right);
      transforms::RadicalTransform T = transforms::RadicalTransform::identity();
      if (!glue_tau.empty()) {
        auto comma = glue_tau.find(',');
        if (comma == std::string::npos)
          throw CLI::ValidationError("--tau", "expected da,db");
        T = transforms::RadicalTransform::tau(parse_rational(glue_tau.substr(0, comma)),
                                              parse_rational(glue_tau.substr(comma + 1)));
      }
      MarkedERS G = transforms::glue(L, Rt, T);
      auto hits = cat().classify_by_diagram(G);
      json jh = json::array();
      for (const auto& [nm, l] : hits) {
        std::printf("%s rank %ld\n", nm.c_str(), l);
        jh.push_back({{"family", nm}, {"rank", l}});
      }
      if (hits.empty()) std::printf("glued system matches no catalog family\n");
      emit(json_out, {{"matches", jh}});
      return hits.empty() ? 1 : 0;
    }

    if (*c_fold) {
      MarkedERS R = cat().construct(fo_name, fo_rank);
      analysis::Analysis A = analysis::analyze(R);
      auto autos = transforms::diagram_automorphisms(A);
      transforms::FoldMode mode =
          fo_mode == "mean" ? transforms::FoldMode::Mean : transforms::FoldMode::Sum;
      for (const auto& sigma : autos) {
        try {
          MarkedERS F = transforms::fold(R, {sigma, mode});
          auto hits = cat().classify_by_diagram(F);
          json jh = json::array();
          for (const auto& [nm, l] : hits) {
            std::printf("%s rank %ld\n", nm.c_str(), l);
            jh.push_back({{"family", nm}, {"rank", l}});
          }
          emit(json_out, {{"mode", fo_mode}, {"automorphism", sigma}, {"matches", jh}});
          return hits.empty() ? 1 : 0;
        } catch (const std::exception&) {
          continue;  // not every automorphism admits a fold; try the next
        }
      }
      std::printf("no foldable diagram automorphism\n");
      emit(json_out, {{"matches", json::array()}});
      return 1;
    }

    if (*c_classify) {
      MarkedERS R = system_from_file(cl_file);
      auto hits = cat().classify_by_diagram(R);
      json jh = json::array();
      for (const auto& [nm, l] : hits) {
        std::printf("%s rank %ld\n", nm.c_str(), l);
        jh.push_back({{"family", nm}, {"rank", l}});
      }
      if (hits.empty()) std::printf("no match\n");
      emit(json_out, {{"matches", jh}});
      return hits.empty() ? 1 : 0;
    }

    if (*c_wcheck) {
      MarkedERS R = cat().construct(w_name, w_rank);
      Ledger led;
      led.lines = weyl::check_suite(R, w_window);
      led.print();
      try {
        auto [a_side, b_side] = weyl::translation_lattice_types(R);
        std::printf("translation lattices: a-side %s, b-side %s\n",
                    weyl::to_string(a_side).c_str(), weyl::to_string(b_side).c_str());
      } catch (const std::exception&) {
        // reduced-quotient families have no tabulated lattice pair
      }
      emit(json_out, {{"family", w_name}, {"rank", w_rank}, {"checks", led.to_json()}});
      return led.ok() ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
