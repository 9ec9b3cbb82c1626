#include <catch2/catch_amalgamated.hpp>

#include "elliptic/analysis.hpp"
#include "elliptic/ers.hpp"

using namespace elliptic;
using namespace elliptic::ers;
using elliptic::affine::AffineType;
using elliptic::affine::Coset1;
using elliptic::cosets::CosetSet;
using elliptic::cosets::parse_coset_set;
using elliptic::diagram::Fill;
using finite::FiniteType;
using finite::LengthClass;
using geom::Vector;

namespace {

MarkedERS bcc1_full() {  // BC_1 base, every layer over the full radical lattice
  return from_layers(finite::build_finite(FiniteType::BC, 1),
                     {{LengthClass::Short, parse_coset_set("Z*a+Z*b")},
                      {LengthClass::Long, parse_coset_set("Z*a+Z*b")}});
}

MarkedERS bc1_12() {  // BC_1 base, long layer shifted to odd a
  return from_layers(finite::build_finite(FiniteType::BC, 1),
                     {{LengthClass::Short, parse_coset_set("Z*a+Z*b")},
                      {LengthClass::Long, parse_coset_set("(1+2Z)*a+Z*b")}});
}

MarkedERS bcc1_star0() {  // BC_1 base, long layer L_{0,0}
  return from_layers(finite::build_finite(FiniteType::BC, 1),
                     {{LengthClass::Short, parse_coset_set("Z*a+Z*b")},
                      {LengthClass::Long, parse_coset_set("L(0,0)")}});
}

MarkedERS a1_11() {  // A_1 base, full layer
  return from_layers(finite::build_finite(FiniteType::A, 1),
                     {{LengthClass::Middle, parse_coset_set("Z*a+Z*b")}});
}

Vector eps(const MarkedERS& R, std::size_t i) { return geom::unit_eps(R.dim, i); }

}  // namespace

TEST_CASE("coset helpers") {
  auto full = parse_coset_set("Z*a+Z*b");
  auto odd_a = parse_coset_set("(1+2Z)*a+Z*b");
  CHECK(scale_set(odd_a, -1) == odd_a);
  CHECK(scale_set(full, 2) == parse_coset_set("2Z*a+2Z*b"));
  CHECK(minkowski_sum(odd_a, odd_a) == parse_coset_set("2Z*a+Z*b"));
  CHECK(fiber_has_b(parse_coset_set("L(0,0)"), 1));
  CHECK(fiber_has_a(parse_coset_set("2Z*a+Z*b"), 2));
  CHECK_FALSE(fiber_has_a(parse_coset_set("2Z*a+Z*b"), 1));
  CHECK(project_to_b(parse_coset_set("L(0,0)")) == Coset1(1, 0));
  CHECK(project_to_a(parse_coset_set("(1+2Z)*a+4Z*b")) == Coset1(2, 1));
}

TEST_CASE("axioms hold for the hand-built systems") {
  for (const MarkedERS& R : {bcc1_full(), bc1_12(), bcc1_star0(), a1_11()}) {
    auto rep = R.verify_axioms();
    INFO([&] {
      std::string s;
      for (const auto& n : rep.notes) s += n + "\n";
      return s;
    }());
    CHECK(rep.ok());
  }
}

TEST_CASE("a broken layer assignment fails reflection closure") {
  auto R = from_layers(finite::build_finite(FiniteType::BC, 1),
                       {{LengthClass::Short, parse_coset_set("(1+2Z)*a+Z*b")},
                        {LengthClass::Long, parse_coset_set("Z*a+Z*b")}});
  CHECK_FALSE(R.verify_axioms().reflection_closed);
}

TEST_CASE("radical data") {
  for (const MarkedERS& R : {bcc1_full(), bc1_12(), bcc1_star0()}) {
    auto rd = R.radical_data();
    CHECK(rd.marking_primitive);
    CHECK(rd.a_gen == geom::basis_a(R.dim));
    CHECK(rd.delta_b == geom::basis_b(R.dim));
  }
  CHECK(bcc1_full().lattice_rank() == 3);  // l + 2 with l = 1
  CHECK(bcc1_full().finite_rank() == 1);
}

TEST_CASE("quotients identify") {
  auto R = bcc1_full();
  auto [ta, la] = affine::identify_affine(quotient_by_a(R));
  CHECK(ta == AffineType::BCC);
  CHECK(la == 1);
  auto [tb, lb] = affine::identify_affine(quotient_by_b(R));
  CHECK(tb == AffineType::BCC);
  CHECK(lb == 1);

  auto S = bc1_12();
  auto [ta2, la2] = affine::identify_affine(quotient_by_a(S));
  CHECK(ta2 == AffineType::BCC);
  auto [tb2, lb2] = affine::identify_affine(quotient_by_b(S));
  CHECK(tb2 == AffineType::BC2);  // odd long layer in the a direction
  CHECK(lb2 == 1);

  auto [ft, fl] = identify_finite(quotient_full(R));
  CHECK(ft == FiniteType::BC);
  CHECK(fl == 1);
}

TEST_CASE("counting numbers, star and prime") {
  auto R = bc1_12();
  Vector e1 = eps(R, 0), a = geom::basis_a(R.dim);
  CHECK(analysis::counting_number(R, e1) == 1);
  Vector lng = rat(2) * e1 - a;
  CHECK(analysis::counting_number(R, lng) == 2);
  CHECK(analysis::star(R, lng) == rat(2) * e1 + a);
  // prime of the short root jumps to the long layer.
  Vector pr = analysis::prime_map(R, e1);
  CHECK(pr == rat(2) * e1 - a);
  CHECK(analysis::star(R, pr) == rat(2) * e1 + a);
  // In the full system the double itself is a root, so prime is the double.
  auto Rf = bcc1_full();
  CHECK(analysis::prime_map(Rf, e1) == rat(2) * e1);
  // No doubled class: prime is the identity.
  auto A = a1_11();
  Vector m = eps(A, 0) - eps(A, 1);
  CHECK(analysis::prime_map(A, m) == m);
}

TEST_CASE("non-reduced counting numbers") {
  auto R = bc1_12();
  Vector e1 = eps(R, 0);
  CHECK(analysis::nr_counting_dc(R, e1) == rat(1, 2));
  CHECK(analysis::nr_counting_star(R, e1) == rat(1));  // k((a')*)/2 = 2/2

  auto Rf = bcc1_full();
  CHECK(analysis::nr_counting_dc(Rf, e1) == rat(1, 2));
  CHECK(analysis::nr_counting_star(Rf, e1) == rat(1));  // 2a in R: no halving

  auto S = bcc1_star0();
  CHECK(analysis::nr_counting_dc(S, e1) == rat(1, 2));
  CHECK(analysis::nr_counting_star(S, e1) == rat(1));
}

TEST_CASE("paired simple system") {
  auto R = bcc1_full();
  auto pss = analysis::paired_simple_system(R);
  REQUIRE(pss.dc.size() == 2);
  Vector e1 = eps(R, 0), b = geom::basis_b(R.dim);
  CHECK(pss.dc[0] == b - rat(2) * e1);
  CHECK(pss.dc[1] == e1);
  CHECK(pss.marks == std::vector<long>{1, 2});
  CHECK(pss.delta_b_coeff == 1);
  CHECK(pss.mc[1] == rat(2) * e1);
  CHECK(pss.mc_star[1] == rat(2) * e1 + geom::basis_a(R.dim));
  // The affine node lifts to a representative avoiding doubled classes.
  auto S = bc1_12();
  auto pss2 = analysis::paired_simple_system(S);
  CHECK(pss2.dc[1] == e1);
  CHECK(pss2.dc[0] == b - rat(2) * e1 + geom::basis_a(R.dim));
}

TEST_CASE("analysis of BCC_1 with full layers") {
  auto R = bcc1_full();
  auto A = analysis::analyze(R);
  CHECK(A.norm_scale == 2);
  REQUIRE(A.exponents.size() == 2);
  CHECK(A.exponents[0] == 4);  // long node: 8 * 1 / (2 * 1)
  CHECK(A.exponents[1] == 4);  // short node: 2 * 2 / (2 * 1/2)
  CHECK(A.m_max == 4);
  CHECK(A.gamma_m.size() == 2);
  CHECK(A.coxeter_number == 1);
  REQUIRE(A.node_roots.size() == 4);
  CHECK(A.graph.nodes[0].fill == Fill::White);  // alpha_0
  CHECK(A.graph.nodes[1].fill == Fill::Black);  // alpha_1: 2 alpha_1 in R
  CHECK(A.graph.nodes[2].fill == Fill::White);  // alpha_0^*
  CHECK(A.graph.nodes[3].fill == Fill::Gray);   // (alpha_1')^*
  // Countings match the tabulated pattern (b / g with 1 1 1 1).
  CHECK(analysis::counting_number(R, A.pss.dc[0]) == 1);
  CHECK(analysis::counting_number(R, A.pss.dc[1]) == 1);
  CHECK(analysis::counting_number(R, A.pss.mc_star[1]) == 1);
}

TEST_CASE("analysis of the shifted-long system") {
  auto R = bc1_12();
  auto A = analysis::analyze(R);
  REQUIRE(A.exponents.size() == 2);
  CHECK(A.exponents[0] == 2);  // 8 * 1 / (2 * 2): collapsed
  CHECK(A.exponents[1] == 4);  // 2 * 2 / (2 * 1/2)
  CHECK(A.m_max == 4);
  REQUIRE(A.gamma_m == std::vector<std::size_t>{1});
  CHECK(A.coxeter_number == 2);
  REQUIRE(A.node_roots.size() == 3);  // alpha_0, alpha_1, (alpha_1')^*
  CHECK(A.graph.nodes[0].fill == Fill::White);
  CHECK(A.graph.nodes[1].fill == Fill::Gray);
  CHECK(A.graph.nodes[2].fill == Fill::Gray);
  CHECK(analysis::counting_number(R, A.pss.dc[0]) == 2);
  CHECK(analysis::counting_number(R, A.pss.dc[1]) == 1);
  CHECK(analysis::counting_number(R, A.pss.mc_star[1]) == 2);
  // The gray pair is joined by the quadruple dashed arrow toward the star.
  bool found_e5 = false;
  for (const auto& e : A.graph.edges)
    if (e.kind == diagram::EdgeKind::E5) {
      found_e5 = true;
      CHECK(e.toward == 2);
    }
  CHECK(found_e5);
}

TEST_CASE("analysis of the L00-long system") {
  auto R = bcc1_star0();
  auto A = analysis::analyze(R);
  CHECK(A.exponents[0] == 2);  // 8 * 1 / (2 * 2): collapsed
  CHECK(A.exponents[1] == 4);
  CHECK(A.coxeter_number == 2);
  CHECK(A.graph.nodes[0].fill == Fill::White);
  CHECK(A.graph.nodes[1].fill == Fill::Black);
  CHECK(A.graph.nodes[2].fill == Fill::Gray);
  CHECK(analysis::counting_number(R, A.pss.dc[0]) == 2);
  CHECK(analysis::counting_number(R, A.pss.mc_star[1]) == 1);
}

TEST_CASE("simply-laced analysis") {
  auto R = a1_11();
  auto A = analysis::analyze(R);
  CHECK(A.exponents == std::vector<Rational>{rat(1), rat(1)});
  CHECK(A.coxeter_number == 1);
  REQUIRE(A.node_roots.size() == 4);
  for (const auto& n : A.graph.nodes) CHECK(n.fill == Fill::White);
  int e4 = 0, inf = 0;
  for (const auto& e : A.graph.edges) {
    if (e.kind == diagram::EdgeKind::E4) ++e4;
    if (e.kind == diagram::EdgeKind::Inf) ++inf;
  }
  CHECK(e4 == 2);   // alpha_i -- alpha_i^*
  CHECK(inf == 4);  // all cross pairs
}

TEST_CASE("reduction companions") {
  auto R = bcc1_full();
  auto dc = reduce_dc(R);
  auto mc = reduce_mc(R);
  Vector e1 = eps(R, 0);
  // dc: long fiber loses the doubled points, short survives whole.
  CHECK(dc.fiber(e1) != nullptr);
  CHECK(*dc.fiber(rat(2) * e1) == parse_coset_set("L(1,1)"));
  // mc: every short root is multipliable here, so only the long layer remains.
  CHECK(mc.fiber(e1) == nullptr);
  CHECK(*mc.fiber(rat(2) * e1) == parse_coset_set("Z*a+Z*b"));
  CHECK(dc.verify_axioms().ok());
  CHECK(mc.verify_axioms().ok());
}

TEST_CASE("window description and orbits") {
  for (const MarkedERS& R : {bcc1_full(), bc1_12(), bcc1_star0(), a1_11()}) {
    auto chk = analysis::description_R_check(R, 2);
    INFO([&] {
      std::string s;
      for (const auto& n : chk.notes) s += n + "\n";
      return s;
    }());
    CHECK(chk.ok);
    auto orbits = analysis::w_orbits_window(R, 2);
    std::size_t total = 0;
    for (const auto& o : orbits) total += o.size();
    CHECK(total == R.enumerate_window(2).size());
  }
}
