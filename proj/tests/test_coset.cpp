#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "elliptic/coset.hpp"

using namespace elliptic::cosets;

namespace {

// Brute-force residue oracle: a predicate on (m, n) verified over a box.
using Pred = std::function<bool(long, long)>;

void check_against_oracle(const CosetSet& S, const Pred& oracle, long N = 6) {
  for (long m = -N; m <= N; ++m)
    for (long n = -N; n <= N; ++n) {
      INFO("point (" << m << "," << n << ")");
      CHECK(S.contains({m, n}) == oracle(m, n));
    }
}

long mod2(long x) { return ((x % 2) + 2) % 2; }

}  // namespace

TEST_CASE("hnf basics") {
  Lattice2 L = hnf({{1, 2}, {0, 4}});  // Z(a+2b) + 4Zb, i.e. M_{4,7}
  CHECK(L.det() == 4);
  CHECK(L.contains({1, 2}));
  CHECK(L.contains({2, 0}));
  CHECK(L.contains({1, -2}));
  CHECK_FALSE(L.contains({1, 0}));
  CHECK_FALSE(L.contains({0, 2}));
  CHECK_THROWS(hnf({{2, 0}, {4, 0}}));
}

TEST_CASE("spec membership examples") {
  CosetSet L11 = L_set(1, 1);
  CHECK(L11.contains({1, 0}));
  CHECK_FALSE(L11.contains({0, 0}));  // (0-1)(0-1) = 1, odd
  CosetSet S = parse_coset_set("2Z*a+Z*b");
  CHECK_FALSE(S.contains({1, 3}));
  CHECK(S.contains({2, 3}));
}

TEST_CASE("L sets against the residue oracle") {
  for (long i : {0L, 1L})
    for (long j : {0L, 1L}) {
      check_against_oracle(L_set(i, j), [i, j](long m, long n) {
        return mod2((m - i) * (n - j)) == 0;
      });
    }
  // Scaled versions: L_{i,j}^{s1,s2} = {s2 m a + s1 n b : (m-i)(n-j) even}.
  check_against_oracle(L_set(0, 0, 2, 2), [](long m, long n) {
    if (m % 2 != 0 || n % 2 != 0) return false;
    return mod2((m / 2) * (n / 2)) == 0;
  });
  check_against_oracle(L_set(1, 0, 2, 1), [](long m, long n) {
    // s1=2 scales b, s2=1 scales a
    if (n % 2 != 0) return false;
    return mod2((m - 1) * (n / 2)) == 0;
  });
}

TEST_CASE("canonicalize: coarsest lattice with fewest offsets") {
  // L_{0,0} has 3 residues mod (2,2).
  CosetSet L00 = L_set(0, 0);
  CHECK(L00.lattice().det() == 4);
  CHECK(L00.offsets().size() == 3);
  // Union of the two parity classes collapses to the full lattice.
  CosetSet even = parse_coset_set("2Z*a+Z*b");
  CosetSet odd = parse_coset_set("(1+2Z)*a+Z*b");
  CosetSet u = set_union(even, odd);
  CHECK(u == CosetSet::full());
  CHECK(u.lattice().det() == 1);
  // Order independence.
  CHECK(set_union(odd, even) == u);
  // Redundant offsets merge: {(0,0),(1,2)} over Z(1,2)+4Zb-ish input.
  CosetSet m47 = CosetSet::make(hnf({{1, 2}, {0, 4}}), {{0, 0}});
  check_against_oracle(m47, [](long m, long n) {
    // m a + 2 k b with m - k even  <=>  n even and m - n/2 even
    return n % 2 == 0 && mod2(m - n / 2) == 0;
  });
  CosetSet same = CosetSet::make(Lattice2{2, 0, 4}, {{0, 0}, {1, 2}});
  CHECK(same == m47);
}

TEST_CASE("set algebra agrees pointwise with boolean combinations") {
  std::vector<CosetSet> sets = {
      CosetSet::full(),          L_set(0, 0),
      L_set(1, 1),               parse_coset_set("2Z*a+Z*b"),
      parse_coset_set("(1+2Z)*a+4Z*b"),
      L_set(0, 1, 2, 2),         CosetSet::make(hnf({{1, 2}, {0, 4}}), {{0, 0}})};
  for (const auto& A : sets)
    for (const auto& B : sets) {
      CosetSet u = set_union(A, B), i = set_intersect(A, B), d = set_difference(A, B);
      for (long m = -6; m <= 6; ++m)
        for (long n = -6; n <= 6; ++n) {
          Point p{m, n};
          CHECK(u.contains(p) == (A.contains(p) || B.contains(p)));
          CHECK(i.contains(p) == (A.contains(p) && B.contains(p)));
          CHECK(d.contains(p) == (A.contains(p) && !B.contains(p)));
        }
      CHECK(set_subset(i, A));
      CHECK(set_subset(A, u));
      CHECK(set_equals(A, A));
    }
}

TEST_CASE("affine images") {
  AffineMap swap_ab;  // (m,n) -> (n,m)
  swap_ab.M = {elliptic::rat(0), elliptic::rat(1), elliptic::rat(1), elliptic::rat(0)};
  CHECK(affine_image(parse_coset_set("2Z*a+Z*b"), swap_ab) == parse_coset_set("Z*a+2Z*b"));

  AffineMap shift;
  shift.t = {elliptic::rat(1), elliptic::rat(0)};
  CHECK(affine_image(CosetSet::full(), shift) == CosetSet::full());

  AffineMap shear;  // (m,n) -> (m+n, n)
  shear.M = {elliptic::rat(1), elliptic::rat(1), elliptic::rat(0), elliptic::rat(1)};
  CosetSet img = affine_image(L_set(0, 0), shear);
  check_against_oracle(img, [](long m, long n) { return mod2((m - n) * n) == 0; });

  // Round trip under any unimodular map.
  AffineMap inv_shear;
  inv_shear.M = {elliptic::rat(1), elliptic::rat(-1), elliptic::rat(0), elliptic::rat(1)};
  for (const auto& S : {L_set(1, 0), parse_coset_set("4Z*a+Z*b"), L_set(0, 0, 2, 1)})
    CHECK(affine_image(affine_image(S, shear), inv_shear) == S);

  // Non-integral images are rejected.
  AffineMap half;
  half.M = {elliptic::rat(1, 2), elliptic::rat(0), elliptic::rat(0), elliptic::rat(1)};
  CHECK_THROWS(affine_image(parse_coset_set("(1+2Z)*a+Z*b"), half));
}

TEST_CASE("min_positive_a_step") {
  CHECK(min_positive_a_step(CosetSet::full(), {0, 0}) == 1);
  CHECK(min_positive_a_step(parse_coset_set("(1+2Z)*a+Z*b"), {1, 0}) == 2);
  CHECK(min_positive_a_step(L_set(0, 0), {0, 1}) == 2);
  CHECK_THROWS(min_positive_a_step(L_set(0, 0), {1, 1}));
}

TEST_CASE("enumerate_box") {
  CHECK(enumerate_box(CosetSet::full(), 1).size() == 9);
  CHECK(enumerate_box(L_set(1, 1), 1).size() == 8);
  CHECK(enumerate_box(parse_coset_set("4Z*a+4Z*b"), 3) == std::vector<Point>{{0, 0}});
  auto pts = enumerate_box(L_set(0, 0), 2);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("json round trip") {
  for (const auto& S : {L_set(0, 0), L_set(1, 1, 2, 2), parse_coset_set("(1+2Z)*a+4Z*b")}) {
    CHECK(coset_set_from_json(to_json(S)) == S);
  }
  CHECK(coset_set_from_json(nlohmann::json("L(1,1)")) == L_set(1, 1));
  CHECK(coset_set_from_json(nlohmann::json("L(0,0;2,2)")) == L_set(0, 0, 2, 2));
  CHECK(parse_coset_set("Z*a+Z*b") == CosetSet::full());
}
