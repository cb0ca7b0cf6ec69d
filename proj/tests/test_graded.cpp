#include <doctest.h>

#include <random>

#include "opkit/graded.hpp"

using namespace opkit;

namespace {

Matrix random_matrix(const Field& f, std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> d(-2, 2);
  std::vector<std::vector<long>> m(r, std::vector<long>(c));
  for (auto& row : m)
    for (auto& x : row) x = d(rng);
  return Matrix::from_ints(f, m);
}

// Three-term complex in degrees lo..lo+2 with d^2 = 0 by construction.
ChainComplex random_complex(const Field& f, std::mt19937& rng, int lo) {
  std::size_t n0 = 1 + rng() % 3, n1 = 1 + rng() % 3, n2 = 1 + rng() % 3;
  GradedSpace s;
  for (std::size_t i = 0; i < n0; ++i) s.degrees[lo].push_back("a" + std::to_string(i));
  for (std::size_t i = 0; i < n1; ++i) s.degrees[lo + 1].push_back("b" + std::to_string(i));
  for (std::size_t i = 0; i < n2; ++i) s.degrees[lo + 2].push_back("c" + std::to_string(i));
  Matrix d1 = random_matrix(f, rng, n0, n1);
  Matrix k = kernel(d1);
  Matrix d2 = k.cols() ? k * random_matrix(f, rng, k.cols(), n2) : Matrix(f, n1, n2);
  return ChainComplex(f, s, {{lo + 1, d1}, {lo + 2, d2}});
}

Window wide() { return Window{4, -20, 20}; }

}  // namespace

TEST_CASE("homology examples") {
  Field q;
  SUBCASE("zero differential") {
    ChainComplex c = ChainComplex::concentrated(q, 0, 2);
    CHECK(homology(c).dims() == std::map<int, std::size_t>{{0, 2}});
  }
  SUBCASE("acyclic identity") {
    GradedSpace s;
    s.degrees[0] = {"x"};
    s.degrees[1] = {"y"};
    ChainComplex c(q, s, {{1, Matrix::identity(q, 1)}});
    CHECK(homology(c).dims().empty());
  }
  SUBCASE("K -0-> K -id-> K") {
    GradedSpace s;
    s.degrees[0] = {"x"};
    s.degrees[1] = {"y"};
    s.degrees[2] = {"z"};
    ChainComplex c(q, s, {{1, Matrix::identity(q, 1)}});
    auto h = homology(c);
    CHECK(h.dims() == std::map<int, std::size_t>{{2, 1}});
    CHECK(h.degrees.at(2).representatives.cols() == 1);
  }
  SUBCASE("d^2 != 0 is rejected") {
    GradedSpace s;
    s.degrees[0] = {"x"};
    s.degrees[1] = {"y"};
    s.degrees[2] = {"z"};
    ChainComplex c(q, s, {{1, Matrix::identity(q, 1)}, {2, Matrix::identity(q, 1)}});
    CHECK_THROWS_AS(homology(c), AxiomError);
  }
  SUBCASE("window edges are flagged") {
    GradedSpace s;
    s.degrees[0] = {"x"};
    s.degrees[1] = {"y"};
    s.degrees[2] = {"z"};
    ChainComplex c(q, s, {{1, Matrix::identity(q, 1)}});
    Homology h = homology(c, Window{1, 1, 2});
    CHECK(h.unreliable() == std::vector<int>{1});
    CHECK(h.dims() == std::map<int, std::size_t>{{2, 1}});
  }
}

TEST_CASE("shift") {
  Field q;
  std::mt19937 rng(3);
  ChainComplex c = random_complex(q, rng, 0);
  CHECK(shift(c, 0) == c);
  CHECK(shift(shift(c, 5), -5) == c);
  ChainComplex k = ChainComplex::concentrated(q, 0, 1);
  CHECK(shift(k, 3).space().dims() == std::map<int, std::size_t>{{3, 1}});
  for (int m : {-3, 1, 2}) {
    auto h = homology(c).dims();
    std::map<int, std::size_t> shifted;
    for (auto [d, n] : h) shifted[d + m] = n;
    CHECK(homology(shift(c, m)).dims() == shifted);
  }
}

TEST_CASE("tensor product") {
  Field q;
  std::mt19937 rng(5);
  ChainComplex unit = ChainComplex::concentrated(q, 0, 1);
  ChainComplex c = random_complex(q, rng, 0);
  ChainComplex cu = tensor(c, unit, wide());
  CHECK(cu.space().dims() == c.space().dims());
  for (int n = 1; n <= 2; ++n) CHECK(cu.d(n) == c.d(n));

  ChainComplex two = ChainComplex::concentrated(q, 0, 2), three = ChainComplex::concentrated(q, 0, 3);
  CHECK(tensor(two, three, wide()).dim(0) == 6);

  // Kunneth over a field, and d^2 = 0.
  for (Field f : {Field::rationals(), Field::prime(3)}) {
    for (int trial = 0; trial < 25; ++trial) {
      ChainComplex a = random_complex(f, rng, -1), b = random_complex(f, rng, 0);
      ChainComplex ab = tensor(a, b, wide());
      CHECK(ab.d_squared_zero());
      auto ha = homology(a).dims(), hb = homology(b).dims(), hab = homology(ab).dims();
      std::map<int, std::size_t> expect;
      for (auto [i, x] : ha)
        for (auto [j, y] : hb) expect[i + j] += x * y;
      CHECK(hab == expect);
    }
  }
  CHECK_THROWS_AS(tensor(c, ChainComplex::concentrated(Field::prime(2), 0, 1), wide()), ValidationError);
}

TEST_CASE("dualize") {
  Field q;
  CHECK(dualize(ChainComplex::concentrated(q, 0, 1)).space().dims() == std::map<int, std::size_t>{{0, 1}});
  CHECK(dualize(ChainComplex::concentrated(q, 2, 1)).space().dims() == std::map<int, std::size_t>{{-2, 1}});
  std::mt19937 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    ChainComplex c = random_complex(q, rng, trial % 3 - 1);
    ChainComplex dc = dualize(c);
    CHECK(dc.d_squared_zero());
    CHECK(dualize(dc) == c);
    std::map<int, std::size_t> reflected;
    for (auto [d, n] : homology(c).dims()) reflected[-d] = n;
    CHECK(homology(dc).dims() == reflected);
  }
}

TEST_CASE("homology projector") {
  Field q;
  GradedSpace s;
  s.degrees[0] = {"x", "y"};
  s.degrees[1] = {"e"};
  ChainComplex c(q, s, {{1, Matrix::from_ints(q, {{1}, {-1}})}});
  HomologyDegree h = homology(c).degrees.at(0);
  REQUIRE(h.dim == 1);
  HomologyProjector p(c, h);
  // x and y are homologous; both project to the same nonzero class.
  CHECK(p.coordinates({{0, Scalar(1)}}) == p.coordinates({{1, Scalar(1)}}));
  CHECK(p.coordinates({{0, Scalar(1)}, {1, Scalar(-1)}}).empty());
}
