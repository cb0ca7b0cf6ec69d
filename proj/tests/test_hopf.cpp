#include <doctest.h>

#include <random>

#include "opkit/hopf.hpp"

using namespace opkit;

namespace {

GradedSpace gens(std::vector<std::pair<int, int>> deg_count) {
  GradedSpace v;
  int k = 0;
  for (auto [d, c] : deg_count)
    for (int i = 0; i < c; ++i) v.degrees[d].push_back("v" + std::to_string(k++));
  return v;
}

// Lyndon words of length n over an alphabet of size d, by brute force.
long lyndon_count(int d, int n) {
  long total = 0;
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  while (true) {
    bool lyndon = true;
    for (int r = 1; r < n && lyndon; ++r) {
      std::vector<int> rot(w.begin() + r, w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + r);
      if (!(w < rot)) lyndon = false;
    }
    if (lyndon) ++total;
    int i = n - 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == d - 1) w[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++w[static_cast<std::size_t>(i)];
  }
  return total;
}

// Over Q, T(V) = U(free Lie on V). Read off dims l_n from
// 1 / (1 - sum v_d t^d) = prod_{n even} (1 - t^n)^{-l_n} prod_{n odd} (1 + t^n)^{l_n}.
std::vector<long> free_lie_dims_oracle(const std::map<int, int>& v, int D) {
  std::vector<long> t(static_cast<std::size_t>(D) + 1, 0), prod(static_cast<std::size_t>(D) + 1, 0), l(static_cast<std::size_t>(D) + 1, 0);
  t[0] = 1;
  for (int n = 1; n <= D; ++n)
    for (auto [d, c] : v)
      if (d <= n) t[static_cast<std::size_t>(n)] += c * t[static_cast<std::size_t>(n - d)];
  prod[0] = 1;
  for (int n = 1; n <= D; ++n) {
    l[static_cast<std::size_t>(n)] = t[static_cast<std::size_t>(n)] - prod[static_cast<std::size_t>(n)];
    for (long k = 0; k < l[static_cast<std::size_t>(n)]; ++k) {
      std::vector<long> next(prod.size(), 0);
      for (int a = 0; a <= D; ++a) {
        if (n % 2 != 0) {
          next[static_cast<std::size_t>(a)] += prod[static_cast<std::size_t>(a)];
          if (a + n <= D) next[static_cast<std::size_t>(a + n)] += prod[static_cast<std::size_t>(a)];
        } else {
          for (int b = a; b <= D; b += n) next[static_cast<std::size_t>(b)] += prod[static_cast<std::size_t>(a)];
        }
      }
      prod = std::move(next);
    }
  }
  return l;
}

// Hilbert series of Sym on a graded basis: polynomial on even, exterior on odd
// (odd is polynomial in characteristic 2).
std::vector<std::size_t> sym_series(const std::vector<int>& degrees, bool char2, int D) {
  std::vector<std::size_t> p(static_cast<std::size_t>(D) + 1, 0);
  p[0] = 1;
  for (int d : degrees) {
    std::vector<std::size_t> q = p;
    if (d % 2 != 0 && !char2) {
      for (int n = D; n >= d; --n) q[static_cast<std::size_t>(n)] += p[static_cast<std::size_t>(n - d)];
    } else {
      for (int n = d; n <= D; ++n) q[static_cast<std::size_t>(n)] += q[static_cast<std::size_t>(n - d)];
    }
    p = std::move(q);
  }
  return p;
}

std::vector<std::size_t> sz(std::initializer_list<std::size_t> v) { return v; }

}  // namespace

TEST_CASE("tensor algebra dimensions") {
  CHECK(tensor_hopf(Field::prime(2), gens({{1, 1}}), 3).dims() == sz({1, 1, 1, 1}));
  CHECK(tensor_hopf(Field(), gens({{1, 2}}), 3).dims() == sz({1, 2, 4, 8}));
  CHECK(tensor_hopf(Field(), gens({{1, 1}, {2, 1}}), 4).dims() == sz({1, 1, 2, 3, 5}));
}

TEST_CASE("tensor algebra satisfies the Hopf axioms") {
  for (auto [f, v] : std::vector<std::pair<Field, GradedSpace>>{{Field::prime(2), gens({{1, 2}})},
                                                                 {Field(), gens({{1, 2}})},
                                                                 {Field::prime(3), gens({{1, 1}, {2, 1}})},
                                                                 {Field(), gens({{2, 2}})}}) {
    HopfReport r = check_hopf(tensor_hopf(f, v, 4));
    INFO(f.name());
    CHECK(r.valid);
    CHECK(r.checks.size() == 6 * 5);
  }
}

TEST_CASE("a broken antipode is reported") {
  HopfPresentation h = tensor_hopf(Field(), gens({{2, 1}}), 4);
  h.antipode[2] = Matrix::identity(Field(), 1);
  HopfReport r = check_hopf(h);
  CHECK_FALSE(r.valid);
  REQUIRE_FALSE(r.failures.empty());
  CHECK(r.failures.front().find("antipode") != std::string::npos);
}

TEST_CASE("primitives in degree of the generators are V") {
  HopfPresentation h = tensor_hopf(Field(), gens({{1, 3}}), 3);
  Matrix p = primitives(h, 1);
  CHECK(p.cols() == 3);
  CHECK(rank(p) == 3);
  CHECK(primitives(h, 0).cols() == 0);
}

TEST_CASE("primitives over Q match Lyndon word counts") {
  HopfPresentation h = tensor_hopf(Field(), gens({{2, 2}}), 10);
  auto p = primitive_dims(h);
  for (int n = 1; n <= 5; ++n) {
    CHECK(static_cast<long>(p[static_cast<std::size_t>(2 * n)]) == lyndon_count(2, n));
    CHECK(p[static_cast<std::size_t>(2 * n - 1)] == 0);
    CHECK(witt_number(2, n) == lyndon_count(2, n));
  }
  CHECK(p[2] == 2);
  CHECK(p[10] == 6);
  for (int n = 1; n <= 6; ++n) CHECK(witt_number(3, n) == lyndon_count(3, n));
}

TEST_CASE("primitives over Q: random graded V against the PBW factorization") {
  std::mt19937 rng(20261015);
  for (int trial = 0; trial < 6; ++trial) {
    std::map<int, int> v;
    int ngen = 1 + static_cast<int>(rng() % 2);
    for (int g = 0; g < ngen; ++g) ++v[1 + static_cast<int>(rng() % 3)];
    std::vector<std::pair<int, int>> shape(v.begin(), v.end());
    int D = 5;
    auto p = primitive_dims(tensor_hopf(Field(), gens(shape), D));
    auto oracle = free_lie_dims_oracle(v, D);
    for (int n = 1; n <= D; ++n) CHECK(static_cast<long>(p[static_cast<std::size_t>(n)]) == oracle[static_cast<std::size_t>(n)]);
  }
}

TEST_CASE("free Lie algebra has the primitive dimensions over Q") {
  for (auto shape : std::vector<std::vector<std::pair<int, int>>>{{{1, 2}}, {{2, 2}}, {{1, 1}, {2, 1}}}) {
    GradedSpace v = gens(shape);
    LiePresentation l = free_lie(Field(), v, 6);
    CHECK(check_lie(l).valid);
    auto p = primitive_dims(tensor_hopf(Field(), v, 6));
    for (int n = 1; n <= 6; ++n) {
      std::size_t c = 0;
      for (int d : l.degrees) c += d == n;
      CHECK(c == p[static_cast<std::size_t>(n)]);
    }
  }
}

TEST_CASE("primitives in characteristic 2: one generator") {
  auto p = primitive_dims(tensor_hopf(Field::prime(2), gens({{1, 1}}), 8));
  CHECK(std::vector<std::size_t>(p.begin() + 1, p.end()) == sz({1, 1, 0, 1, 0, 0, 0, 1}));
}

TEST_CASE("primitives in characteristic 2: two generators") {
  // restricted free Lie: sum over m 2^j = n of W_2(m)
  auto p = primitive_dims(tensor_hopf(Field::prime(2), gens({{1, 2}}), 4));
  CHECK(std::vector<std::size_t>(p.begin() + 1, p.end()) == sz({2, 3, 2, 6}));
}

TEST_CASE("primitives in characteristic 3") {
  auto even = primitive_dims(tensor_hopf(Field::prime(3), gens({{2, 1}}), 18));
  for (int n = 1; n <= 18; ++n) CHECK(even[static_cast<std::size_t>(n)] == (n == 2 || n == 6 || n == 18 ? 1u : 0u));
  // odd generator: x, x^2 = [x, x] / 2, then (x^2)^3
  auto odd = primitive_dims(tensor_hopf(Field::prime(3), gens({{1, 1}}), 6));
  CHECK(std::vector<std::size_t>(odd.begin() + 1, odd.end()) == sz({1, 1, 0, 0, 0, 1}));
  // over Q the odd case stops at x^2
  auto q = primitive_dims(tensor_hopf(Field(), gens({{1, 1}}), 6));
  CHECK(std::vector<std::size_t>(q.begin() + 1, q.end()) == sz({1, 1, 0, 0, 0, 0}));
}

TEST_CASE("restricted closure equals the primitives") {
  struct Case {
    Field f;
    std::vector<std::pair<int, int>> v;
    int D;
  };
  for (const Case& c : std::vector<Case>{{Field::prime(2), {{1, 1}}, 8},
                                         {Field::prime(2), {{1, 2}}, 4},
                                         {Field::prime(3), {{2, 1}}, 18},
                                         {Field::prime(3), {{1, 1}}, 6},
                                         {Field::prime(3), {{2, 2}}, 8},
                                         {Field::prime(5), {{2, 1}}, 10}}) {
    RestrictedReport r = restricted_monad(c.f, gens(c.v), c.D);
    INFO(c.f.name() << " D=" << c.D);
    CHECK(r.closure_matches);
    CHECK(r.closure_dims == r.primitive_dims);
    CHECK(r.p_power_closed);
    CHECK(r.commutator_closed);
  }
  CHECK_THROWS_AS(restricted_monad(Field(), gens({{1, 1}}), 4), ValidationError);
}

TEST_CASE("primitives of T(V) are closed under commutators over Q") {
  HopfPresentation h = tensor_hopf(Field(), gens({{1, 1}, {2, 1}}), 5);
  CHECK(primitives_closed_under_commutator(h));
  CHECK(primitives_closed_under_p_power(h));
}

TEST_CASE("Lie axioms") {
  CHECK(check_lie(heisenberg_lie(Field(), 1)).valid);
  CHECK(check_lie(heisenberg_lie(Field(), 2)).valid);
  CHECK(check_lie(abelian_lie(Field(), gens({{1, 2}, {2, 1}}))).valid);

  // x, y, z even; [y, z] = v, [z, x] = w, [x, y] = u, [z, u] = t, other brackets zero
  LiePresentation bad{Field(), {"x", "y", "z", "u", "v", "w", "t"}, {2, 2, 2, 4, 4, 4, 6}, {}};
  bad.bracket[{0, 1}] = {{3, Scalar(1)}};
  bad.bracket[{1, 2}] = {{4, Scalar(1)}};
  bad.bracket[{0, 2}] = {{5, Scalar(-1)}};
  bad.bracket[{2, 3}] = {{6, Scalar(1)}};
  LieReport r = check_lie(bad);
  CHECK_FALSE(r.valid);
  CHECK(r.failures.front().find("Jacobi") != std::string::npos);
  CHECK_THROWS_AS(enveloping(bad, 6), AxiomError);

  LiePresentation wrong_degree{Field(), {"x", "y"}, {2, 2}, {}};
  wrong_degree.bracket[{0, 1}] = {{0, Scalar(1)}};
  CHECK_FALSE(check_lie(wrong_degree).valid);

  LiePresentation self{Field(), {"x", "y"}, {2, 4}, {}};
  self.bracket[{0, 0}] = {{1, Scalar(1)}};
  CHECK_FALSE(check_lie(self).valid);
}

TEST_CASE("enveloping algebra dimensions") {
  CHECK(enveloping(abelian_lie(Field(), gens({{2, 2}})), 4).hopf.dims() == sz({1, 0, 2, 0, 3}));
  CHECK(enveloping(abelian_lie(Field(), gens({{1, 1}})), 3).hopf.dims() == sz({1, 1, 0, 0}));
  CHECK(enveloping(abelian_lie(Field(), gens({{1, 2}})), 3).hopf.dims() == sz({1, 2, 1, 0}));
  // x, y even: k[x, y, z] with z in degree 4
  CHECK(enveloping(heisenberg_lie(Field(), 2), 6).hopf.dims() == sz({1, 0, 2, 0, 4, 0, 6}));
  // x, y odd: exterior on x, y times k[z]
  CHECK(enveloping(heisenberg_lie(Field(), 1), 4).hopf.dims() == sz({1, 2, 2, 2, 2}));
}

TEST_CASE("enveloping algebras satisfy PBW and the Hopf axioms") {
  std::vector<LiePresentation> corpus{abelian_lie(Field(), gens({{2, 2}})), abelian_lie(Field(), gens({{1, 2}})),
                                      heisenberg_lie(Field(), 1), heisenberg_lie(Field(), 2),
                                      free_lie(Field(), gens({{1, 2}}), 4), heisenberg_lie(Field::prime(3), 2)};
  for (const auto& l : corpus) {
    Envelope e = enveloping(l, 4);
    CHECK(e.hopf.dims() == sym_series(l.degrees, l.field.characteristic() == 2, 4));
    CHECK(e.pbw_dims == e.hopf.dims());
    CHECK(check_hopf(e.hopf).valid);
  }
  // U of the free Lie algebra is the tensor algebra
  CHECK(enveloping(free_lie(Field(), gens({{1, 2}}), 4), 4).hopf.dims() == sz({1, 2, 4, 8, 16}));
}

TEST_CASE("Milnor-Moore over Q on the corpus") {
  std::vector<std::pair<LiePresentation, int>> corpus{{abelian_lie(Field(), gens({{2, 2}})), 6},
                                                      {abelian_lie(Field(), gens({{1, 1}, {2, 1}})), 5},
                                                      {heisenberg_lie(Field(), 1), 5},
                                                      {heisenberg_lie(Field(), 2), 8},
                                                      {free_lie(Field(), gens({{1, 2}}), 5), 5},
                                                      {free_lie(Field(), gens({{2, 1}, {3, 1}}), 7), 7}};
  for (const auto& [l, D] : corpus) {
    MilnorMooreReport r = milnor_moore_check(l, D);
    CHECK(r.iso);
    CHECK(r.generated_by_primitives);
    CHECK(r.envelope_dims == r.pbw_dims);
  }
}

TEST_CASE("Milnor-Moore fails for abelian L in characteristic p") {
  MilnorMooreReport r2 = milnor_moore_check(abelian_lie(Field::prime(2), gens({{2, 1}})), 4);
  CHECK_FALSE(r2.iso);
  CHECK(r2.degrees[3].primitive_dim == 1);  // x^2 in degree 4
  CHECK(r2.degrees[3].lie_dim == 0);
  MilnorMooreReport r3 = milnor_moore_check(abelian_lie(Field::prime(3), gens({{2, 1}})), 6);
  CHECK_FALSE(r3.iso);
  CHECK(r3.degrees[5].primitive_dim == 1);  // x^3
  CHECK(r3.degrees[0].iso);
}

TEST_CASE("Sym of a direct sum is the tensor product") {
  struct Case {
    Field f;
    std::vector<std::pair<int, int>> x, y;
    int D;
  };
  for (const Case& c : std::vector<Case>{{Field(), {{2, 1}}, {{2, 1}}, 8},
                                         {Field(), {{1, 1}}, {{2, 1}}, 6},
                                         {Field::prime(2), {{1, 1}}, {{1, 1}}, 6},
                                         {Field::prime(3), {{1, 2}}, {{2, 1}, {3, 1}}, 6}}) {
    SymExponentialReport r = sym_exponential_check(c.f, gens(c.x), gens(c.y), c.D);
    INFO(c.f.name());
    CHECK(r.dims_equal);
    CHECK(r.invertible);
    CHECK(r.coinvariant_dims_match);
    std::vector<int> degs;
    for (const auto* s : {&c.x, &c.y})
      for (auto [d, k] : *s) degs.insert(degs.end(), static_cast<std::size_t>(k), d);
    CHECK(r.lhs == sym_series(degs, c.f.characteristic() == 2, c.D));
  }
}
