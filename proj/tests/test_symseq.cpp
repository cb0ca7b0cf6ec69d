#include <doctest.h>

#include <array>
#include <map>

#include "opkit/symseq.hpp"

using namespace opkit;

namespace {

Window win(int a) { return Window{a, -16, 16}; }

SymSeqObject comm_seq(const Field& f, int max_arity) {
  SymSeqObject s(f, win(max_arity));
  for (int n = 1; n <= max_arity; ++n)
    s.set_arity(n, Component{{"c" + std::to_string(n)}, {0}, std::vector<Matrix>(n - 1, Matrix::identity(f, 1))});
  return s;
}

// Basis: words in the inputs; sigma renames letters.
SymSeqObject ass_seq(const Field& f, int max_arity, int degree_step = 0) {
  SymSeqObject s(f, win(max_arity));
  for (int n = 1; n <= max_arity; ++n) {
    std::vector<Perm> words = perm::all(n);
    std::map<Perm, std::size_t> idx;
    Component c;
    for (std::size_t i = 0; i < words.size(); ++i) {
      idx[words[i]] = i;
      std::string l;
      for (int v : words[i]) l += std::to_string(v + 1);
      c.labels.push_back(l);
      c.degrees.push_back((n - 1) * degree_step);
    }
    for (int t = 0; t + 1 < n; ++t) {
      Perm s_t = perm::transposition(n, t);
      std::vector<SparseVec> cols;
      for (const auto& w : words) cols.push_back({{idx.at(perm::compose(s_t, w)), Scalar(1)}});
      c.transpositions.push_back(Matrix::from_columns(f, words.size(), cols));
    }
    s.set_arity(n, std::move(c));
  }
  return s;
}

// Arity 2 spanned by an odd element and an even one, arity 3 by a sign-twisted odd line.
SymSeqObject mixed_seq(const Field& f, int max_arity) {
  SymSeqObject s(f, win(max_arity));
  s.set_arity(1, Component{{"u"}, {0}, {}});
  s.set_arity(2, Component{{"b", "a"}, {0, 1}, {Matrix::from_ints(f, {{1, 0}, {0, -1}})}});
  Matrix neg = Matrix::identity(f, 1).scaled(Scalar(-1));
  if (max_arity >= 3) s.set_arity(3, Component{{"t"}, {1}, {neg, neg}});
  return s;
}

bool same_structure(const SymSeqObject& a, const SymSeqObject& b, int max_arity) {
  for (int n = 0; n <= max_arity; ++n) {
    const Component &x = a.arity(n), &y = b.arity(n);
    if (x.degrees != y.degrees) return false;
    if (!(x.transpositions == y.transpositions)) return false;
  }
  return true;
}

unsigned long factorial(int n) { return n <= 1 ? 1 : static_cast<unsigned long>(n) * factorial(n - 1); }

// dim (X o Y)_n by counting Sigma_k-orbits of (x, surjection, y's): the action
// on surjections is free, so each orbit has k! elements.
unsigned long orbit_count(const SymSeqObject& x, const SymSeqObject& y, int n) {
  unsigned long total = 0;
  for (int k = 1; k <= n; ++k) {
    unsigned long fibers_sum = 0;
    std::vector<int> f(static_cast<std::size_t>(n), 0);
    for (;;) {
      std::vector<int> size(static_cast<std::size_t>(k), 0);
      for (int v : f) ++size[static_cast<std::size_t>(v)];
      unsigned long prod = 1;
      for (int s : size) prod *= s ? y.dim(s) : 0;
      fibers_sum += prod;
      std::size_t i = 0;
      while (i < f.size() && ++f[i] == k) f[i++] = 0;
      if (i == f.size()) break;
    }
    total += x.dim(k) * fibers_sum / factorial(k);
  }
  return total;
}

}  // namespace

TEST_CASE("permutations") {
  for (int n = 1; n <= 5; ++n)
    for (const Perm& p : perm::all(n)) {
      Perm q = perm::identity(n);
      for (int i : perm::adjacent_word(p)) q = perm::compose(perm::transposition(n, i), q);
      CHECK(q == p);
      CHECK(perm::sign(p) == perm::sign(perm::inverse(p)));
      CHECK(perm::is_identity(perm::compose(p, perm::inverse(p))));
    }
  std::size_t total = 0;
  for (auto& [p, size] : perm::class_representatives(5)) total += size;
  CHECK(total == 120);
}

TEST_CASE("validate rejects non-actions") {
  Field q;
  SymSeqObject s(q, win(3));
  s.set_arity(2, Component{{"a"}, {0}, {Matrix::from_ints(q, {{2}})}});
  CHECK_THROWS_AS(s.validate(), AxiomError);
  CHECK_THROWS_AS(s.set_arity(3, Component{{"a"}, {0}, {Matrix::identity(q, 1)}}), ValidationError);
  CHECK_THROWS_AS(s.set_arity(2, Component{{"a", "b"}, {1, 0}, {Matrix::identity(q, 2)}}), ValidationError);
  CHECK_NOTHROW(ass_seq(q, 4).validate());
  CHECK_NOTHROW(mixed_seq(q, 3).validate());
}

TEST_CASE("set partitions and Bell numbers") {
  auto bell = bell_numbers(7);
  CHECK(std::vector<unsigned long>(bell.begin(), bell.begin() + 6) == std::vector<unsigned long>{1, 1, 2, 5, 15, 52});
  for (int n = 1; n <= 7; ++n) CHECK(set_partitions(n).size() == bell[static_cast<std::size_t>(n)]);
}

TEST_CASE("compose dimensions") {
  Field q;
  SymSeqObject comm = comm_seq(q, 5), ass = ass_seq(q, 5);
  SymSeqObject cc = compose(comm, comm, win(5));
  auto bell = bell_numbers(5);
  for (int n = 1; n <= 5; ++n) {
    CHECK(cc.dim(n) == bell[static_cast<std::size_t>(n)]);
    CHECK(cc.dim(n) == orbit_count(comm, comm, n));
  }
  SymSeqObject aa = compose(ass, ass, win(5));
  CHECK(aa.dim(2) == 4);
  // x/(1-2x): n! 2^(n-1)
  for (int n = 1; n <= 5; ++n) {
    CHECK(aa.dim(n) == orbit_count(ass, ass, n));
    CHECK(aa.dim(n) == factorial(n) * (1ul << (n - 1)));
  }
  SymSeqObject m = mixed_seq(q, 4);
  SymSeqObject mm = compose(m, m, win(4));
  for (int n = 1; n <= 4; ++n) CHECK(mm.dim(n) == orbit_count(m, m, n));
  CHECK_NOTHROW(mm.validate());
  CHECK_NOTHROW(compose(ass, comm, win(5)).validate());
}

TEST_CASE("compose unit laws") {
  for (Field f : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
    SymSeqObject t = triv_sequence(f, win(4));
    for (const SymSeqObject& y : {comm_seq(f, 4), ass_seq(f, 4, 1), mixed_seq(f, 4)}) {
      CHECK(same_structure(compose(t, y, win(4)), y, 4));
      CHECK(same_structure(compose(y, t, win(4)), y, 4));
    }
  }
}

TEST_CASE("compose rejects bad inputs") {
  Field q;
  SymSeqObject comm = comm_seq(q, 3);
  CHECK_THROWS_AS(compose(comm, comm_seq(Field::prime(2), 3), win(3)), ValidationError);
  CHECK_THROWS_AS(compose(comm, comm, win(4)), ValidationError);
  SymSeqObject with0 = comm_seq(q, 3);
  with0.set_arity(0, Component{{"z"}, {0}, {}});
  CHECK_THROWS_AS(compose(comm, with0, win(3)), ValidationError);
}

TEST_CASE("associator is an equivariant isomorphism") {
  for (Field f : {Field::rationals(), Field::prime(2)}) {
    SymSeqObject a = ass_seq(f, 4, 1), m = mixed_seq(f, 4), c = comm_seq(f, 4);
    Window w = win(4);
    std::vector<std::array<const SymSeqObject*, 3>> triples{{&a, &m, &c}, {&m, &m, &m}, {&c, &a, &m}};
    for (auto [x, y, z] : triples) {
      SymSeqObject left = compose(compose(*x, *y, w), *z, w);
      SymSeqObject right = compose(*x, compose(*y, *z, w), w);
      for (int n = 1; n <= 4; ++n) {
        REQUIRE(left.dim(n) == right.dim(n));
        Matrix phi = compose_associator(*x, *y, *z, w, n);
        CHECK(rank(phi) == left.dim(n));
        for (int i = 0; i + 1 < n; ++i)
          CHECK(phi * left.arity(n).transpositions[static_cast<std::size_t>(i)] ==
                right.arity(n).transpositions[static_cast<std::size_t>(i)] * phi);
        for (std::size_t j = 0; j < phi.cols(); ++j)
          for (const auto& [r, v] : phi.column(j)) CHECK(left.arity(n).degrees[j] == right.arity(n).degrees[r]);
      }
    }
  }
}

TEST_CASE("associator up to arity 5") {
  Field q;
  SymSeqObject a = ass_seq(q, 5, 1), c = comm_seq(q, 5);
  Window w = win(5);
  SymSeqObject left = compose(compose(c, a, w), c, w);
  SymSeqObject right = compose(c, compose(a, c, w), w);
  Matrix phi = compose_associator(c, a, c, w, 5);
  CHECK(rank(phi) == left.dim(5));
  for (int i = 0; i < 4; ++i)
    CHECK(phi * left.arity(5).transpositions[static_cast<std::size_t>(i)] ==
          right.arity(5).transpositions[static_cast<std::size_t>(i)] * phi);
}

TEST_CASE("truncate") {
  Field q;
  SymSeqObject c = comm_seq(q, 5);
  CHECK(truncate(c, 3, TruncateSide::above).dims(0, 5) == std::vector<std::size_t>{0, 1, 1, 1, 0, 0});
  CHECK(truncate(c, 3, TruncateSide::below).dims(0, 5) == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(truncate(c, 5, TruncateSide::above) == c);
  CHECK(truncate(c, 1, TruncateSide::below) == c);
  CHECK_THROWS_AS(truncate(c, 0, TruncateSide::above), ValidationError);
}

TEST_CASE("operadic shift") {
  Field q;
  SymSeqObject a = ass_seq(q, 4);
  SymSeqObject s1 = operadic_shift(a, 1);
  CHECK(s1.arity(3).degrees == std::vector<int>(6, -2));
  CHECK(s1.arity(1).degrees == std::vector<int>{0});
  CHECK(s1.arity(2).transpositions[0] == a.arity(2).transpositions[0].scaled(Scalar(-1)));
  CHECK(operadic_shift(s1, -1) == a);
  CHECK(operadic_shift(a, 0) == a);
  CHECK(operadic_shift(a, 2).arity(2).transpositions == a.arity(2).transpositions);
  CHECK_NOTHROW(s1.validate());
}

TEST_CASE("norm map examples") {
  SUBCASE("trivial Sigma_2 over Q") {
    Field q;
    auto r = norm_map(q, 2, 1, {Matrix::identity(q, 1)});
    CHECK(r.is_iso);
    CHECK(r.norm == Matrix::from_ints(q, {{2}}));
  }
  SUBCASE("trivial Sigma_2 over F_2") {
    Field f = Field::prime(2);
    auto r = norm_map(f, 2, 1, {Matrix::identity(f, 1)});
    CHECK_FALSE(r.is_iso);
    CHECK(r.norm.is_zero());
  }
  SUBCASE("trivial Sigma_3 over F_3") {
    Field f = Field::prime(3);
    auto r = norm_map(f, 3, 1, {Matrix::identity(f, 1), Matrix::identity(f, 1)});
    CHECK(r.coinvariant_basis.cols() == 1);
    CHECK(r.invariant_basis.cols() == 1);
    CHECK(r.norm.is_zero());
    CHECK_FALSE(r.is_iso);
  }
  SUBCASE("regular Sigma_3 over F_3 is free") {
    Field f = Field::prime(3);
    SymSeqObject a = ass_seq(f, 3);
    auto r = norm_map(a, 3);
    CHECK(r.coinvariant_basis.cols() == 1);
    CHECK(r.invariant_basis.cols() == 1);
    CHECK_FALSE(r.norm.is_zero());
    CHECK(r.is_iso);
  }
  SUBCASE("sign representation of Sigma_2 over Q") {
    Field q;
    auto r = norm_map(q, 2, 1, {Matrix::from_ints(q, {{-1}})});
    CHECK(r.coinvariant_basis.cols() == 0);
    CHECK(r.invariant_basis.cols() == 0);
    CHECK(r.is_iso);
  }
  SUBCASE("non-action rejected") {
    Field q;
    CHECK_THROWS_AS(norm_map(q, 2, 1, {Matrix::from_ints(q, {{3}})}), AxiomError);
  }
}

TEST_CASE("norm maps inside compose over Q") {
  Field q;
  SymSeqObject a = ass_seq(q, 5), c = comm_seq(q, 5), m = mixed_seq(q, 5);
  std::vector<std::pair<const SymSeqObject*, const SymSeqObject*>> pairs{{&c, &c}, {&a, &c}, {&c, &a}, {&m, &m}};
  for (auto [x, y] : pairs)
    for (int n = 1; n <= 5; ++n)
      for (int k = 1; k <= n; ++k) {
        SummandRep rep = compose_summand(*x, *y, n, k);
        if (rep.dim == 0) continue;
        auto r = norm_map(q, k, rep.dim, rep.transpositions);
        CHECK(r.is_iso);
        CHECK(r.coinvariant_basis.cols() * factorial(k) == rep.dim);
      }
}

TEST_CASE("free algebras") {
  Field q;
  GradedSpace v;
  v.degrees[0] = {"x", "y"};
  SUBCASE("triv gives V") {
    CHECK(free_algebra_dims(triv_sequence(q, win(4)), v, 4) == std::vector<std::size_t>{2, 0, 0, 0});
  }
  SUBCASE("Comm gives symmetric powers") {
    CHECK(free_algebra_dims(comm_seq(q, 4), v, 4) == std::vector<std::size_t>{2, 3, 4, 5});
  }
  SUBCASE("Ass gives tensor powers") {
    CHECK(free_algebra_dims(ass_seq(q, 4), v, 4) == std::vector<std::size_t>{2, 4, 8, 16});
  }
  SUBCASE("odd generators give exterior powers") {
    GradedSpace odd;
    odd.degrees[1] = {"x", "y", "z"};
    auto fa = free_algebra(comm_seq(q, 4), odd, 4);
    CHECK(fa[2] == std::map<int, std::size_t>{{2, 3}});
    CHECK(fa[3] == std::map<int, std::size_t>{{3, 1}});
    CHECK(fa.count(4) == 0);
  }
  CHECK_THROWS_AS(free_algebra_dims(comm_seq(q, 3), v, 4), ValidationError);
}
