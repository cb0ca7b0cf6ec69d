#include <doctest.h>

#include <chrono>

#include "opkit/operad.hpp"

using namespace opkit;

namespace {

Window win(int a) { return Window{a, -16, 16}; }

unsigned long factorial(int n) { return n <= 1 ? 1 : static_cast<unsigned long>(n) * factorial(n - 1); }

int moebius(int d) {
  int r = 1;
  for (int p = 2; p * p <= d; ++p)
    if (d % p == 0) {
      d /= p;
      if (d % p == 0) return 0;
      r = -r;
    }
  return d > 1 ? -r : r;
}

// Character of Lie_n: nonzero only on permutations with all cycles of one
// length d, where it is mu(d) (n/d - 1)! d^(n/d - 1).
long lie_character(const Perm& p) {
  int n = static_cast<int>(p.size());
  std::vector<bool> seen(p.size(), false);
  int len = -1;
  for (int i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    int l = 0;
    for (int j = i; !seen[static_cast<std::size_t>(j)]; j = p[static_cast<std::size_t>(j)]) {
      seen[static_cast<std::size_t>(j)] = true;
      ++l;
    }
    if (len >= 0 && l != len) return 0;
    len = l;
  }
  int k = n / len;
  long v = moebius(len) * static_cast<long>(factorial(k - 1));
  for (int j = 0; j + 1 < k; ++j) v *= len;
  return v;
}

void check_valid(const Operad& o) {
  OperadReport r = check_operad(o);
  INFO(o.name() << " " << (r.failures.empty() ? "" : r.failures[0].axiom + " " + r.failures[0].detail));
  CHECK(r.valid);
  CHECK(r.instances_checked > 0);
}

}  // namespace

TEST_CASE("builtin dimensions") {
  Field q;
  CHECK(comm_nu(q, win(5)).seq().dims(1, 5) == std::vector<std::size_t>{1, 1, 1, 1, 1});
  CHECK(ass_nu(q, win(4)).seq().dims(1, 4) == std::vector<std::size_t>{1, 2, 6, 24});
  CHECK(lie(q, win(5)).seq().dims(1, 5) == std::vector<std::size_t>{1, 1, 2, 6, 24});
  CHECK(triv_operad(q, win(4)).seq().dims(0, 4) == std::vector<std::size_t>{0, 1, 0, 0, 0});
  Operad ls = lie_shifted(q, win(4));
  for (int r = 1; r <= 4; ++r)
    for (int d : ls.seq().arity(r).degrees) CHECK(d == 1 - r);
  CHECK_THROWS_AS(builtin("bogus", q, win(3)), ValidationError);
  CHECK_THROWS_AS(lie(q, win(8)), ValidationError);
  CHECK(builtin("comm-nu", q, win(3)).seq() == comm_nu(q, win(3)).seq());
}

TEST_CASE("builtins satisfy the operad axioms") {
  for (Field f : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
    check_valid(triv_operad(f, win(4)));
    check_valid(comm_nu(f, win(6)));
    check_valid(ass_nu(f, win(5)));
    check_valid(lie(f, win(5)));
    check_valid(lie_shifted(f, win(5)));
  }
}

TEST_CASE("lie characters") {
  for (Field f : {Field::rationals(), Field::prime(5)}) {
    Operad l = lie(f, win(5));
    for (int n = 1; n <= 5; ++n) {
      std::vector<Scalar> chi = l.seq().character(n);
      auto reps = perm::class_representatives(n);
      REQUIRE(chi.size() == reps.size());
      for (std::size_t c = 0; c < reps.size(); ++c) CHECK(chi[c] == f.from_int(lie_character(reps[c].first)));
    }
  }
}

TEST_CASE("mutation is detected") {
  Field q;
  Operad l = lie(q, win(3));
  std::vector<SparseVec> table;
  for (std::size_t a = 0; a < l.dim(2); ++a)
    for (std::size_t b = 0; b < l.dim(2); ++b) table.push_back(sv_scale(q, l.partial(2, a, 0, 2, b), Scalar(-1)));
  l.set_partial(2, 0, 2, table);
  OperadReport r = check_operad(l);
  CHECK_FALSE(r.valid);
  REQUIRE_FALSE(r.failures.empty());
  bool arity3 = false;
  for (const auto& fl : r.failures) arity3 = arity3 || fl.m + fl.n - 1 == 3;
  CHECK(arity3);

  Operad c = comm_nu(q, win(3));
  c.set_partial(1, 0, 2, {SparseVec{{0, Scalar(2)}}});
  CHECK_FALSE(check_operad(c).valid);
}

TEST_CASE("presented operads") {
  for (Field f : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
    PresentedOperad pl = presented_operad(lie_presentation(f), win(5));
    PresentedOperad pa = presented_operad(ass_presentation(f), win(5));
    PresentedOperad pc = presented_operad(comm_presentation(f), win(5));
    Operad a = ass_nu(f, win(5)), c = comm_nu(f, win(5));
    for (int n = 1; n <= 5; ++n) {
      CHECK(pl.operad.dim(n) == factorial(n - 1));
      CHECK(same_characters(pa.operad.seq(), a.seq(), n));
      CHECK(same_characters(pc.operad.seq(), c.seq(), n));
      CHECK(same_characters(pl.operad.seq(), lie(f, win(5)).seq(), n));
    }
    check_valid(pl.operad);
    check_valid(pa.operad);
    check_valid(pc.operad);
    CHECK(pl.free_basis.at(4).size() == 15);
    CHECK(pl.quotient_map.at(4).rows() == 6);
    CHECK(rank(pl.quotient_map.at(4)) == 6);
  }
}

TEST_CASE("presented operad errors") {
  Field q;
  OperadPresentation odd = lie_presentation(q);
  odd.generators[0].degree = 1;
  CHECK_THROWS_AS(presented_operad(odd, win(3)), ValidationError);

  OperadPresentation unknown = lie_presentation(q);
  unknown.relations[0][0].tree.label = "x";
  CHECK_THROWS_AS(presented_operad(unknown, win(3)), ValidationError);

  OperadPresentation leaves = lie_presentation(q);
  leaves.relations[0][0].tree.children[1] = ListedTree::make_leaf(2);
  CHECK_THROWS_AS(presented_operad(leaves, win(3)), ValidationError);

  OperadPresentation mixed = lie_presentation(q);
  mixed.relations[0].push_back({Scalar(1), ListedTree::vertex("b", {ListedTree::make_leaf(1), ListedTree::make_leaf(2)})});
  CHECK_THROWS_AS(presented_operad(mixed, win(3)), AxiomError);

  OperadPresentation unary = lie_presentation(q);
  unary.generators.push_back({"u", 1, 0, Symmetry::none});
  CHECK_THROWS_AS(presented_operad(unary, win(3)), ValidationError);
}

TEST_CASE("relation killing everything in arity 3") {
  Field q;
  OperadPresentation p{q, {{"c", 2, 0, Symmetry::symmetric}}, {}};
  p.relations.push_back({{Scalar(1), ListedTree::vertex("c", {ListedTree::vertex("c", {ListedTree::make_leaf(1), ListedTree::make_leaf(2)}),
                                                             ListedTree::make_leaf(3)})}});
  PresentedOperad o = presented_operad(p, win(4));
  CHECK(o.operad.seq().dims(1, 4) == std::vector<std::size_t>{1, 1, 0, 0});
  check_valid(o.operad);
}

TEST_CASE("operadic shift") {
  Field q;
  Operad l = lie(q, win(5));
  Operad s = operadic_shift(l, 1);
  CHECK(s.seq().arity(3).degrees == std::vector<int>{-2, -2});
  CHECK(s.seq() == operadic_shift(l.seq(), 1));
  for (int m : {-1, 1, 2, 3}) check_valid(operadic_shift(l, m));
  for (int m : {-1, 1}) check_valid(operadic_shift(ass_nu(q, win(4)), m));
  Operad s2 = operadic_shift(l, 2);
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; a + b - 1 <= 5; ++b)
      for (int i = 0; i < a; ++i) CHECK(s2.partial_matrix(a, i, b) == l.partial_matrix(a, i, b));
  check_valid(operadic_shift(operadic_shift(l, 1), -1));
}

TEST_CASE("dual cooperads") {
  Field q;
  Operad t = triv_operad(q, win(3));
  CHECK(dual_operad(dual_cooperad(t)) == t);
  Cooperad cc = dual_cooperad(comm_nu(q, win(4)));
  CHECK(cc.seq.dims(1, 4) == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK(cc.seq.arity(2).labels[0] == "c2*");
  Operad l = lie(q, win(5));
  CHECK(dual_operad(dual_cooperad(l)) == l);
  Operad ls = lie_shifted(q, win(5));
  Cooperad cls = dual_cooperad(ls);
  CHECK(cls.seq.arity(3).degrees == std::vector<int>{2, 2});
  CHECK(dual_operad(cls) == ls);
  check_valid(dual_operad(cls));
  CHECK(dual_sequence(dual_sequence(ls.seq())) == ls.seq());
}

TEST_CASE("module structures on a one-arity sequence") {
  Field q;
  for (const Operad& o : {comm_nu(q, win(5)), lie(q, win(5)), ass_nu(q, win(4))}) {
    for (int n = 2; n <= 3; ++n) {
      SymSeqObject x(q, o.window());
      x.set_arity(n, o.seq().arity(n));
      CHECK(right_module_structure_dim(x, o) == 0);
    }
  }
  // Two adjacent arities do admit deformations.
  Operad c = comm_nu(q, win(4));
  SymSeqObject x(q, c.window());
  x.set_arity(2, c.seq().arity(2));
  x.set_arity(3, c.seq().arity(3));
  CHECK(right_module_structure_dim(x, c) > 0);
}

TEST_CASE("lie at arity 6 within budget") {
  auto t0 = std::chrono::steady_clock::now();
  Operad l = lie(Field::rationals(), win(6));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(l.dim(6) == 120);
  MESSAGE("lie arity 6 built in " << secs << " s");
  CHECK(secs < 60.0);
}
