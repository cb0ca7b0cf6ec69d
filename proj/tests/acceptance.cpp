// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "opkit/hopf.hpp"
#include "opkit/koszul.hpp"
#include "opkit/operad.hpp"

using namespace opkit;

namespace {

Window win(int n) { return Window{n, -16, 16}; }

struct Verdict {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "first failure: " << what;
      ok = false;
    }
  }
};

std::size_t factorial(int n) {
  std::size_t r = 1;
  for (int k = 2; k <= n; ++k) r *= static_cast<std::size_t>(k);
  return r;
}

// Set partitions of {0..n-1} as restricted growth strings.
std::size_t count_partitions(int n) {
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::size_t count = 0;
  std::function<void(int, int)> go = [&](int i, int blocks) {
    if (i == n) {
      ++count;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      a[static_cast<std::size_t>(i)] = b;
      go(i + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  go(0, 0);
  return count;
}

std::size_t lyndon_count(int d, int n) {
  std::size_t total = 0;
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

GradedSpace gens(std::vector<std::pair<int, int>> deg_count) {
  GradedSpace v;
  int k = 0;
  for (auto [d, c] : deg_count)
    for (int i = 0; i < c; ++i) v.degrees[d].push_back("v" + std::to_string(k++));
  return v;
}

std::vector<Operad> builtins(const Field& f, int n) {
  std::vector<Operad> r;
  for (const auto& name : builtin_names()) r.push_back(builtin(name, f, win(n)));
  return r;
}

bool same_rep(const SymSeqObject& a, const SymSeqObject& b, int n) {
  return a.arity(n).degree_dims() == b.arity(n).degree_dims() && same_characters(a, b, n);
}

// Sigma_k acting on itself by left multiplication, basis all(k).
std::vector<Matrix> regular_module(const Field& f, int k) {
  std::vector<Perm> elems = perm::all(k);
  std::vector<Matrix> ts;
  for (int t = 0; t + 1 < k; ++t) {
    std::vector<SparseVec> cols;
    Perm s = perm::transposition(k, t);
    for (const Perm& g : elems) {
      Perm h = perm::compose(s, g);
      std::size_t j = 0;
      while (elems[j] != h) ++j;
      cols.push_back({{j, Scalar(1)}});
    }
    ts.push_back(Matrix::from_columns(f, elems.size(), cols));
  }
  return ts;
}

std::vector<Matrix> trivial_module(const Field& f, int k) {
  return std::vector<Matrix>(static_cast<std::size_t>(k - 1), Matrix::identity(f, 1));
}

// ---------------------------------------------------------------------------

void koszul_dual_of_comm(Verdict& v) {
  Field q;
  KoszulDual kd = koszul_dual(comm_nu(q, win(6)), win(6), false);
  for (int n = 2; n <= 6; ++n) {
    const Homology& h = kd.per_arity.at(n);
    v.expect(h.unreliable().empty(), "arity " + std::to_string(n) + " has unreliable degrees");
    v.expect(h.dims() == std::map<int, std::size_t>{{n - 1, factorial(n - 1)}}, "arity " + std::to_string(n) + " dims");
  }
  v.expect(kd.formal, "not concentrated");
  v.note << (v.ok ? "dims 1,2,6,24,120 in degrees 1..5" : "");
}

void double_dual(Verdict& v) {
  DoubleDualReport r = double_dual_check(comm_nu(Field(), win(4)), win(4));
  v.expect(r.ok, "report not ok: " + r.note);
  v.expect(r.dual_operad_valid, "dual operad invalid");
  for (const DualMatch& m : r.arities) {
    v.expect(m.computed == std::map<int, std::size_t>{{0, 1}}, "arity " + std::to_string(m.arity) + " not 1-dim in degree 0");
    v.expect(m.characters_match, "arity " + std::to_string(m.arity) + " characters");
  }
  v.expect(r.arities.size() >= 4, "fewer than 4 arities compared");
  v.note << (v.ok ? "1-dim in degree 0 for n = 1..4" : "");
}

void composition_product(Verdict& v) {
  Field q;
  Window w = win(5);
  SymSeqObject c = comm_nu(q, w).seq();
  SymSeqObject cc = compose(c, c, w);
  for (int n = 1; n <= 5; ++n) {
    v.expect(cc.dim(n) == count_partitions(n), "Bell at arity " + std::to_string(n));
    v.expect(cc.arity(n).degree_dims().size() == 1, "comm o comm not in degree 0");
  }
  SymSeqObject t = triv_sequence(q, w);
  std::vector<Operad> ops = builtins(q, 5);
  for (const Operad& x : ops) {
    for (int n = 1; n <= 5; ++n) {
      v.expect(same_rep(compose(t, x.seq(), w), x.seq(), n), "triv o " + x.name());
      v.expect(same_rep(compose(x.seq(), t, w), x.seq(), n), x.name() + " o triv");
    }
  }
  for (const Operad& x : ops)
    for (const Operad& y : ops) {
      SymSeqObject left = compose(compose(x.seq(), y.seq(), w), x.seq(), w);
      SymSeqObject right = compose(x.seq(), compose(y.seq(), x.seq(), w), w);
      for (int n = 1; n <= 5; ++n) {
        std::string what = "associator " + x.name() + "," + y.name() + " arity " + std::to_string(n);
        Matrix phi = compose_associator(x.seq(), y.seq(), x.seq(), w, n);
        v.expect(left.dim(n) == right.dim(n) && rank(phi) == left.dim(n), what + " not invertible");
        if (left.dim(n) == 0) continue;
        for (int i = 0; i + 1 < n; ++i)
          v.expect(phi * left.arity(n).transpositions[static_cast<std::size_t>(i)] ==
                       right.arity(n).transpositions[static_cast<std::size_t>(i)] * phi,
                   what + " not equivariant");
      }
    }
  v.note << (v.ok ? "1,2,5,15,52; unit and associator checks on " + std::to_string(ops.size()) + " built-ins" : "");
}

void presented_operads(Verdict& v) {
  Field q;
  Window w = win(4);
  struct Case {
    OperadPresentation p;
    Operad reference;
    std::function<std::size_t(int)> dim;
  };
  std::vector<Case> cases{{lie_presentation(q), lie(q, w), [](int n) { return factorial(n - 1); }},
                          {ass_presentation(q), ass_nu(q, w), [](int n) { return factorial(n); }},
                          {comm_presentation(q), comm_nu(q, w), [](int) { return std::size_t{1}; }}};
  for (const Case& c : cases) {
    PresentedOperad po = presented_operad(c.p, w);
    v.expect(check_operad(po.operad).valid, c.reference.name() + " presentation violates the axioms");
    for (int n = 1; n <= 4; ++n) {
      std::string what = c.reference.name() + " arity " + std::to_string(n);
      v.expect(po.operad.dim(n) == c.dim(n), what + " dim");
      v.expect(same_rep(po.operad.seq(), c.reference.seq(), n), what + " representation");
    }
  }
  v.note << (v.ok ? "lie (n-1)!, ass n!, comm 1 with matching characters, n <= 4" : "");
}

void milnor_moore(Verdict& v) {
  Field q;
  GradedSpace k2 = gens({{2, 2}});
  std::vector<std::pair<std::string, LiePresentation>> corpus{{"abelian even", abelian_lie(q, gens({{2, 2}}))},
                                                              {"abelian odd", abelian_lie(q, gens({{1, 2}, {3, 1}}))},
                                                              {"heisenberg", heisenberg_lie(q, 1)},
                                                              {"free lie", free_lie(q, k2, 10)}};
  for (const auto& [name, l] : corpus) {
    int D = name == "free lie" ? 10 : 5;
    MilnorMooreReport r = milnor_moore_check(l, D);
    v.expect(r.iso, name + ": unit is not an isomorphism");
    v.expect(r.generated_by_primitives, name + ": not primitively generated");
  }
  LiePresentation fl = corpus.back().second;
  std::vector<std::size_t> kernel = primitive_dims(tensor_hopf(q, k2, 10));
  auto operadic = free_algebra(lie(q, win(5)).seq(), k2, 5);
  std::vector<std::size_t> witt;
  for (int n = 1; n <= 5; ++n) {
    std::size_t expected = lyndon_count(2, n);
    std::size_t from_lie = 0;
    for (int d : fl.degrees) from_lie += d == 2 * n;
    std::size_t from_operad = operadic.count(n) && operadic.at(n).count(2 * n) ? operadic.at(n).at(2 * n) : 0;
    v.expect(kernel[static_cast<std::size_t>(2 * n)] == expected, "Hopf kernel at word length " + std::to_string(n));
    v.expect(from_operad == expected, "free_algebra(lie) at word length " + std::to_string(n));
    v.expect(from_lie == expected, "free_lie at word length " + std::to_string(n));
    witt.push_back(kernel[static_cast<std::size_t>(2 * n)]);
  }
  if (v.ok) {
    v.note << "corpus iso; Witt dims";
    for (std::size_t d : witt) v.note << ' ' << d;
  }
}

void restricted(Verdict& v) {
  std::vector<std::size_t> p2 = primitive_dims(tensor_hopf(Field::prime(2), gens({{1, 1}}), 8));
  for (int n = 1; n <= 8; ++n)
    v.expect(p2[static_cast<std::size_t>(n)] == (n == 1 || n == 2 || n == 4 || n == 8 ? 1u : 0u), "F2 degree " + std::to_string(n));
  // generator in degree 2, so word length m sits in degree 2m
  std::vector<std::size_t> p3 = primitive_dims(tensor_hopf(Field::prime(3), gens({{2, 1}}), 18));
  for (int m = 1; m <= 9; ++m) {
    v.expect(p3[static_cast<std::size_t>(2 * m)] == (m == 1 || m == 3 || m == 9 ? 1u : 0u), "F3 word length " + std::to_string(m));
    v.expect(p3[static_cast<std::size_t>(2 * m - 1)] == 0, "F3 odd degree");
  }
  for (auto [p, deg] : {std::pair{2u, 1}, std::pair{2u, 2}, std::pair{3u, 2}}) {
    Field f = Field::prime(p);
    MilnorMooreReport r = milnor_moore_check(abelian_lie(f, gens({{deg, 1}})), static_cast<int>(p) * deg);
    v.expect(!r.iso, "abelian L over F" + std::to_string(p) + " should fail");
    v.expect(r.degrees.back().primitive_dim == 1 && r.degrees.back().lie_dim == 0, "x^p should be the extra primitive");
  }
  v.note << (v.ok ? "F2 {1,2,4,8}; F3 word lengths {1,3,9}; abelian controls fail surjectivity" : "");
}

void norm_maps(Verdict& v) {
  Field q;
  std::size_t reps = 0;
  std::vector<Operad> ops = builtins(q, 5);
  for (const Operad& x : ops)
    for (const Operad& y : ops)
      for (int n = 1; n <= 5; ++n)
        for (int k = 1; k <= n; ++k) {
          SummandRep s = compose_summand(x.seq(), y.seq(), n, k);
          if (s.dim == 0) continue;
          ++reps;
          v.expect(norm_map(q, k, s.dim, s.transpositions).is_iso,
                   x.name() + " o " + y.name() + " arity " + std::to_string(n) + " k " + std::to_string(k));
        }
  Field f2 = Field::prime(2), f3 = Field::prime(3);
  v.expect(!norm_map(f2, 2, 1, trivial_module(f2, 2)).is_iso, "trivial Sigma_2 over F2");
  v.expect(!norm_map(f3, 3, 1, trivial_module(f3, 3)).is_iso, "trivial Sigma_3 over F3");
  bool regular = norm_map(f3, 3, 6, regular_module(f3, 3)).is_iso;
  v.expect(regular, "regular Sigma_3 over F3 is free, its norm must be iso");
  if (v.ok)
    v.note << reps << " summand reps iso over Q; non-iso witnesses: trivial Sigma_2/F2, trivial Sigma_3/F3"
           << " (regular Sigma_3/F3 is iso)";
}

void concentration(Verdict& v) {
  Field q;
  TowerReport r = truncation_tower(lie_shifted(q, win(4)), win(4), 2);
  v.expect(r.stages.size() == 2, "expected two stages");
  for (const TowerStage& st : r.stages) {
    for (int k = 2; k <= 4; ++k) {
      std::map<int, std::size_t> d = st.per_arity.at(k).dims();
      std::string where = "stage " + std::to_string(st.m) + " arity " + std::to_string(k);
      // arities k <= m agree with O o_O triv, which vanishes there
      v.expect(d.size() <= 1 && (d.empty() || d.begin()->first == 1 - st.m), where + " not concentrated in 1-m");
      v.expect(k <= st.m || !d.empty(), where + " unexpectedly zero");
      v.expect(k > st.m || k == 1 || d.empty(), where + " should vanish");
    }
    v.expect(st.fiber_matches && st.les_consistent, "stage " + std::to_string(st.m) + " fiber or LES check");
  }
  if (!r.stages.empty())
    for (int k = 1; k <= 4; ++k)
      v.expect(r.stages[0].per_arity.at(k).dims() == std::map<int, std::size_t>{{0, 1}}, "stage 1 is not coComm");
  v.note << (v.ok ? "m = 1: degree 0, 1-dim per arity; m = 2: degree -1 (dims 2, 6 at k = 3, 4; zero at k = 2)" : "");
}

void structural(Verdict& v) {
  std::size_t complexes = 0, hopfs = 0;
  for (Field f : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
    for (const Operad& o : builtins(f, 5)) {
      v.expect(check_operad(o).valid, o.name() + " over " + f.name() + " violates the operad axioms");
      int top = o.dim(5) > 24 ? 4 : 5;
      std::vector<BarComplex> bars{BarComplex(trivial_right(o), o, trivial_left(o), win(top)),
                                   BarComplex(regular_right(o), o, regular_left(o), win(3))};
      for (const BarComplex& bar : bars)
        for (int n = 1; n <= bar.window().max_arity; ++n) {
          const ChainComplex& c = bar.complex(n);
          ++complexes;
          v.expect(c.d_squared_zero(), "d^2 on " + o.name() + " bar arity " + std::to_string(n));
          v.expect(euler_characteristic(c.space().dims()) == euler_characteristic(homology(c, false).dims()),
                   "Euler characteristic on " + o.name() + " bar arity " + std::to_string(n));
        }
      if (o.reduced()) {
        TreeBar tb(o, 4);
        for (int n = 1; n <= 4; ++n, ++complexes) v.expect(tb.complex(n).d_squared_zero(), "d^2 on tree bar of " + o.name());
      }
    }
    std::vector<HopfPresentation> hs{tensor_hopf(f, gens({{1, 2}}), 5), tensor_hopf(f, gens({{2, 1}, {3, 1}}), 7)};
    hs.push_back(enveloping(heisenberg_lie(f, 2), 8).hopf);
    hs.push_back(enveloping(abelian_lie(f, gens({{2, 1}, {3, 1}})), 7).hopf);
    if (f.is_rational()) hs.push_back(enveloping(free_lie(f, gens({{1, 2}}), 5), 5).hopf);
    for (const HopfPresentation& h : hs) {
      ++hopfs;
      HopfReport r = check_hopf(h);
      v.expect(r.valid, "Hopf axioms over " + f.name() + (r.failures.empty() ? "" : ": " + r.failures.front()));
    }
  }
  struct Sym {
    Field f;
    std::vector<std::pair<int, int>> x, y;
    int D;
  };
  for (const Sym& s : std::vector<Sym>{{Field(), {{2, 1}}, {{2, 1}}, 8},
                                       {Field(), {{1, 1}}, {{2, 1}}, 6},
                                       {Field::prime(3), {{1, 2}}, {{2, 1}, {3, 1}}, 6}}) {
    SymExponentialReport r = sym_exponential_check(s.f, gens(s.x), gens(s.y), s.D);
    v.expect(r.dims_equal && r.invertible && r.coinvariant_dims_match, "Sym exponential over " + s.f.name());
  }
  if (v.ok) v.note << complexes << " complexes, " << hopfs << " Hopf algebras, 3 Sym configurations";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Verdict&);
  };
  const Criterion criteria[] = {
      {"1 Koszul dual of comm", koszul_dual_of_comm},
      {"2 double dual of comm", double_dual},
      {"3 composition product", composition_product},
      {"4 presented operads", presented_operads},
      {"5 Milnor-Moore", milnor_moore},
      {"6 restricted primitives", restricted},
      {"7 norm maps", norm_maps},
      {"8 concentration", concentration},
      {"9 structural suite", structural},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.ok = false;
      v.note << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %-26s %6.1fs  %s\n", v.ok ? "PASS" : "FAIL", c.name, secs, v.note.str().c_str());
    std::fflush(stdout);
    failed += v.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
