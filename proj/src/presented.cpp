#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

#include "opkit/operad.hpp"

namespace opkit {

namespace {

// Free-operad tree with 0-based leaves; children listed in generator-input order.
struct Raw {
  int leaf = -1;
  int gen = -1;
  std::vector<Raw> kids;
};

int min_leaf(const Raw& t) {
  if (t.leaf >= 0) return t.leaf;
  int m = 1 << 30;
  for (const Raw& k : t.kids) m = std::min(m, min_leaf(k));
  return m;
}

int tree_degree(const Raw& t, const std::vector<Generator>& gens) {
  if (t.leaf >= 0) return 0;
  int d = gens[static_cast<std::size_t>(t.gen)].degree;
  for (const Raw& k : t.kids) d += tree_degree(k, gens);
  return d;
}

// Canonical form: for symmetric and antisymmetric generators the children are
// sorted by minimal leaf; for generators without symmetry the input order is
// kept. Returns the sign picked up (always +-1).
int canonicalize(Raw& t, const std::vector<Generator>& gens) {
  if (t.leaf >= 0) return 1;
  int sign = 1;
  for (Raw& k : t.kids) sign *= canonicalize(k, gens);
  const Generator& g = gens[static_cast<std::size_t>(t.gen)];
  if (g.symmetry == Symmetry::none) return sign;
  std::vector<int> mins;
  for (const Raw& k : t.kids) mins.push_back(min_leaf(k));
  Perm order(t.kids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return mins[a] < mins[b]; });
  if (g.symmetry == Symmetry::antisymmetric) sign *= perm::sign(order);
  std::vector<Raw> sorted;
  for (int j : order) sorted.push_back(std::move(t.kids[static_cast<std::size_t>(j)]));
  t.kids = std::move(sorted);
  return sign;
}

void relabel(Raw& t, const std::vector<int>& map) {
  if (t.leaf >= 0) {
    t.leaf = map[static_cast<std::size_t>(t.leaf)];
    return;
  }
  for (Raw& k : t.kids) relabel(k, map);
}

std::string key(const Raw& t, const std::vector<Generator>& gens) {
  if (t.leaf >= 0) return std::to_string(t.leaf + 1);
  std::string s = gens[static_cast<std::size_t>(t.gen)].label + "(";
  for (std::size_t j = 0; j < t.kids.size(); ++j) s += (j ? "," : "") + key(t.kids[j], gens);
  return s + ")";
}

// Replaces leaf `i` of x by y. y's leaves go to `s` (sorted), x's other leaves
// go to the complement in order.
Raw graft(const Raw& x, int i, const Raw& y, const std::vector<int>& s, int n) {
  std::vector<bool> in_s(static_cast<std::size_t>(n), false);
  for (int v : s) in_s[static_cast<std::size_t>(v)] = true;
  std::vector<int> comp;
  for (int v = 0; v < n; ++v)
    if (!in_s[static_cast<std::size_t>(v)]) comp.push_back(v);
  Raw yy = y;
  relabel(yy, s);
  std::function<Raw(const Raw&)> rec = [&](const Raw& t) -> Raw {
    if (t.leaf >= 0) {
      if (t.leaf == i) return yy;
      return Raw{comp[static_cast<std::size_t>(t.leaf < i ? t.leaf : t.leaf - 1)], -1, {}};
    }
    Raw out{-1, t.gen, {}};
    for (const Raw& k : t.kids) out.kids.push_back(rec(k));
    return out;
  };
  return rec(x);
}

struct ArityData {
  std::vector<Raw> trees;
  std::vector<int> degrees;
  std::unordered_map<std::string, std::size_t> index;
};

class FreeOperad {
 public:
  FreeOperad(const Field& f, std::vector<Generator> gens, int max_arity) : f_(f), gens_(std::move(gens)), data_(static_cast<std::size_t>(max_arity + 1)) {
    data_[1].trees.push_back(Raw{0, -1, {}});
    for (int n = 1; n <= max_arity; ++n) build(n);
  }

  const ArityData& at(int n) const { return data_[static_cast<std::size_t>(n)]; }
  const std::vector<Generator>& gens() const { return gens_; }

  // Canonical vector of a raw tree with coefficient c.
  void add(std::map<std::size_t, Scalar>& acc, Raw t, int n, const Scalar& c) const {
    int s = canonicalize(t, gens_);
    auto it = at(n).index.find(key(t, gens_));
    if (it == at(n).index.end()) throw ValidationError("presented operad: tree outside the free basis");
    auto& slot = acc[it->second];
    slot = f_.add(slot, s > 0 ? c : f_.neg(c));
  }

  SparseVec finish(std::map<std::size_t, Scalar>& acc) const {
    SparseVec v;
    for (auto& [k, c] : acc)
      if (c != 0) v.emplace_back(k, c);
    return v;
  }

  SparseVec act(int n, const SparseVec& v, const Perm& sigma) const {
    std::map<std::size_t, Scalar> acc;
    for (const auto& [k, c] : v) {
      Raw t = at(n).trees[k];
      relabel(t, sigma);
      add(acc, std::move(t), n, c);
    }
    return finish(acc);
  }

  SparseVec graft_vec(int m, const SparseVec& x, int i, int k, const SparseVec& y, const std::vector<int>& s) const {
    int n = m + k - 1;
    std::map<std::size_t, Scalar> acc;
    for (const auto& [a, ca] : x)
      for (const auto& [b, cb] : y) add(acc, graft(at(m).trees[a], i, at(k).trees[b], s, n), n, f_.mul(ca, cb));
    return finish(acc);
  }

 private:
  void build(int n) {
    ArityData& d = data_[static_cast<std::size_t>(n)];
    if (n >= 2) {
      for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
        const Generator& g = gens_[gi];
        if (g.arity > n) continue;
        for (const auto& blocks : set_partitions(n)) {
          if (static_cast<int>(blocks.size()) != g.arity) continue;
          std::vector<Perm> orders = g.symmetry == Symmetry::none ? perm::all(g.arity) : std::vector<Perm>{perm::identity(g.arity)};
          // Subtree choices per block.
          std::vector<std::vector<Raw>> choices;
          for (const auto& b : blocks) {
            std::vector<Raw> opts;
            for (const Raw& t : data_[b.size()].trees) {
              Raw u = t;
              relabel(u, b);
              opts.push_back(std::move(u));
            }
            choices.push_back(std::move(opts));
          }
          for (const Perm& ord : orders) {
            std::vector<std::size_t> pick(blocks.size(), 0);
            for (;;) {
              Raw t{-1, static_cast<int>(gi), {}};
              for (int j = 0; j < g.arity; ++j) {
                int blk = ord[static_cast<std::size_t>(j)];
                t.kids.push_back(choices[static_cast<std::size_t>(blk)][pick[static_cast<std::size_t>(blk)]]);
              }
              d.trees.push_back(std::move(t));
              std::size_t j = 0;
              while (j < pick.size() && ++pick[j] == choices[j].size()) pick[j++] = 0;
              if (j == pick.size()) break;
            }
          }
        }
      }
    }
    for (std::size_t k = 0; k < d.trees.size(); ++k) {
      d.index[key(d.trees[k], gens_)] = k;
      d.degrees.push_back(tree_degree(d.trees[k], gens_));
    }
  }

  Field f_;
  std::vector<Generator> gens_;
  std::vector<ArityData> data_;
};

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Raw to_raw(const ListedTree& t, const std::map<std::string, int>& gen_index, const std::vector<Generator>& gens,
           std::vector<int>& leaves) {
  if (t.children.empty()) {
    if (t.leaf <= 0) throw ValidationError("relation tree: leaf labels must be positive integers");
    leaves.push_back(t.leaf - 1);
    return Raw{t.leaf - 1, -1, {}};
  }
  auto it = gen_index.find(t.label);
  if (it == gen_index.end()) throw ValidationError("relation tree: unknown generator '" + t.label + "'");
  const Generator& g = gens[static_cast<std::size_t>(it->second)];
  if (static_cast<int>(t.children.size()) != g.arity)
    throw ValidationError("relation tree: generator '" + t.label + "' has arity " + std::to_string(g.arity) + ", got " +
                          std::to_string(t.children.size()) + " children");
  Raw r{-1, it->second, {}};
  for (const ListedTree& c : t.children) r.kids.push_back(to_raw(c, gen_index, gens, leaves));
  return r;
}

}  // namespace

PresentedOperad presented_operad(const OperadPresentation& p, const Window& w) {
  w.validate();
  if (w.max_arity > 7) throw ValidationError("presented operad: window.maxArity " + std::to_string(w.max_arity) + " exceeds 7");
  const Field& f = p.field;
  std::map<std::string, int> gen_index;
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    const Generator& gen = p.generators[g];
    if (gen.arity < 2) throw ValidationError("generator '" + gen.label + "': arity must be >= 2");
    if (gen.degree % 2 != 0) throw ValidationError("generator '" + gen.label + "': only even degrees are supported");
    if (gen.label.empty() || !gen_index.emplace(gen.label, static_cast<int>(g)).second)
      throw ValidationError("generator labels must be nonempty and distinct");
  }
  int N = w.max_arity;
  FreeOperad F(f, p.generators, N);

  // Relations as canonical vectors, grouped by arity.
  std::map<int, std::vector<SparseVec>> rels;
  for (std::size_t r = 0; r < p.relations.size(); ++r) {
    const auto& rel = p.relations[r];
    if (rel.empty()) continue;
    int arity = -1, degree = 0;
    std::vector<std::pair<Raw, Scalar>> terms;
    for (const RelationTerm& term : rel) {
      std::vector<int> leaves;
      Raw t = to_raw(term.tree, gen_index, p.generators, leaves);
      int n = static_cast<int>(leaves.size());
      std::sort(leaves.begin(), leaves.end());
      for (int k = 0; k < n; ++k)
        if (leaves[static_cast<std::size_t>(k)] != k)
          throw ValidationError("relation " + std::to_string(r + 1) + ": leaves must be 1..n, each once");
      if (t.leaf >= 0) throw ValidationError("relation " + std::to_string(r + 1) + ": a bare leaf is not a relation term");
      int d = tree_degree(t, p.generators);
      if (arity < 0) {
        arity = n;
        degree = d;
      } else if (arity != n || degree != d) {
        throw AxiomError("inconsistent relation " + std::to_string(r + 1) + ": terms differ in arity or degree");
      }
      terms.emplace_back(std::move(t), f.normalize(term.coeff));
    }
    if (arity > N) continue;
    std::map<std::size_t, Scalar> acc;
    for (auto& [t, c] : terms) F.add(acc, t, arity, c);
    SparseVec v = F.finish(acc);
    if (!v.empty()) rels[arity].push_back(std::move(v));
  }

  std::map<int, RowReducer> ideal;
  for (int n = 1; n <= N; ++n) {
    RowReducer red(f, F.at(n).trees.size());
    if (rels.count(n))
      for (const SparseVec& v : rels[n])
        for (const Perm& s : perm::all(n)) red.insert(F.act(n, v, s));
    // generator o_S ideal, ideal o_S generator; slot 0 suffices because
    // both sides are Sigma-closed.
    for (const Generator& g : p.generators) {
      int r = g.arity;
      int gi = gen_index.at(g.label);
      std::vector<Perm> orders = g.symmetry == Symmetry::none ? perm::all(r) : std::vector<Perm>{perm::identity(r)};
      std::vector<SparseVec> gvecs;
      for (const Perm& ord : orders) {
        Raw t{-1, gi, {}};
        for (int j = 0; j < r; ++j) t.kids.push_back(Raw{ord[static_cast<std::size_t>(j)], -1, {}});
        std::map<std::size_t, Scalar> acc;
        F.add(acc, t, r, Scalar(1));
        gvecs.push_back(F.finish(acc));
      }
      int k = n - r + 1;
      if (k >= 2 && ideal.count(k) && ideal.at(k).rank())
        for (const auto& s : subsets(n, k))
          for (const SparseVec& gv : gvecs)
            for (const SparseVec& iv : ideal.at(k).rows()) red.insert(F.graft_vec(r, gv, 0, k, iv, s));
      int m = n - r + 1;
      if (m >= 2 && ideal.count(m) && ideal.at(m).rank())
        for (const auto& s : subsets(n, r))
          for (const SparseVec& iv : ideal.at(m).rows())
            for (const SparseVec& gv : gvecs) red.insert(F.graft_vec(m, iv, 0, r, gv, s));
    }
    red.finalize();
    ideal.emplace(n, std::move(red));
  }

  // Quotient bases and normal forms.
  std::map<int, std::vector<std::size_t>> qbasis;  // free indices, sorted by degree
  std::map<int, std::vector<std::size_t>> qpos;    // free index -> quotient position
  for (int n = 1; n <= N; ++n) {
    std::vector<std::size_t> fc = ideal.at(n).free_columns();
    const auto& degs = F.at(n).degrees;
    std::stable_sort(fc.begin(), fc.end(), [&](std::size_t a, std::size_t b) { return degs[a] < degs[b]; });
    qpos[n].assign(F.at(n).trees.size(), RowReducer::npos);
    for (std::size_t j = 0; j < fc.size(); ++j) qpos[n][fc[j]] = j;
    qbasis[n] = std::move(fc);
  }
  auto normal = [&](int n, const SparseVec& v) {
    SparseVec r = ideal.at(n).reduce(v);
    SparseVec out;
    for (const auto& [k, c] : r) out.emplace_back(qpos[n][k], c);
    return sv_normalize(f, std::move(out));
  };

  PresentedOperad out;
  SymSeqObject seq(f, w);
  for (int n = 1; n <= N; ++n) {
    const auto& qb = qbasis[n];
    if (qb.empty()) continue;
    Component c;
    for (std::size_t k : qb) {
      c.labels.push_back(key(F.at(n).trees[k], p.generators));
      int d = F.at(n).degrees[k];
      if (!w.contains_degree(d)) throw ValidationError("presented operad: degree " + std::to_string(d) + " outside the window");
      c.degrees.push_back(d);
    }
    for (int t = 0; t + 1 < n; ++t) {
      Perm s = perm::transposition(n, t);
      std::vector<SparseVec> cols;
      for (std::size_t k : qb) cols.push_back(normal(n, F.act(n, SparseVec{{k, Scalar(1)}}, s)));
      c.transpositions.push_back(Matrix::from_columns(f, qb.size(), cols));
    }
    seq.set_arity(n, std::move(c));

    auto& names = out.free_basis[n];
    for (const Raw& t : F.at(n).trees) names.push_back(key(t, p.generators));
    Matrix qm(f, qb.size(), F.at(n).trees.size());
    for (std::size_t col = 0; col < F.at(n).trees.size(); ++col)
      for (const auto& [r, v] : normal(n, SparseVec{{col, Scalar(1)}})) qm.set(r, col, v);
    out.quotient_map.emplace(n, std::move(qm));
  }

  Operad o("presented", seq, 0);
  for (int m = 1; m <= N; ++m)
    for (int k = 1; m + k - 1 <= N; ++k) {
      if (qbasis[m].empty() || qbasis[k].empty()) continue;
      int n = m + k - 1;
      for (int i = 0; i < m; ++i) {
        std::vector<int> s(static_cast<std::size_t>(k));
        std::iota(s.begin(), s.end(), i);
        std::vector<SparseVec> table;
        for (std::size_t a : qbasis[m])
          for (std::size_t b : qbasis[k])
            table.push_back(normal(n, F.graft_vec(m, SparseVec{{a, Scalar(1)}}, i, k, SparseVec{{b, Scalar(1)}}, s)));
        o.set_partial(m, i, k, std::move(table));
      }
    }
  out.operad = std::move(o);
  return out;
}

namespace {

ListedTree L(int l) { return ListedTree::make_leaf(l); }
ListedTree V(const std::string& g, ListedTree a, ListedTree b) { return ListedTree::vertex(g, {std::move(a), std::move(b)}); }

}  // namespace

OperadPresentation lie_presentation(Field field) {
  OperadPresentation p{field, {{"b", 2, 0, Symmetry::antisymmetric}}, {}};
  p.relations.push_back({{Scalar(1), V("b", V("b", L(1), L(2)), L(3))},
                         {Scalar(1), V("b", V("b", L(2), L(3)), L(1))},
                         {Scalar(1), V("b", V("b", L(3), L(1)), L(2))}});
  return p;
}

OperadPresentation ass_presentation(Field field) {
  OperadPresentation p{field, {{"m", 2, 0, Symmetry::none}}, {}};
  p.relations.push_back({{Scalar(1), V("m", V("m", L(1), L(2)), L(3))}, {Scalar(-1), V("m", L(1), V("m", L(2), L(3)))}});
  return p;
}

OperadPresentation comm_presentation(Field field) {
  OperadPresentation p{field, {{"c", 2, 0, Symmetry::symmetric}}, {}};
  p.relations.push_back({{Scalar(1), V("c", V("c", L(1), L(2)), L(3))}, {Scalar(-1), V("c", L(1), V("c", L(2), L(3)))}});
  return p;
}

}  // namespace opkit
