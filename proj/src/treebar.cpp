#include <algorithm>
#include <functional>
#include <sstream>

#include "opkit/koszul.hpp"

namespace opkit {

namespace {

int min_leaf(const TreeCell& t) {
  if (t.leaf >= 0) return t.leaf;
  return min_leaf(t.kids.front());
}

int tree_degree(const Operad& o, const TreeCell& t) {
  if (t.leaf >= 0) return 0;
  int d = o.degree(static_cast<int>(t.kids.size()), t.op) + 1;
  for (const auto& k : t.kids) d += tree_degree(o, k);
  return d;
}

void leaves(const TreeCell& t, std::vector<int>& out) {
  if (t.leaf >= 0) {
    out.push_back(t.leaf);
    return;
  }
  for (const auto& k : t.kids) leaves(k, out);
}

TreeCell relabel(const TreeCell& t, const std::function<int(int)>& f) {
  if (t.leaf >= 0) return TreeCell{f(t.leaf), 0, {}};
  TreeCell out{-1, t.op, {}};
  for (const auto& k : t.kids) out.kids.push_back(relabel(k, f));
  return out;
}

std::string tree_label(const TreeCell& t) {
  if (t.leaf >= 0) return std::to_string(t.leaf + 1);
  std::ostringstream os;
  os << 'v' << t.kids.size() << '_' << t.op << '(';
  for (std::size_t k = 0; k < t.kids.size(); ++k) os << (k ? "," : "") << tree_label(t.kids[k]);
  os << ')';
  return os.str();
}

// Sign and permutation that sort subtrees by minimal leaf; degrees are subtree degrees.
std::pair<Perm, int> sort_kids(const Operad& o, std::vector<TreeCell>& kids) {
  std::vector<int> mins, degs;
  for (const auto& k : kids) {
    mins.push_back(min_leaf(k));
    degs.push_back(tree_degree(o, k));
  }
  std::vector<int> s = mins;
  std::sort(s.begin(), s.end());
  Perm r(kids.size());
  for (std::size_t p = 0; p < kids.size(); ++p) r[p] = static_cast<int>(std::lower_bound(s.begin(), s.end(), mins[p]) - s.begin());
  std::vector<TreeCell> sorted(kids.size());
  for (std::size_t p = 0; p < kids.size(); ++p) sorted[static_cast<std::size_t>(r[p])] = std::move(kids[p]);
  kids = std::move(sorted);
  return {r, perm::koszul_sign(degs, r)};
}

using Terms = std::vector<std::pair<TreeCell, Scalar>>;

// All canonical trees with leaf set {0..n-1}, n >= 2.
std::vector<TreeCell> trees_on(const Operad& o, int n, std::map<int, std::vector<TreeCell>>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::vector<TreeCell> out;
  for (const auto& part : set_partitions(n)) {
    int r = static_cast<int>(part.size());
    if (r < 2 || o.dim(r) == 0) continue;
    std::vector<std::vector<TreeCell>> options;
    bool ok = true;
    for (const auto& block : part) {
      std::vector<TreeCell> opts;
      if (block.size() == 1) {
        opts.push_back(TreeCell{block[0], 0, {}});
      } else {
        for (const auto& t : trees_on(o, static_cast<int>(block.size()), memo))
          opts.push_back(relabel(t, [&](int l) { return block[static_cast<std::size_t>(l)]; }));
      }
      if (opts.empty()) ok = false;
      options.push_back(std::move(opts));
    }
    if (!ok) continue;
    std::vector<std::size_t> pos(options.size(), 0);
    while (true) {
      for (std::size_t op = 0; op < o.dim(r); ++op) {
        TreeCell t{-1, op, {}};
        for (std::size_t b = 0; b < options.size(); ++b) t.kids.push_back(options[b][pos[b]]);
        out.push_back(std::move(t));
      }
      std::size_t b = options.size();
      bool done = true;
      while (b > 0) {
        --b;
        if (++pos[b] < options[b].size()) {
          done = false;
          break;
        }
        pos[b] = 0;
      }
      if (done) break;
    }
  }
  memo[n] = out;
  return out;
}

// Sigma action on a tree: renames leaves, resorts children, acts on decorations.
Terms act_tree(const Operad& o, const TreeCell& t, const Perm& sigma) {
  const Field& f = o.field();
  if (t.leaf >= 0) return {{TreeCell{sigma[static_cast<std::size_t>(t.leaf)], 0, {}}, Scalar(1)}};
  std::vector<Terms> kid_terms;
  std::vector<TreeCell> probe;
  for (const auto& k : t.kids) {
    kid_terms.push_back(act_tree(o, k, sigma));
    probe.push_back(kid_terms.back().front().first);
  }
  // Reordering depends only on leaf sets and degrees, the same for every term.
  std::vector<int> mins, degs;
  for (std::size_t p = 0; p < t.kids.size(); ++p) {
    mins.push_back(min_leaf(probe[p]));
    degs.push_back(tree_degree(o, t.kids[p]));
  }
  std::vector<int> s = mins;
  std::sort(s.begin(), s.end());
  Perm r(t.kids.size());
  for (std::size_t p = 0; p < r.size(); ++p) r[p] = static_cast<int>(std::lower_bound(s.begin(), s.end(), mins[p]) - s.begin());
  Scalar sign = f.from_int(perm::koszul_sign(degs, r));
  int arity = static_cast<int>(t.kids.size());
  SparseVec opv = o.seq().act(arity, r, SparseVec{{t.op, Scalar(1)}});
  Terms out;
  std::vector<std::size_t> pos(kid_terms.size(), 0);
  while (true) {
    Scalar c = sign;
    std::vector<TreeCell> kids(t.kids.size());
    for (std::size_t p = 0; p < kid_terms.size(); ++p) {
      kids[static_cast<std::size_t>(r[p])] = kid_terms[p][pos[p]].first;
      c = f.mul(c, kid_terms[p][pos[p]].second);
    }
    for (const auto& [idx, v] : opv) out.push_back({TreeCell{-1, idx, kids}, f.mul(c, v)});
    std::size_t b = kid_terms.size();
    bool done = true;
    while (b > 0) {
      --b;
      if (++pos[b] < kid_terms[b].size()) {
        done = false;
        break;
      }
      pos[b] = 0;
    }
    if (done) break;
  }
  return out;
}

// Edge contractions of the subtree at `node`; `prefix` is the total degree of
// the factors preceding it in preorder. `rebuild` places a replacement subtree
// back into the whole tree.
void contractions(const Operad& o, const TreeCell& node, int prefix, const std::function<TreeCell(TreeCell)>& rebuild, Terms& out) {
  if (node.leaf >= 0) return;
  const Field& f = o.field();
  int rv = static_cast<int>(node.kids.size());
  int dv = o.degree(rv, node.op);
  int between = 0;
  for (std::size_t t = 0; t < node.kids.size(); ++t) {
    const TreeCell& w = node.kids[t];
    if (w.leaf < 0) {
      int rw = static_cast<int>(w.kids.size());
      int wdeg = o.degree(rw, w.op) + 1;
      int sign = ((wdeg * between) % 2 ? -1 : 1) * (prefix % 2 ? -1 : 1) * (dv % 2 ? -1 : 1);
      std::vector<TreeCell> kids(node.kids.begin(), node.kids.begin() + static_cast<long>(t));
      kids.insert(kids.end(), w.kids.begin(), w.kids.end());
      kids.insert(kids.end(), node.kids.begin() + static_cast<long>(t) + 1, node.kids.end());
      auto [r, sort_sign] = sort_kids(o, kids);
      int rm = rv + rw - 1;
      SparseVec merged = o.seq().act(rm, r, o.partial(rv, node.op, static_cast<int>(t), rw, w.op));
      for (const auto& [idx, v] : merged)
        out.push_back({rebuild(TreeCell{-1, idx, kids}), f.mul(f.from_int(sign * sort_sign), v)});
    }
    between += tree_degree(o, w);
  }
  int pre = prefix + dv + 1;
  for (std::size_t t = 0; t < node.kids.size(); ++t) {
    const TreeCell& w = node.kids[t];
    auto sub = [&, t](TreeCell repl) {
      TreeCell copy = node;
      copy.kids[t] = std::move(repl);
      return rebuild(std::move(copy));
    };
    contractions(o, w, pre, sub, out);
    pre += tree_degree(o, w);
  }
}

// Finds the subtree with leaf set {lo..lo+k-1}; path records child indices.
bool find_block(const TreeCell& t, int lo, int k, std::vector<std::size_t>& path) {
  if (t.leaf >= 0) return false;
  std::vector<int> ls;
  leaves(t, ls);
  std::sort(ls.begin(), ls.end());
  if (static_cast<int>(ls.size()) == k && ls.front() == lo && ls.back() == lo + k - 1) return true;
  for (std::size_t c = 0; c < t.kids.size(); ++c) {
    path.push_back(c);
    if (find_block(t.kids[c], lo, k, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

TreeBar::TreeBar(Operad o, int max_arity) : o_(std::move(o)), max_arity_(max_arity) {
  if (!o_.reduced()) throw ValidationError("tree bar: operad " + o_.name() + " is not reduced");
  if (max_arity_ > o_.max_arity()) throw ValidationError("tree bar: arity beyond the operad's window");
}

const TreeBar::Arity& TreeBar::build(int n) const {
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  if (n < 1 || n > max_arity_) throw ValidationError("tree bar: arity out of range");
  Arity a;
  std::vector<TreeCell> all;
  if (n == 1) {
    all.push_back(TreeCell{0, 0, {}});
  } else {
    std::map<int, std::vector<TreeCell>> memo;
    all = trees_on(o_, n, memo);
  }
  if (all.size() > kMaxBarCells) throw ValidationError("tree bar: arity " + std::to_string(n) + " has too many cells");
  GradedSpace space;
  for (auto& t : all) {
    int d = tree_degree(o_, t);
    a.index[t] = {d, a.cells[d].size()};
    space.degrees[d].push_back(tree_label(t));
    a.cells[d].push_back(std::move(t));
  }
  const Field& f = o_.field();
  ChainComplex cx(f, space);
  for (const auto& [d, cs] : a.cells) {
    if (!a.cells.count(d - 1)) continue;
    std::vector<SparseVec> cols;
    for (const auto& t : cs) {
      Terms terms;
      contractions(o_, t, 0, [](TreeCell x) { return x; }, terms);
      std::map<std::size_t, Scalar> acc;
      for (auto& [tt, c] : terms) {
        auto [dd, idx] = a.index.at(tt);
        if (dd != d - 1) throw AxiomError("tree bar: contraction changed degree wrongly");
        acc[idx] = f.add(acc[idx], c);
      }
      SparseVec col;
      for (auto& [k, v] : acc)
        if (v != 0) col.emplace_back(k, v);
      cols.push_back(std::move(col));
    }
    cx.set_d(d, Matrix::from_columns(f, a.cells.at(d - 1).size(), cols));
  }
  a.complex = std::move(cx);
  return cache_.emplace(n, std::move(a)).first->second;
}

const ChainComplex& TreeBar::complex(int n) const { return build(n).complex; }
const std::map<int, std::vector<TreeCell>>& TreeBar::cells(int n) const { return build(n).cells; }

Matrix TreeBar::action(int n, int d, int t) const {
  const Arity& a = build(n);
  const Field& f = o_.field();
  auto it = a.cells.find(d);
  std::size_t dim = it == a.cells.end() ? 0 : it->second.size();
  Matrix m(f, dim, dim);
  if (dim == 0) return m;
  Perm s = perm::transposition(n, t);
  for (std::size_t k = 0; k < dim; ++k)
    for (const auto& [tt, c] : act_tree(o_, it->second[k], s)) m.add_to(a.index.at(tt).second, k, c);
  return m;
}

std::map<std::pair<int, int>, std::map<std::pair<std::size_t, std::size_t>, Scalar>> TreeBar::cocompose(int m, int i, int k, int d,
                                                                                                         const SparseVec& v) const {
  const Field& f = o_.field();
  int n = m + k - 1;
  const Arity& a = build(n);
  std::map<std::pair<int, int>, std::map<std::pair<std::size_t, std::size_t>, Scalar>> out;
  auto cit = a.cells.find(d);
  if (cit == a.cells.end()) return out;
  auto put = [&](int d1, int d2, std::size_t x, std::size_t y, const Scalar& c) {
    auto& slot = out[{d1, d2}][{x, y}];
    slot = f.add(slot, c);
  };
  for (const auto& [idx, c] : v) {
    const TreeCell& t = cit->second[idx];
    if (k == 1) {
      put(d, 0, idx, 0, c);
      continue;
    }
    if (m == 1) {
      put(0, d, 0, idx, c);
      continue;
    }
    std::vector<std::size_t> path;
    if (!find_block(t, i, k, path)) continue;
    // Degree of the factors after the subtree in preorder.
    const TreeCell* node = &t;
    int after = 0;
    for (std::size_t p : path) {
      for (std::size_t q = p + 1; q < node->kids.size(); ++q) after += tree_degree(o_, node->kids[q]);
      node = &node->kids[p];
    }
    TreeCell sub = relabel(*node, [&](int l) { return l - i; });
    int dsub = tree_degree(o_, *node);
    std::function<TreeCell(const TreeCell&, std::size_t)> cut = [&](const TreeCell& x, std::size_t depth) -> TreeCell {
      if (depth == path.size()) return TreeCell{i, 0, {}};
      TreeCell y = x;
      y.kids[path[depth]] = cut(x.kids[path[depth]], depth + 1);
      return y;
    };
    TreeCell outer = relabel(cut(t, 0), [&](int l) { return l > i ? l - (k - 1) : l; });
    const Arity& am = build(m);
    const Arity& ak = build(k);
    auto [d1, x1] = am.index.at(outer);
    auto [d2, x2] = ak.index.at(sub);
    int sign = (dsub * after) % 2 ? -1 : 1;
    put(d1, d2, x1, x2, f.mul(c, f.from_int(sign)));
  }
  for (auto it = out.begin(); it != out.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();) jt = jt->second == 0 ? it->second.erase(jt) : std::next(jt);
    it = it->second.empty() ? out.erase(it) : std::next(it);
  }
  return out;
}

}  // namespace opkit
