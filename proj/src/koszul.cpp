#include "opkit/koszul.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>

namespace opkit {

namespace {

using Rgs = std::vector<int>;

int block_count(const Rgs& p) { return p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1; }

Rgs canonical(const std::vector<int>& labels) {
  std::map<int, int> ids;
  Rgs out(labels.size());
  for (std::size_t e = 0; e < labels.size(); ++e) {
    auto it = ids.find(labels[e]);
    if (it == ids.end()) it = ids.emplace(labels[e], static_cast<int>(ids.size())).first;
    out[e] = it->second;
  }
  return out;
}

std::vector<std::vector<int>> blocks_of(const Rgs& p) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(block_count(p)));
  for (std::size_t e = 0; e < p.size(); ++e) out[static_cast<std::size_t>(p[e])].push_back(static_cast<int>(e));
  return out;
}

// Blocks of `fine` inside each block of `coarse`, sorted.
std::vector<std::vector<int>> children_of(const Rgs& coarse, const Rgs& fine) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(block_count(coarse)));
  std::vector<bool> seen(static_cast<std::size_t>(block_count(fine)), false);
  for (std::size_t e = 0; e < coarse.size(); ++e) {
    auto c = static_cast<std::size_t>(fine[e]);
    if (seen[c]) continue;
    seen[c] = true;
    out[static_cast<std::size_t>(coarse[e])].push_back(fine[e]);
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

// Rank of each entry within the sorted list.
Perm ranks(const std::vector<int>& v) {
  std::vector<int> s = v;
  std::sort(s.begin(), s.end());
  Perm out(v.size());
  for (std::size_t p = 0; p < v.size(); ++p)
    out[p] = static_cast<int>(std::lower_bound(s.begin(), s.end(), v[p]) - s.begin());
  return out;
}

SparseVec unit_vec(std::size_t i) { return SparseVec{{i, Scalar(1)}}; }

// Calls f(indices, coefficient) for every term of the tensor product of the vectors.
template <class F>
void for_each_term(const Field& fld, const std::vector<SparseVec>& vs, F&& f) {
  for (const auto& v : vs)
    if (v.empty()) return;
  std::vector<std::size_t> pos(vs.size(), 0), idx(vs.size());
  while (true) {
    Scalar c(1);
    for (std::size_t k = 0; k < vs.size(); ++k) {
      idx[k] = vs[k][pos[k]].first;
      c = fld.mul(c, vs[k][pos[k]].second);
    }
    f(idx, c);
    std::size_t k = vs.size();
    while (k > 0) {
      --k;
      if (++pos[k] < vs[k].size()) break;
      pos[k] = 0;
      if (k == 0) return;
    }
    if (vs.empty()) return;
  }
}

const std::vector<Rgs>& partitions_rgs(int n) {
  static std::map<int, std::vector<Rgs>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Rgs> out;
  for (const auto& part : set_partitions(n)) {
    Rgs r(static_cast<std::size_t>(n));
    for (std::size_t b = 0; b < part.size(); ++b)
      for (int e : part[b]) r[static_cast<std::size_t>(e)] = static_cast<int>(b);
    out.push_back(r);
  }
  return cache.emplace(n, std::move(out)).first->second;
}

// Strict refinements of p.
std::vector<Rgs> refinements(const Rgs& p) {
  auto blocks = blocks_of(p);
  std::vector<Rgs> out;
  std::vector<std::size_t> choice(blocks.size(), 0);
  std::vector<const std::vector<Rgs>*> parts;
  for (const auto& b : blocks) parts.push_back(&partitions_rgs(static_cast<int>(b.size())));
  while (true) {
    bool trivial = true;
    std::vector<int> labels(p.size());
    int offset = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Rgs& sub = (*parts[b])[choice[b]];
      int k = block_count(sub);
      if (k > 1) trivial = false;
      for (std::size_t t = 0; t < blocks[b].size(); ++t) labels[static_cast<std::size_t>(blocks[b][t])] = offset + sub[t];
      offset += k;
    }
    if (!trivial) out.push_back(canonical(labels));
    std::size_t b = blocks.size();
    bool done = true;
    while (b > 0) {
      --b;
      if (++choice[b] < parts[b]->size()) {
        done = false;
        break;
      }
      choice[b] = 0;
    }
    if (done) break;
  }
  return out;
}

// Decoration choices for one cell shape: X arity, O arity per block per level, Y arity per block.
struct Shape {
  std::vector<Rgs> levels;
  int x_arity = 0;
  std::vector<std::vector<int>> op_arity;
  std::vector<int> y_arity;
};

Shape shape_of(const std::vector<Rgs>& levels) {
  Shape s;
  s.levels = levels;
  s.x_arity = block_count(levels[0]);
  for (std::size_t j = 1; j < levels.size(); ++j) {
    auto ch = children_of(levels[j - 1], levels[j]);
    std::vector<int> a;
    for (const auto& c : ch) a.push_back(static_cast<int>(c.size()));
    s.op_arity.push_back(a);
  }
  for (const auto& b : blocks_of(levels.back())) s.y_arity.push_back(static_cast<int>(b.size()));
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Modules

RightModule trivial_right(const Operad& o) {
  return {"triv", triv_sequence(o.field(), o.window()), [](const OpElement&, const std::vector<OpElement>& ops) {
            if (ops.size() == 1 && ops[0].arity == 1) return unit_vec(0);
            return SparseVec{};
          }};
}

LeftModule trivial_left(const Operad& o) {
  return {"triv", triv_sequence(o.field(), o.window()), [](const OpElement& op, const std::vector<OpElement>&) {
            if (op.arity == 1) return unit_vec(0);
            return SparseVec{};
          }};
}

RightModule regular_right(const Operad& o) {
  return {o.name(), o.seq(), [o](const OpElement& x, const std::vector<OpElement>& ops) { return o.gamma(x, ops); }};
}

LeftModule regular_left(const Operad& o) {
  return {o.name(), o.seq(), [o](const OpElement& x, const std::vector<OpElement>& ys) { return o.gamma(x, ys); }};
}

RightModule truncated_right(const Operad& o, int m) {
  if (m < 1) throw ValidationError("truncation level must be >= 1");
  return {"tau" + std::to_string(m) + "(" + o.name() + ")", truncate(o.seq(), m, TruncateSide::above),
          [o, m](const OpElement& x, const std::vector<OpElement>& ops) {
            int total = 0;
            for (const auto& p : ops) total += p.arity;
            if (total > m) return SparseVec{};
            return o.gamma(x, ops);
          }};
}

// ---------------------------------------------------------------------------
// Leveled bar complex

BarComplex::BarComplex(RightModule x, Operad o, LeftModule y, Window w)
    : x_(std::move(x)), o_(std::move(o)), y_(std::move(y)), w_(w) {
  w_.validate();
  if (!o_.reduced()) throw ValidationError("bar complex: operad " + o_.name() + " is not reduced");
  if (x_.seq.dim(0) != 0 || y_.seq.dim(0) != 0) throw ValidationError("bar complex: modules must vanish in arity 0");
  if (w_.max_arity > o_.max_arity()) throw ValidationError("bar complex: window exceeds the operad's arity range");
}

namespace {

// Walks chains of partitions with nonzero decoration spaces.
template <class F>
void walk_chains(int n, const SymSeqObject& xs, const Operad& o, const SymSeqObject& ys, F&& visit) {
  std::vector<Rgs> chain;
  std::function<void()> rec = [&]() {
    const Rgs last = chain.back();
    bool ok = true;
    for (const auto& b : blocks_of(last)) ok = ok && ys.dim(static_cast<int>(b.size())) > 0;
    if (ok) visit(chain);
    for (Rgs q : refinements(last)) {
      bool fine = true;
      for (const auto& c : children_of(last, q)) fine = fine && o.dim(static_cast<int>(c.size())) > 0;
      if (!fine) continue;
      chain.push_back(std::move(q));
      rec();
      chain.pop_back();
    }
  };
  for (const Rgs& p0 : partitions_rgs(n)) {
    if (xs.dim(block_count(p0)) == 0) continue;
    chain.assign(1, p0);
    rec();
  }
}

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > static_cast<std::size_t>(-1) / a) return static_cast<std::size_t>(-1);
  return a * b;
}

}  // namespace

std::size_t BarComplex::predicted_cells(int n) const {
  std::size_t total = 0;
  walk_chains(n, x_.seq, o_, y_.seq, [&](const std::vector<Rgs>& chain) {
    Shape s = shape_of(chain);
    std::size_t c = x_.seq.dim(s.x_arity);
    for (const auto& lvl : s.op_arity)
      for (int a : lvl) c = sat_mul(c, a == 1 ? 1 : o_.dim(a));
    for (int a : s.y_arity) c = sat_mul(c, y_.seq.dim(a));
    total = total + c < total ? static_cast<std::size_t>(-1) : total + c;
  });
  return total;
}

std::vector<BarCell> BarComplex::enumerate(int n) const {
  std::vector<BarCell> out;
  walk_chains(n, x_.seq, o_, y_.seq, [&](const std::vector<Rgs>& chain) {
    Shape s = shape_of(chain);
    std::vector<std::size_t> radix;
    radix.push_back(x_.seq.dim(s.x_arity));
    for (const auto& lvl : s.op_arity)
      for (int a : lvl) radix.push_back(a == 1 ? 1 : o_.dim(a));
    for (int a : s.y_arity) radix.push_back(y_.seq.dim(a));
    std::vector<std::size_t> pos(radix.size(), 0);
    while (true) {
      BarCell c;
      c.levels = chain;
      std::size_t k = 0;
      c.x = pos[k++];
      for (const auto& lvl : s.op_arity) {
        std::vector<std::size_t> ops;
        for (int a : lvl) {
          ops.push_back(a == 1 ? o_.unit() : pos[k]);
          ++k;
        }
        c.ops.push_back(std::move(ops));
      }
      for (std::size_t b = 0; b < s.y_arity.size(); ++b) c.ys.push_back(pos[k++]);
      out.push_back(std::move(c));
      std::size_t r = radix.size();
      bool done = true;
      while (r > 0) {
        --r;
        if (++pos[r] < radix[r]) {
          done = false;
          break;
        }
        pos[r] = 0;
      }
      if (done) break;
    }
  });
  return out;
}

int BarComplex::cell_degree(const BarCell& c) const {
  int d = c.length() + x_.seq.arity(block_count(c.levels[0])).degrees[c.x];
  for (std::size_t j = 1; j < c.levels.size(); ++j) {
    auto ch = children_of(c.levels[j - 1], c.levels[j]);
    for (std::size_t b = 0; b < ch.size(); ++b) d += o_.degree(static_cast<int>(ch[b].size()), c.ops[j - 1][b]);
  }
  auto yb = blocks_of(c.levels.back());
  for (std::size_t b = 0; b < yb.size(); ++b) d += y_.seq.arity(static_cast<int>(yb[b].size())).degrees[c.ys[b]];
  return d;
}

const BarArity& BarComplex::arity(int n) const {
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  if (n < 1 || n > w_.max_arity) throw ValidationError("bar complex: arity " + std::to_string(n) + " outside the window");
  std::size_t predicted = predicted_cells(n);
  if (predicted > kMaxBarCells)
    throw ValidationError("bar complex: arity " + std::to_string(n) + " needs " + std::to_string(predicted) +
                          " cells, above the limit of " + std::to_string(kMaxBarCells));
  BarArity a;
  std::map<BarCell, std::size_t> index;
  for (BarCell& c : enumerate(n)) {
    int d = cell_degree(c);
    if (!w_.contains_degree(d))
      throw ValidationError("bar complex: a cell of degree " + std::to_string(d) + " lies outside the degree window");
    a.cells[d].push_back(std::move(c));
  }
  GradedSpace space;
  for (const auto& [d, cs] : a.cells)
    for (std::size_t k = 0; k < cs.size(); ++k) {
      index.emplace(cs[k], k);
      space.degrees[d].push_back(cell_label(n, cs[k]));
    }
  ChainComplex cx(o_.field(), space);
  for (const auto& [d, cs] : a.cells) {
    if (!a.cells.count(d - 1)) continue;
    std::vector<SparseVec> cols;
    for (const auto& c : cs) cols.push_back(boundary(n, c, index));
    cx.set_d(d, Matrix::from_columns(o_.field(), a.cells.at(d - 1).size(), cols));
  }
  a.complex = std::move(cx);
  index_[n] = std::move(index);
  return cache_.emplace(n, std::move(a)).first->second;
}

std::string BarComplex::cell_label(int n, const BarCell& c) const {
  (void)n;
  std::ostringstream os;
  for (std::size_t j = 0; j < c.levels.size(); ++j) {
    if (j) os << '>';
    for (int b : c.levels[j]) os << b;
  }
  os << ':' << c.x;
  for (const auto& lvl : c.ops) {
    os << '|';
    for (std::size_t b = 0; b < lvl.size(); ++b) os << (b ? "," : "") << lvl[b];
  }
  os << '|';
  for (std::size_t b = 0; b < c.ys.size(); ++b) os << (b ? "," : "") << c.ys[b];
  return os.str();
}

SparseVec BarComplex::boundary(int n, const BarCell& c, const std::map<BarCell, std::size_t>& index) const {
  (void)n;
  const Field& f = o_.field();
  const int s = c.length();
  std::map<std::size_t, Scalar> acc;
  auto add = [&](const BarCell& t, const Scalar& coeff) {
    auto it = index.find(t);
    if (it == index.end()) throw AxiomError("bar complex: face " + cell_label(n, t) + " is not a cell");
    auto& slot = acc[it->second];
    slot = f.add(slot, coeff);
  };
  if (s == 0) return {};

  std::vector<std::vector<std::vector<int>>> ch;  // ch[j][b]: blocks of P_{j+1} inside block b of P_j
  for (int j = 0; j < s; ++j) ch.push_back(children_of(c.levels[static_cast<std::size_t>(j)], c.levels[static_cast<std::size_t>(j) + 1]));
  auto op_deg = [&](int lvl, std::size_t b) {
    return o_.degree(static_cast<int>(ch[static_cast<std::size_t>(lvl) - 1][b].size()), c.ops[static_cast<std::size_t>(lvl) - 1][b]);
  };

  // d_0: X acts on the first level.
  {
    int k0 = block_count(c.levels[0]);
    std::vector<OpElement> ops;
    std::vector<int> concat;
    for (std::size_t b = 0; b < ch[0].size(); ++b) {
      ops.push_back({static_cast<int>(ch[0][b].size()), c.ops[0][b]});
      concat.insert(concat.end(), ch[0][b].begin(), ch[0][b].end());
    }
    SparseVec r = x_.act({k0, c.x}, ops);
    int k1 = block_count(c.levels[1]);
    r = x_.seq.act(k1, ranks(concat), r);
    for (const auto& [xi, coeff] : r) {
      BarCell t;
      t.levels.assign(c.levels.begin() + 1, c.levels.end());
      t.x = xi;
      t.ops.assign(c.ops.begin() + 1, c.ops.end());
      t.ys = c.ys;
      add(t, coeff);
    }
  }

  // Inner faces: compose levels j and j+1.
  for (int j = 1; j < s; ++j) {
    const auto& upper = ch[static_cast<std::size_t>(j) - 1];  // P_j blocks in P_{j-1} blocks
    const auto& lower = ch[static_cast<std::size_t>(j)];      // P_{j+1} blocks in P_j blocks
    std::vector<int> degs, new_pos;
    std::vector<int> slot_upper(upper.size()), slot_lower(lower.size());
    {
      int pos = 0;
      for (std::size_t b = 0; b < upper.size(); ++b) {
        slot_upper[b] = pos++;
        for (int cb : upper[b]) slot_lower[static_cast<std::size_t>(cb)] = pos++;
      }
      for (std::size_t b = 0; b < upper.size(); ++b) {
        degs.push_back(op_deg(j, b));
        new_pos.push_back(slot_upper[b]);
      }
      for (std::size_t cb = 0; cb < lower.size(); ++cb) {
        degs.push_back(op_deg(j + 1, cb));
        new_pos.push_back(slot_lower[cb]);
      }
    }
    Scalar sign = f.from_int(perm::koszul_sign(degs, new_pos) * (j % 2 ? -1 : 1));
    std::vector<SparseVec> merged;
    for (std::size_t b = 0; b < upper.size(); ++b) {
      std::vector<OpElement> inner;
      std::vector<int> concat;
      for (int cb : upper[b]) {
        auto cbi = static_cast<std::size_t>(cb);
        inner.push_back({static_cast<int>(lower[cbi].size()), c.ops[static_cast<std::size_t>(j)][cbi]});
        concat.insert(concat.end(), lower[cbi].begin(), lower[cbi].end());
      }
      SparseVec v = o_.gamma({static_cast<int>(upper[b].size()), c.ops[static_cast<std::size_t>(j) - 1][b]}, inner);
      merged.push_back(o_.seq().act(static_cast<int>(concat.size()), ranks(concat), v));
    }
    for_each_term(f, merged, [&](const std::vector<std::size_t>& idx, const Scalar& coeff) {
      BarCell t;
      t.levels = c.levels;
      t.levels.erase(t.levels.begin() + j);
      t.x = c.x;
      t.ops = c.ops;
      t.ops[static_cast<std::size_t>(j) - 1] = idx;
      t.ops.erase(t.ops.begin() + j);
      t.ys = c.ys;
      add(t, f.mul(sign, coeff));
    });
  }

  // d_s: the last level acts on Y.
  {
    const auto& last = ch[static_cast<std::size_t>(s) - 1];
    auto yblocks = blocks_of(c.levels.back());
    std::vector<int> degs, new_pos;
    int pos = 0;
    std::vector<int> slot_op(last.size()), slot_y(yblocks.size());
    for (std::size_t b = 0; b < last.size(); ++b) {
      slot_op[b] = pos++;
      for (int cb : last[b]) slot_y[static_cast<std::size_t>(cb)] = pos++;
    }
    for (std::size_t b = 0; b < last.size(); ++b) {
      degs.push_back(op_deg(s, b));
      new_pos.push_back(slot_op[b]);
    }
    for (std::size_t cb = 0; cb < yblocks.size(); ++cb) {
      degs.push_back(y_.seq.arity(static_cast<int>(yblocks[cb].size())).degrees[c.ys[cb]]);
      new_pos.push_back(slot_y[cb]);
    }
    Scalar sign = f.from_int(perm::koszul_sign(degs, new_pos) * (s % 2 ? -1 : 1));
    std::vector<SparseVec> merged;
    for (std::size_t b = 0; b < last.size(); ++b) {
      std::vector<OpElement> inner;
      std::vector<int> concat;
      for (int cb : last[b]) {
        auto cbi = static_cast<std::size_t>(cb);
        inner.push_back({static_cast<int>(yblocks[cbi].size()), c.ys[cbi]});
        concat.insert(concat.end(), yblocks[cbi].begin(), yblocks[cbi].end());
      }
      SparseVec v = y_.act({static_cast<int>(last[b].size()), c.ops[static_cast<std::size_t>(s) - 1][b]}, inner);
      merged.push_back(y_.seq.act(static_cast<int>(concat.size()), ranks(concat), v));
    }
    for_each_term(f, merged, [&](const std::vector<std::size_t>& idx, const Scalar& coeff) {
      BarCell t;
      t.levels.assign(c.levels.begin(), c.levels.end() - 1);
      t.x = c.x;
      t.ops.assign(c.ops.begin(), c.ops.end() - 1);
      t.ys = idx;
      add(t, f.mul(sign, coeff));
    });
  }

  SparseVec out;
  for (auto& [k, v] : acc)
    if (v != 0) out.emplace_back(k, v);
  return out;
}

SparseVec BarComplex::act(int n, const BarCell& c, const Perm& sigma, const std::map<BarCell, std::size_t>& index) const {
  const Field& f = o_.field();
  const std::size_t L = c.levels.size();
  // New partitions and the block renaming iota[j][old] = new.
  std::vector<Rgs> levels(L);
  std::vector<std::vector<int>> iota(L);
  for (std::size_t j = 0; j < L; ++j) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) labels[static_cast<std::size_t>(sigma[static_cast<std::size_t>(e)])] = c.levels[j][static_cast<std::size_t>(e)];
    levels[j] = canonical(labels);
    iota[j].assign(static_cast<std::size_t>(block_count(levels[j])), 0);
    for (int e = 0; e < n; ++e)
      iota[j][static_cast<std::size_t>(c.levels[j][static_cast<std::size_t>(e)])] = levels[j][static_cast<std::size_t>(sigma[static_cast<std::size_t>(e)])];
  }
  std::vector<int> degs, new_pos;
  std::vector<SparseVec> parts;
  int base = 0;
  // X
  int k0 = block_count(c.levels[0]);
  degs.push_back(x_.seq.arity(k0).degrees[c.x]);
  new_pos.push_back(0);
  parts.push_back(x_.seq.act(k0, iota[0], unit_vec(c.x)));
  base = 1;
  // Levels: factor for old block b of P_{j-1} goes to new position iota[j-1][b].
  std::vector<std::vector<std::size_t>> slot_of(L);  // part index for new block position
  for (std::size_t j = 1; j < L; ++j) {
    auto ch = children_of(c.levels[j - 1], c.levels[j]);
    std::vector<SparseVec> level(ch.size());
    for (std::size_t b = 0; b < ch.size(); ++b) {
      int r = static_cast<int>(ch[b].size());
      degs.push_back(o_.degree(r, c.ops[j - 1][b]));
      new_pos.push_back(base + iota[j - 1][b]);
      std::vector<int> renamed;
      for (int cb : ch[b]) renamed.push_back(iota[j][static_cast<std::size_t>(cb)]);
      level[static_cast<std::size_t>(iota[j - 1][b])] = o_.seq().act(r, ranks(renamed), unit_vec(c.ops[j - 1][b]));
    }
    for (auto& v : level) parts.push_back(std::move(v));
    base += static_cast<int>(ch.size());
  }
  // Y
  auto yb = blocks_of(c.levels.back());
  std::vector<SparseVec> ylevel(yb.size());
  for (std::size_t b = 0; b < yb.size(); ++b) {
    int r = static_cast<int>(yb[b].size());
    degs.push_back(y_.seq.arity(r).degrees[c.ys[b]]);
    new_pos.push_back(base + iota[L - 1][b]);
    std::vector<int> renamed;
    for (int e : yb[b]) renamed.push_back(sigma[static_cast<std::size_t>(e)]);
    ylevel[static_cast<std::size_t>(iota[L - 1][b])] = y_.seq.act(r, ranks(renamed), unit_vec(c.ys[b]));
  }
  for (auto& v : ylevel) parts.push_back(std::move(v));
  Scalar sign = f.from_int(perm::koszul_sign(degs, new_pos));

  std::map<std::size_t, Scalar> acc;
  std::vector<std::size_t> level_sizes;
  for (std::size_t j = 1; j < L; ++j) level_sizes.push_back(static_cast<std::size_t>(block_count(levels[j - 1])));
  for_each_term(f, parts, [&](const std::vector<std::size_t>& idx, const Scalar& coeff) {
    BarCell t;
    t.levels = levels;
    std::size_t k = 0;
    t.x = idx[k++];
    for (std::size_t sz : level_sizes) {
      t.ops.emplace_back(idx.begin() + static_cast<long>(k), idx.begin() + static_cast<long>(k + sz));
      k += sz;
    }
    t.ys.assign(idx.begin() + static_cast<long>(k), idx.end());
    auto it = index.find(t);
    if (it == index.end()) throw AxiomError("bar complex: action leaves the cell set");
    auto& slot = acc[it->second];
    slot = f.add(slot, f.mul(sign, coeff));
  });
  SparseVec out;
  for (auto& [k, v] : acc)
    if (v != 0) out.emplace_back(k, v);
  return out;
}

Matrix BarComplex::action(int n, int d, int t) const {
  const BarArity& a = arity(n);
  const auto& index = index_.at(n);
  auto it = a.cells.find(d);
  std::size_t dim = it == a.cells.end() ? 0 : it->second.size();
  Matrix m(o_.field(), dim, dim);
  if (dim == 0) return m;
  Perm s = perm::transposition(n, t);
  std::vector<SparseVec> cols;
  for (const auto& c : it->second) cols.push_back(act(n, c, s, index));
  return Matrix::from_columns(o_.field(), dim, cols);
}

// ---------------------------------------------------------------------------
// Homology with symmetric-group action

ArityHomology homology_with_action(const ChainComplex& c, int n, const std::function<Matrix(int, int)>& action, bool with_retractions) {
  ArityHomology out;
  const Field& f = c.field();
  out.homology = homology(c, true);
  std::vector<std::pair<int, std::size_t>> blocks;  // degree, offset
  std::size_t total = 0;
  for (const auto& [d, h] : out.homology.degrees) {
    if (h.dim == 0) continue;
    if (with_retractions) out.retractions.emplace(d, HomologyRetraction(c, h));
    blocks.emplace_back(d, total);
    for (std::size_t k = 0; k < h.dim; ++k) {
      out.component.labels.push_back("h" + std::to_string(d) + "_" + std::to_string(k));
      out.component.degrees.push_back(d);
    }
    total += h.dim;
  }
  std::map<int, HomologyProjector> projectors;
  if (n >= 2)
    for (const auto& [d, off] : blocks) projectors.emplace(d, HomologyProjector(c, out.homology.degrees.at(d)));
  for (int t = 0; t + 1 < n; ++t) {
    Matrix m(f, total, total);
    for (const auto& [d, off] : blocks) {
      const HomologyDegree& h = out.homology.degrees.at(d);
      Matrix a = action(d, t).transpose();
      const HomologyProjector& p = projectors.at(d);
      Matrix reps = h.representatives.transpose();
      for (std::size_t k = 0; k < h.dim; ++k)
        for (const auto& [i, v] : p.coordinates(a.combine_rows(reps.row(k)))) m.set(off + i, off + k, v);
    }
    out.component.transpositions.push_back(std::move(m));
  }
  return out;
}

RelativeHomology relative_compose_homology(const RightModule& x, const Operad& o, const LeftModule& y, const Window& w) {
  BarComplex bar(x, o, y, w);
  RelativeHomology out;
  out.homology = SymSeqObject(o.field(), w);
  for (int n = 1; n <= w.max_arity; ++n)
    if (std::size_t p = bar.predicted_cells(n); p > kMaxBarCells)
      throw ValidationError("bar complex: arity " + std::to_string(n) + " needs " + std::to_string(p) + " cells, above the limit of " +
                            std::to_string(kMaxBarCells));
  for (int n = 1; n <= w.max_arity; ++n) {
    const ChainComplex& cx = bar.complex(n);
    out.cells[n] = cx.space().total_dim();
    ArityHomology ah = homology_with_action(cx, n, [&](int d, int t) { return bar.action(n, d, t); });
    out.per_arity[n] = ah.homology;
    if (ah.component.dim() > 0) out.homology.set_arity(n, std::move(ah.component));
  }
  return out;
}

}  // namespace opkit
