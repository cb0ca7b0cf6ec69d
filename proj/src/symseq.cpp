#include "opkit/symseq.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace opkit {

// ---------------------------------------------------------------------------
// Permutations

namespace perm {

Perm identity(int n) {
  Perm p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm transposition(int n, int i) {
  Perm p = identity(n);
  std::swap(p[i], p[i + 1]);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

Perm inverse(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

int sign(const Perm& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

bool is_identity(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<Perm> all(int n) {
  std::vector<Perm> out;
  Perm p = identity(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::pair<Perm, std::size_t>> class_representatives(int n) {
  std::vector<std::pair<Perm, std::size_t>> out;
  unsigned long fact = 1;
  for (int i = 2; i <= n; ++i) fact *= static_cast<unsigned long>(i);
  // Integer partitions of n in decreasing-part order.
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int rest, int maxpart) {
    if (rest == 0) {
      Perm p(static_cast<std::size_t>(n));
      int pos = 0;
      unsigned long centralizer = 1;
      std::map<int, int> mult;
      for (int len : parts) {
        for (int k = 0; k < len; ++k) p[pos + k] = pos + (k + 1) % len;
        pos += len;
        ++mult[len];
      }
      for (auto [len, m] : mult) {
        for (int k = 0; k < m; ++k) centralizer *= static_cast<unsigned long>(len);
        for (int k = 2; k <= m; ++k) centralizer *= static_cast<unsigned long>(k);
      }
      out.emplace_back(p, fact / centralizer);
      return;
    }
    for (int part = std::min(rest, maxpart); part >= 1; --part) {
      parts.push_back(part);
      rec(rest - part, part);
      parts.pop_back();
    }
  };
  rec(n, n);
  return out;
}

std::vector<int> adjacent_word(Perm p) {
  std::vector<int> word;
  for (;;) {
    bool found = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (p[i] > p[i + 1]) {
        std::swap(p[i], p[i + 1]);
        word.push_back(static_cast<int>(i));
        found = true;
        break;
      }
    if (!found) break;
  }
  return word;
}

int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& new_pos) {
  int s = 1;
  for (std::size_t a = 0; a < degrees.size(); ++a) {
    if (degrees[a] % 2 == 0) continue;
    for (std::size_t b = a + 1; b < degrees.size(); ++b)
      if (degrees[b] % 2 != 0 && new_pos[a] > new_pos[b]) s = -s;
  }
  return s;
}

}  // namespace perm

// ---------------------------------------------------------------------------
// SymSeqObject

std::map<int, std::size_t> Component::degree_dims() const {
  std::map<int, std::size_t> out;
  for (int d : degrees) ++out[d];
  return out;
}

void SymSeqObject::set_arity(int n, Component c) {
  if (n < 0) throw ValidationError("symseq: negative arity");
  if (c.labels.size() != c.degrees.size()) throw ValidationError("symseq: labels/degrees length mismatch");
  if (!std::is_sorted(c.degrees.begin(), c.degrees.end()))
    throw ValidationError("symseq: arity " + std::to_string(n) + " basis is not sorted by degree");
  std::size_t expected = n >= 2 ? static_cast<std::size_t>(n - 1) : 0;
  if (c.dim() == 0) {
    arities_.erase(n);
    return;
  }
  if (c.transpositions.size() != expected)
    throw ValidationError("symseq: arity " + std::to_string(n) + " needs " + std::to_string(expected) +
                          " transposition matrices, got " + std::to_string(c.transpositions.size()));
  for (const auto& m : c.transpositions) {
    if (m.rows() != c.dim() || m.cols() != c.dim())
      throw ValidationError("symseq: arity " + std::to_string(n) + " action matrix has wrong shape");
    if (!(m.field() == field_)) throw ValidationError("symseq: action matrix over a different field");
  }
  arities_[n] = std::move(c);
}

bool SymSeqObject::has_arity(int n) const { return arities_.count(n) > 0; }

const Component& SymSeqObject::arity(int n) const {
  static const Component empty;
  auto it = arities_.find(n);
  return it == arities_.end() ? empty : it->second;
}

std::vector<std::size_t> SymSeqObject::dims(int from, int to) const {
  std::vector<std::size_t> out;
  for (int n = from; n <= to; ++n) out.push_back(dim(n));
  return out;
}

SparseVec SymSeqObject::act(int n, const Perm& sigma, SparseVec v) const {
  const Component& c = arity(n);
  if (c.dim() == 0) return {};
  for (int i : perm::adjacent_word(sigma)) v = c.transpositions[static_cast<std::size_t>(i)].apply(v);
  return v;
}

Matrix SymSeqObject::action(int n, const Perm& sigma) const {
  const Component& c = arity(n);
  Matrix m = Matrix::identity(field_, c.dim());
  if (c.dim() == 0) return m;
  for (int i : perm::adjacent_word(sigma)) m = c.transpositions[static_cast<std::size_t>(i)] * m;
  return m;
}

namespace {

void check_coxeter(const Field& f, int n, std::size_t dim, const std::vector<Matrix>& s, const std::string& what) {
  Matrix id = Matrix::identity(f, dim);
  for (int i = 0; i + 1 < n; ++i) {
    const Matrix& a = s[static_cast<std::size_t>(i)];
    if (!(a * a == id)) throw AxiomError(what + ": s_" + std::to_string(i) + "^2 != 1 in arity " + std::to_string(n));
    if (i + 2 < n) {
      Matrix ab = a * s[static_cast<std::size_t>(i + 1)];
      if (!(ab * ab * ab == id))
        throw AxiomError(what + ": braid relation fails for s_" + std::to_string(i) + " in arity " + std::to_string(n));
    }
    for (int j = i + 2; j + 1 < n; ++j) {
      const Matrix& b = s[static_cast<std::size_t>(j)];
      if (!(a * b == b * a))
        throw AxiomError(what + ": s_" + std::to_string(i) + " and s_" + std::to_string(j) + " do not commute in arity " +
                         std::to_string(n));
    }
  }
}

}  // namespace

void SymSeqObject::validate() const {
  for (const auto& [n, c] : arities_) {
    check_coxeter(field_, n, c.dim(), c.transpositions, "symseq action");
    for (const auto& m : c.transpositions)
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (const auto& [j, v] : m.row(i))
          if (c.degrees[i] != c.degrees[j])
            throw AxiomError("symseq action: arity " + std::to_string(n) + " action does not preserve degree");
  }
}

std::vector<Scalar> SymSeqObject::character(int n) const {
  std::vector<Scalar> out;
  for (const auto& [p, size] : perm::class_representatives(n)) {
    Matrix m = action(n, p);
    Scalar tr(0);
    for (std::size_t i = 0; i < m.rows(); ++i) tr = field_.add(tr, m.at(i, i));
    out.push_back(tr);
  }
  return out;
}

ChainComplex SymSeqObject::component_complex(int n) const {
  const Component& c = arity(n);
  GradedSpace s;
  for (std::size_t i = 0; i < c.dim(); ++i) s.degrees[c.degrees[i]].push_back(c.labels[i]);
  return ChainComplex(field_, std::move(s));
}

bool operator==(const SymSeqObject& a, const SymSeqObject& b) {
  if (!(a.field_ == b.field_) || a.arities_.size() != b.arities_.size()) return false;
  for (const auto& [n, c] : a.arities_) {
    auto it = b.arities_.find(n);
    if (it == b.arities_.end()) return false;
    const Component& d = it->second;
    if (c.labels != d.labels || c.degrees != d.degrees || !(c.transpositions == d.transpositions)) return false;
  }
  return true;
}

SymSeqObject triv_sequence(Field field, Window window) {
  SymSeqObject t(field, window);
  t.set_arity(1, Component{{"1"}, {0}, {}});
  return t;
}

// ---------------------------------------------------------------------------
// Composition product

std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
  std::vector<std::vector<std::vector<int>>> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      std::vector<std::vector<int>> p(static_cast<std::size_t>(blocks));
      for (int e = 0; e < n; ++e) p[static_cast<std::size_t>(rgs[e])].push_back(e);
      out.push_back(std::move(p));
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      rgs[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rgs[0] = 0;
  rec(1, 1);
  return out;
}

std::vector<unsigned long> bell_numbers(int upto) {
  // Bell triangle.
  std::vector<unsigned long> bell{1};
  std::vector<unsigned long> row{1};
  for (int n = 1; n <= upto; ++n) {
    std::vector<unsigned long> next{row.back()};
    for (unsigned long v : row) next.push_back(next.back() + v);
    bell.push_back(row.back());
    row = next;
  }
  return bell;
}

int cell_degree(const SymSeqObject& x, const SymSeqObject& y, const ComposeCell& c) {
  int d = x.arity(static_cast<int>(c.blocks.size())).degrees[c.x];
  for (std::size_t j = 0; j < c.ys.size(); ++j) d += y.arity(static_cast<int>(c.blocks[j].size())).degrees[c.ys[j]];
  return d;
}

std::vector<ComposeCell> compose_cells(const SymSeqObject& x, const SymSeqObject& y, int n) {
  std::vector<ComposeCell> cells;
  for (auto& blocks : set_partitions(n)) {
    int k = static_cast<int>(blocks.size());
    std::size_t dx = x.dim(k);
    if (dx == 0) continue;
    std::vector<std::size_t> ydims;
    bool empty = false;
    for (const auto& b : blocks) {
      ydims.push_back(y.dim(static_cast<int>(b.size())));
      if (ydims.back() == 0) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> ys(blocks.size(), 0);
    for (std::size_t xi = 0; xi < dx; ++xi) {
      std::fill(ys.begin(), ys.end(), 0);
      for (;;) {
        cells.push_back(ComposeCell{blocks, xi, ys});
        bool done = true;
        for (std::size_t j = ys.size(); j-- > 0;) {
          if (++ys[j] < ydims[j]) {
            done = false;
            break;
          }
          ys[j] = 0;
        }
        if (done) break;
      }
    }
  }
  std::stable_sort(cells.begin(), cells.end(), [&](const ComposeCell& a, const ComposeCell& b) {
    return cell_degree(x, y, a) < cell_degree(x, y, b);
  });
  return cells;
}

namespace {

std::string partition_label(const std::vector<std::vector<int>>& blocks) {
  std::string s;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (j) s += "|";
    for (int e : blocks[j]) s += std::to_string(e + 1);
  }
  return s;
}

using CellIndex = std::map<ComposeCell, std::size_t>;

// sigma . cell, expanded in the cell basis.
SparseVec relabel_cell(const SymSeqObject& x, const SymSeqObject& y, const CellIndex& index, const ComposeCell& c,
                       const Perm& sigma) {
  const Field& f = x.field();
  std::size_t k = c.blocks.size();
  std::vector<std::vector<int>> moved(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (int e : c.blocks[j]) moved[j].push_back(sigma[static_cast<std::size_t>(e)]);
    std::sort(moved[j].begin(), moved[j].end());
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return moved[a].front() < moved[b].front(); });
  Perm tau(k);
  for (std::size_t pos = 0; pos < k; ++pos) tau[order[pos]] = static_cast<int>(pos);

  SparseVec xv = x.act(static_cast<int>(k), tau, SparseVec{{c.x, Scalar(1)}});
  std::vector<SparseVec> yv(k);  // indexed by new position
  std::vector<int> ydeg(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& b = c.blocks[j];
    Perm lambda(b.size());
    for (std::size_t p = 0; p < b.size(); ++p) {
      int target = sigma[static_cast<std::size_t>(b[p])];
      lambda[p] = static_cast<int>(std::lower_bound(moved[j].begin(), moved[j].end(), target) - moved[j].begin());
    }
    int bs = static_cast<int>(b.size());
    yv[static_cast<std::size_t>(tau[j])] = y.act(bs, lambda, SparseVec{{c.ys[j], Scalar(1)}});
    ydeg[j] = y.arity(bs).degrees[c.ys[j]];
  }
  int sign = perm::koszul_sign(ydeg, std::vector<int>(tau.begin(), tau.end()));

  std::vector<std::vector<int>> new_blocks(k);
  for (std::size_t j = 0; j < k; ++j) new_blocks[static_cast<std::size_t>(tau[j])] = moved[j];

  SparseVec out;
  ComposeCell probe{new_blocks, 0, std::vector<std::size_t>(k)};
  std::function<void(std::size_t, Scalar)> expand = [&](std::size_t j, Scalar coeff) {
    if (j == k) {
      out.emplace_back(index.at(probe), coeff);
      return;
    }
    for (const auto& [yi, v] : yv[j]) {
      probe.ys[j] = yi;
      expand(j + 1, f.mul(coeff, v));
    }
  };
  for (const auto& [xi, v] : xv) {
    probe.x = xi;
    expand(0, f.mul(v, f.from_int(sign)));
  }
  return sv_normalize(f, std::move(out));
}

void check_compose_inputs(const SymSeqObject& x, const SymSeqObject& y, const Window& w) {
  if (!(x.field() == y.field())) throw ValidationError("compose: field mismatch");
  if (y.dim(0) != 0) throw ValidationError("compose: right factor has a nonzero arity-0 component");
  if (x.window().max_arity < w.max_arity || y.window().max_arity < w.max_arity)
    throw ValidationError("compose: window.maxArity " + std::to_string(w.max_arity) +
                          " exceeds the arities available in the inputs");
}

}  // namespace

SymSeqObject compose(const SymSeqObject& x, const SymSeqObject& y, const Window& w) {
  w.validate();
  check_compose_inputs(x, y, w);
  const Field& f = x.field();
  SymSeqObject out(f, w);
  for (int n = 0; n <= w.max_arity; ++n) {
    std::vector<ComposeCell> cells = compose_cells(x, y, n);
    if (cells.empty()) continue;
    CellIndex index;
    Component comp;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      index[cells[i]] = i;
      const ComposeCell& c = cells[i];
      int d = cell_degree(x, y, c);
      if (!w.contains_degree(d))
        throw ValidationError("compose: arity " + std::to_string(n) + " has a cell in degree " + std::to_string(d) +
                              " outside the window");
      std::string label = "<" + partition_label(c.blocks) + ">" + x.arity(static_cast<int>(c.blocks.size())).labels[c.x] + "(";
      for (std::size_t j = 0; j < c.ys.size(); ++j)
        label += (j ? "," : "") + y.arity(static_cast<int>(c.blocks[j].size())).labels[c.ys[j]];
      comp.labels.push_back(label + ")");
      comp.degrees.push_back(d);
    }
    for (int i = 0; i + 1 < n; ++i) {
      Perm s = perm::transposition(n, i);
      std::vector<SparseVec> cols;
      cols.reserve(cells.size());
      for (const auto& c : cells) cols.push_back(relabel_cell(x, y, index, c, s));
      comp.transpositions.push_back(Matrix::from_columns(f, cells.size(), cols));
    }
    out.set_arity(n, std::move(comp));
  }
  return out;
}

SymSeqObject compose_many(const std::vector<SymSeqObject>& xs, const Window& w) {
  if (xs.empty()) throw ValidationError("compose_many: empty list");
  SymSeqObject acc = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) acc = compose(xs[i], acc, w);
  return acc;
}

Matrix compose_associator(const SymSeqObject& x, const SymSeqObject& y, const SymSeqObject& z, const Window& w, int n) {
  const Field& f = x.field();
  SymSeqObject xy = compose(x, y, w);
  SymSeqObject yz = compose(y, z, w);
  std::vector<ComposeCell> left = compose_cells(xy, z, n);
  std::vector<ComposeCell> right = compose_cells(x, yz, n);
  if (left.size() != right.size()) throw AxiomError("associator: dimension mismatch in arity " + std::to_string(n));
  CellIndex right_index;
  for (std::size_t i = 0; i < right.size(); ++i) right_index[right[i]] = i;
  std::map<int, CellIndex> yz_index;
  auto yz_cell = [&](int m, const ComposeCell& c) {
    auto it = yz_index.find(m);
    if (it == yz_index.end()) {
      CellIndex idx;
      auto cs = compose_cells(y, z, m);
      for (std::size_t i = 0; i < cs.size(); ++i) idx[cs[i]] = i;
      it = yz_index.emplace(m, std::move(idx)).first;
    }
    return it->second.at(c);
  };
  std::map<int, std::vector<ComposeCell>> xy_cells;
  Matrix out(f, right.size(), left.size());
  for (std::size_t col = 0; col < left.size(); ++col) {
    const ComposeCell& lc = left[col];
    int k = static_cast<int>(lc.blocks.size());
    if (!xy_cells.count(k)) xy_cells[k] = compose_cells(x, y, k);
    const ComposeCell& inner = xy_cells[k][lc.x];
    // Word order on the left: x, y_1..y_m, z_1..z_k. On the right: x, then y_j followed by its z's.
    std::vector<int> degs;
    std::vector<int> new_pos;
    std::size_t m = inner.blocks.size();
    std::vector<int> ypos(m), zpos(static_cast<std::size_t>(k));
    int pos = 0;
    for (std::size_t j = 0; j < m; ++j) {
      ypos[j] = pos++;
      for (int a : inner.blocks[j]) zpos[static_cast<std::size_t>(a)] = pos++;
    }
    for (std::size_t j = 0; j < m; ++j) {
      degs.push_back(y.arity(static_cast<int>(inner.blocks[j].size())).degrees[inner.ys[j]]);
      new_pos.push_back(ypos[j]);
    }
    for (int a = 0; a < k; ++a) {
      degs.push_back(z.arity(static_cast<int>(lc.blocks[static_cast<std::size_t>(a)].size())).degrees[lc.ys[static_cast<std::size_t>(a)]]);
      new_pos.push_back(zpos[static_cast<std::size_t>(a)]);
    }
    int sign = perm::koszul_sign(degs, new_pos);

    ComposeCell rc;
    rc.x = inner.x;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<int> coarse;
      for (int a : inner.blocks[j])
        for (int e : lc.blocks[static_cast<std::size_t>(a)]) coarse.push_back(e);
      std::sort(coarse.begin(), coarse.end());
      ComposeCell sub;
      sub.x = inner.ys[j];
      for (int a : inner.blocks[j]) {
        std::vector<int> local;
        for (int e : lc.blocks[static_cast<std::size_t>(a)])
          local.push_back(static_cast<int>(std::lower_bound(coarse.begin(), coarse.end(), e) - coarse.begin()));
        sub.blocks.push_back(local);
        sub.ys.push_back(lc.ys[static_cast<std::size_t>(a)]);
      }
      rc.ys.push_back(yz_cell(static_cast<int>(coarse.size()), sub));
      rc.blocks.push_back(std::move(coarse));
    }
    out.set(right_index.at(rc), col, Scalar(sign));
  }
  return out;
}

SymSeqObject truncate(const SymSeqObject& x, int n, TruncateSide side) {
  if (n < 1) throw ValidationError("truncate: n must be >= 1");
  SymSeqObject out(x.field(), x.window());
  for (const auto& [a, c] : x.arities())
    if ((side == TruncateSide::above && a <= n) || (side == TruncateSide::below && a >= n)) out.set_arity(a, c);
  return out;
}

SymSeqObject operadic_shift(const SymSeqObject& x, int m) {
  SymSeqObject out(x.field(), x.window());
  Scalar twist = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
  for (const auto& [r, c] : x.arities()) {
    Component s = c;
    for (int& d : s.degrees) d += (1 - r) * m;
    for (auto& t : s.transpositions) t = t.scaled(twist);
    out.set_arity(r, std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norm maps and free algebras

NormMapResult norm_map(const Field& f, int n, std::size_t dim, const std::vector<Matrix>& s) {
  if (s.size() != static_cast<std::size_t>(std::max(n - 1, 0))) throw ValidationError("norm_map: need n-1 transposition matrices");
  for (const auto& m : s)
    if (m.rows() != dim || m.cols() != dim) throw ValidationError("norm_map: action matrix has wrong shape");
  check_coxeter(f, n, dim, s, "norm_map");
  NormMapResult out;
  Matrix id = Matrix::identity(f, dim);
  if (n <= 1 || dim == 0) {
    out.coinvariant_basis = id;
    out.invariant_basis = id;
    out.norm = id;
    out.is_iso = true;
    return out;
  }
  Matrix moved(f, dim, 0), fixed(f, 0, dim);
  for (const auto& m : s) {
    moved = moved.hstack(m - id);
    fixed = fixed.vstack(m - id);
  }
  out.coinvariant_basis = quotient_basis(moved);
  out.invariant_basis = kernel(fixed);
  // Sum over Sigma_n via cosets of Sigma_{k-1} inside Sigma_k.
  Matrix total = id;
  for (int k = 2; k <= n; ++k) {
    Matrix cosets = id;  // C_{k-1} = identity
    for (int j = 0; j <= k - 2; ++j) {
      Matrix c = id;
      for (int i = k - 2; i >= j; --i) c = s[static_cast<std::size_t>(i)] * c;
      cosets = cosets + c;
    }
    total = cosets * total;
  }
  Solver inv(out.invariant_basis);
  std::vector<SparseVec> cols;
  for (std::size_t q = 0; q < out.coinvariant_basis.cols(); ++q) {
    SparseVec image = total.apply(out.coinvariant_basis.column(q));
    SparseVec coords;
    if (!inv.solve(image, coords)) throw AxiomError("norm_map: image of the norm is not invariant");
    cols.push_back(coords);
  }
  out.norm = Matrix::from_columns(f, out.invariant_basis.cols(), cols);
  out.is_iso = out.norm.rows() == out.norm.cols() && rank(out.norm) == out.norm.rows();
  return out;
}

NormMapResult norm_map(const SymSeqObject& x, int n) {
  return norm_map(x.field(), n, x.dim(n), x.arity(n).transpositions);
}

namespace {

std::vector<int> flat_degrees(const GradedSpace& v) {
  std::vector<int> out;
  for (const auto& [d, b] : v.degrees)
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(d);
  return out;
}

}  // namespace

TensorPower tensor_power(const Field& f, const GradedSpace& v, int n) {
  std::vector<int> base = flat_degrees(v);
  std::size_t d = base.size();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= d;
  TensorPower tp;
  tp.degrees.assign(total, 0);
  std::vector<std::size_t> digits(static_cast<std::size_t>(n));
  auto decode = [&](std::size_t idx) {
    for (int i = n - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = idx % d;
      idx /= d;
    }
  };
  auto encode = [&]() {
    std::size_t idx = 0;
    for (std::size_t dg : digits) idx = idx * d + dg;
    return idx;
  };
  for (std::size_t t = 0; t < total; ++t) {
    decode(t);
    for (std::size_t dg : digits) tp.degrees[t] += base[dg];
  }
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<SparseVec> cols(total);
    for (std::size_t t = 0; t < total; ++t) {
      decode(t);
      auto& a = digits[static_cast<std::size_t>(i)];
      auto& b = digits[static_cast<std::size_t>(i + 1)];
      int sign = (base[a] % 2 != 0 && base[b] % 2 != 0) ? -1 : 1;
      std::swap(a, b);
      cols[t] = SparseVec{{encode(), f.from_int(sign)}};
    }
    tp.transpositions.push_back(Matrix::from_columns(f, total, cols));
  }
  return tp;
}

std::map<int, std::map<int, std::size_t>> free_algebra(const SymSeqObject& o, const GradedSpace& v, int max_word_length) {
  const Field& f = o.field();
  if (max_word_length > o.window().max_arity)
    throw ValidationError("free_algebra: word length " + std::to_string(max_word_length) + " exceeds window.maxArity " +
                          std::to_string(o.window().max_arity));
  std::map<int, std::map<int, std::size_t>> out;
  for (int n = 1; n <= max_word_length; ++n) {
    const Component& c = o.arity(n);
    if (c.dim() == 0) continue;
    TensorPower tp = tensor_power(f, v, n);
    std::size_t dv = tp.degrees.size();
    std::size_t dim = c.dim() * dv;
    if (dim == 0) continue;
    std::vector<int> degs(dim);
    for (std::size_t a = 0; a < c.dim(); ++a)
      for (std::size_t b = 0; b < dv; ++b) degs[a * dv + b] = c.degrees[a] + tp.degrees[b];
    Matrix moved(f, dim, 0);
    Matrix id = Matrix::identity(f, dim);
    for (int i = 0; i + 1 < n; ++i)
      moved = moved.hstack(c.transpositions[static_cast<std::size_t>(i)].kron(tp.transpositions[static_cast<std::size_t>(i)]) - id);
    Matrix q = n >= 2 ? quotient_basis(moved) : id;
    for (std::size_t j = 0; j < q.cols(); ++j) {
      SparseVec col = q.column(j);
      ++out[n][degs[col.front().first]];
    }
  }
  return out;
}

SummandRep compose_summand(const SymSeqObject& x, const SymSeqObject& y, int n, int k) {
  const Field& f = x.field();
  struct Cell {
    std::vector<int> map;
    std::size_t x;
    std::vector<std::size_t> ys;
  };
  std::vector<Cell> cells;
  std::map<std::tuple<std::vector<int>, std::size_t, std::vector<std::size_t>>, std::size_t> index;
  std::size_t dx = x.dim(k);
  std::vector<int> fmap(static_cast<std::size_t>(n), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      std::vector<int> fiber(static_cast<std::size_t>(k), 0);
      for (int v : fmap) ++fiber[static_cast<std::size_t>(v)];
      std::vector<std::size_t> ydims;
      for (int sz : fiber) {
        if (sz == 0) return;
        ydims.push_back(y.dim(sz));
        if (ydims.back() == 0) return;
      }
      std::vector<std::size_t> ys(static_cast<std::size_t>(k), 0);
      for (std::size_t xi = 0; xi < dx; ++xi) {
        std::fill(ys.begin(), ys.end(), 0);
        for (;;) {
          index[{fmap, xi, ys}] = cells.size();
          cells.push_back(Cell{fmap, xi, ys});
          bool done = true;
          for (std::size_t j = ys.size(); j-- > 0;) {
            if (++ys[j] < ydims[j]) {
              done = false;
              break;
            }
            ys[j] = 0;
          }
          if (done) break;
        }
      }
      return;
    }
    for (int v = 0; v < k; ++v) {
      fmap[static_cast<std::size_t>(i)] = v;
      rec(i + 1);
    }
  };
  if (dx) rec(0);
  SummandRep rep;
  rep.dim = cells.size();
  for (int i = 0; i + 1 < k; ++i) {
    Perm tau = perm::transposition(k, i);
    std::vector<SparseVec> cols;
    for (const Cell& c : cells) {
      std::vector<int> fmoved(c.map.size());
      for (std::size_t e = 0; e < c.map.size(); ++e) fmoved[e] = tau[static_cast<std::size_t>(c.map[e])];
      std::vector<int> ydeg;
      std::vector<std::size_t> ynew(c.ys.size());
      for (std::size_t j = 0; j < c.ys.size(); ++j) {
        int sz = static_cast<int>(std::count(c.map.begin(), c.map.end(), static_cast<int>(j)));
        ydeg.push_back(y.arity(sz).degrees[c.ys[j]]);
        ynew[static_cast<std::size_t>(tau[j])] = c.ys[j];
      }
      int sign = perm::koszul_sign(ydeg, std::vector<int>(tau.begin(), tau.end()));
      SparseVec col;
      for (const auto& [xi, v] : x.act(k, tau, SparseVec{{c.x, Scalar(1)}}))
        col.emplace_back(index.at({fmoved, xi, ynew}), f.mul(v, f.from_int(sign)));
      cols.push_back(sv_normalize(f, std::move(col)));
    }
    rep.transpositions.push_back(Matrix::from_columns(f, cells.size(), cols));
  }
  return rep;
}

std::vector<std::size_t> free_algebra_dims(const SymSeqObject& o, const GradedSpace& v, int max_word_length) {
  auto graded = free_algebra(o, v, max_word_length);
  std::vector<std::size_t> out;
  for (int n = 1; n <= max_word_length; ++n) {
    std::size_t total = 0;
    if (graded.count(n))
      for (auto [d, k] : graded[n]) total += k;
    out.push_back(total);
  }
  return out;
}

}  // namespace opkit
