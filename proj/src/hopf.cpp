#include "opkit/hopf.hpp"

#include <algorithm>
#include <functional>
#include <memory>

#include "opkit/operad.hpp"
#include "opkit/symseq.hpp"

namespace opkit {

namespace {

using Word = std::vector<std::size_t>;

Scalar sgn(const Field& f, bool negative) { return f.from_int(negative ? -1 : 1); }

void accumulate(const Field& f, std::map<std::size_t, Scalar>& acc, std::size_t k, const Scalar& v) {
  auto& slot = acc[k];
  slot = f.add(slot, v);
}

SparseVec to_sparse(const std::map<std::size_t, Scalar>& acc) {
  SparseVec out;
  for (const auto& [k, v] : acc)
    if (v != 0) out.emplace_back(k, v);
  return out;
}

// Words in a graded generating set, by total degree.
struct Words {
  std::vector<int> deg;
  int D = 0;
  std::vector<std::vector<Word>> by_degree;
  std::vector<std::map<Word, std::size_t>> index;

  Words(std::vector<int> degrees, int max_degree) : deg(std::move(degrees)), D(max_degree) {
    for (int d : deg)
      if (d < 1) throw ValidationError("generators must sit in degrees >= 1");
    by_degree.resize(static_cast<std::size_t>(D) + 1);
    index.resize(static_cast<std::size_t>(D) + 1);
    by_degree[0].push_back({});
    for (int n = 1; n <= D; ++n)
      for (std::size_t g = 0; g < deg.size(); ++g) {
        int r = n - deg[g];
        if (r < 0) continue;
        for (const Word& w : by_degree[static_cast<std::size_t>(r)]) {
          Word x{g};
          x.insert(x.end(), w.begin(), w.end());
          by_degree[static_cast<std::size_t>(n)].push_back(std::move(x));
        }
      }
    for (int n = 0; n <= D; ++n) {
      auto& ws = by_degree[static_cast<std::size_t>(n)];
      std::sort(ws.begin(), ws.end());
      for (std::size_t k = 0; k < ws.size(); ++k) index[static_cast<std::size_t>(n)][ws[k]] = k;
    }
  }

  std::size_t dim(int n) const { return n < 0 || n > D ? 0 : by_degree[static_cast<std::size_t>(n)].size(); }
  int degree(const Word& w) const {
    int d = 0;
    for (auto g : w) d += deg[g];
    return d;
  }
  std::size_t at(const Word& w) const { return index[static_cast<std::size_t>(degree(w))].at(w); }

  // Unshuffle coproduct of one word: calls f(deg_left, left, right, sign).
  template <class F>
  void unshuffles(const Word& w, F&& f) const {
    std::size_t k = w.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Word l, r;
      std::vector<int> degs, pos;
      int nl = 0;
      for (std::size_t t = 0; t < k; ++t)
        if (mask >> t & 1) ++nl;
      int il = 0, ir = nl;
      int dl = 0;
      for (std::size_t t = 0; t < k; ++t) {
        degs.push_back(deg[w[t]]);
        if (mask >> t & 1) {
          l.push_back(w[t]);
          pos.push_back(il++);
          dl += deg[w[t]];
        } else {
          r.push_back(w[t]);
          pos.push_back(ir++);
        }
      }
      f(dl, l, r, perm::koszul_sign(degs, pos) < 0);
    }
  }

  // Antipode of a word: (-1)^k times the Koszul sign of reversal.
  std::pair<Word, bool> antipode(const Word& w) const {
    std::vector<int> degs, pos;
    for (std::size_t t = 0; t < w.size(); ++t) {
      degs.push_back(deg[w[t]]);
      pos.push_back(static_cast<int>(w.size() - 1 - t));
    }
    Word r(w.rbegin(), w.rend());
    bool neg = (w.size() % 2 == 1) != (perm::koszul_sign(degs, pos) < 0);
    return {r, neg};
  }
};

// Coproduct of a vector of T_n, component (a, n - a), as a pair-indexed vector.
SparseVec tensor_comul(const Field& f, const Words& W, int a, int n, const SparseVec& v) {
  std::map<std::size_t, Scalar> acc;
  std::size_t db = W.dim(n - a);
  for (const auto& [k, c] : v)
    W.unshuffles(W.by_degree[static_cast<std::size_t>(n)][k], [&](int dl, const Word& l, const Word& r, bool neg) {
      if (dl != a) return;
      accumulate(f, acc, W.at(l) * db + W.at(r), neg ? f.neg(c) : c);
    });
  return to_sparse(acc);
}

SparseVec concat(const Field& f, const Words& W, const SparseVec& x, int a, const SparseVec& y, int b) {
  std::map<std::size_t, Scalar> acc;
  (void)b;
  for (const auto& [i, ci] : x)
    for (const auto& [j, cj] : y) {
      Word w = W.by_degree[static_cast<std::size_t>(a)][i];
      const Word& u = W.by_degree[static_cast<std::size_t>(b)][j];
      w.insert(w.end(), u.begin(), u.end());
      accumulate(f, acc, W.at(w), f.mul(ci, cj));
    }
  return to_sparse(acc);
}

GradedSpace word_space(const Words& W, const std::function<std::string(std::size_t)>& name) {
  GradedSpace s;
  for (int n = 0; n <= W.D; ++n)
    for (const Word& w : W.by_degree[static_cast<std::size_t>(n)]) {
      std::string label;
      for (auto g : w) label += (label.empty() ? "" : ".") + name(g);
      s.degrees[n].push_back(label.empty() ? "1" : label);
    }
  return s;
}

std::vector<int> flat_degrees(const GradedSpace& v) {
  std::vector<int> out;
  for (const auto& [d, labels] : v.degrees) out.insert(out.end(), labels.size(), d);
  return out;
}

std::vector<std::string> flat_labels(const GradedSpace& v) {
  std::vector<std::string> out;
  for (const auto& [d, labels] : v.degrees) out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

// Sym dims of a graded basis: polynomial on even generators (and on odd ones
// in characteristic 2), exterior on odd ones otherwise.
std::vector<std::size_t> sym_dims(const Field& f, const std::vector<int>& degrees, int D) {
  std::vector<std::size_t> p(static_cast<std::size_t>(D) + 1, 0);
  p[0] = 1;
  for (int d : degrees) {
    bool exterior = d % 2 != 0 && f.characteristic() != 2;
    std::vector<std::size_t> q(p.size(), 0);
    for (int n = 0; n <= D; ++n)
      for (int k = 0; n + k * d <= D; ++k) {
        if (exterior && k > 1) break;
        q[static_cast<std::size_t>(n + k * d)] += p[static_cast<std::size_t>(n)];
      }
    p = std::move(q);
  }
  return p;
}

void check(HopfReport& r, const std::string& axiom, int degree, bool ok) {
  r.checks.push_back({axiom, degree, ok});
  if (!ok) {
    r.valid = false;
    r.failures.push_back(axiom + " in degree " + std::to_string(degree));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// HopfPresentation

std::vector<std::size_t> HopfPresentation::dims() const {
  std::vector<std::size_t> out;
  for (int n = 0; n <= max_degree; ++n) out.push_back(dim(n));
  return out;
}

SparseVec HopfPresentation::mul(int a, std::size_t i, int b, std::size_t j) const {
  if (a + b > max_degree) return {};
  return product.at({a, b}).column(i * dim(b) + j);
}

SparseVec HopfPresentation::mul(int a, const SparseVec& x, int b, const SparseVec& y) const {
  std::map<std::size_t, Scalar> acc;
  if (a + b > max_degree) return {};
  const Matrix& m = product.at({a, b});
  std::size_t db = dim(b);
  SparseVec pairs;
  for (const auto& [i, ci] : x)
    for (const auto& [j, cj] : y) pairs.emplace_back(i * db + j, field.mul(ci, cj));
  std::sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
  return m.apply(pairs);
}

SparseVec HopfPresentation::comul(int a, int n, const SparseVec& x) const {
  if (a < 0 || a > n) return {};
  return coproduct.at({a, n - a}).apply(x);
}

HopfReport check_hopf(const HopfPresentation& h) {
  HopfReport r;
  const Field& f = h.field;
  const int D = h.max_degree;
  auto e = [](std::size_t i) { return SparseVec{{i, Scalar(1)}}; };
  if (h.dim(0) != 1) check(r, "connected", 0, false);

  for (int n = 0; n <= D; ++n) {
    bool ok = true;
    // unit
    for (std::size_t i = 0; i < h.dim(n); ++i) ok = ok && h.mul(0, 0, n, i) == e(i) && h.mul(n, i, 0, 0) == e(i);
    check(r, "unit", n, ok);
    // associativity
    ok = true;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) {
        int c = n - a - b;
        for (std::size_t i = 0; i < h.dim(a); ++i)
          for (std::size_t j = 0; j < h.dim(b); ++j)
            for (std::size_t k = 0; k < h.dim(c); ++k)
              ok = ok && h.mul(a + b, h.mul(a, i, b, j), c, e(k)) == h.mul(a, e(i), b + c, h.mul(b, j, c, k));
      }
    check(r, "associativity", n, ok);
    // counit
    ok = true;
    for (std::size_t i = 0; i < h.dim(n); ++i) ok = ok && h.comul(0, n, e(i)) == e(i) && h.comul(n, n, e(i)) == e(i);
    check(r, "counit", n, ok);
    // coassociativity
    ok = true;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) {
        int c = n - a - b;
        std::size_t db = h.dim(b), dc = h.dim(c), dbc = h.dim(b + c);
        for (std::size_t x = 0; x < h.dim(n); ++x) {
          std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Scalar> lhs, rhs;
          for (const auto& [p, cp] : h.comul(a + b, n, e(x)))
            for (const auto& [q, cq] : h.comul(a, a + b, e(p / dc))) {
              auto& s = lhs[{q / db, q % db, p % dc}];
              s = f.add(s, f.mul(cp, cq));
            }
          for (const auto& [p, cp] : h.comul(a, n, e(x)))
            for (const auto& [q, cq] : h.comul(b, b + c, e(p % dbc))) {
              auto& s = rhs[{p / dbc, q / dc, q % dc}];
              s = f.add(s, f.mul(cp, cq));
            }
          std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
          std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
          ok = ok && lhs == rhs;
        }
      }
    check(r, "coassociativity", n, ok);
    // compatibility
    ok = true;
    for (int a = 0; a <= n; ++a) {
      int b = n - a;
      for (std::size_t x = 0; x < h.dim(a); ++x)
        for (std::size_t y = 0; y < h.dim(b); ++y) {
          SparseVec xy = h.mul(a, x, b, y);
          for (int p = 0; p <= n; ++p) {
            int q = n - p;
            std::size_t dq = h.dim(q);
            SparseVec lhs = h.comul(p, n, xy);
            std::map<std::size_t, Scalar> acc;
            for (int a1 = std::max(0, p - b); a1 <= std::min(a, p); ++a1) {
              int b1 = p - a1, a2 = a - a1, b2 = b - b1;
              Scalar s = sgn(f, (a2 * b1) % 2 != 0);
              std::size_t da2 = h.dim(a2), db2 = h.dim(b2);
              for (const auto& [u, cu] : h.comul(a1, a, e(x)))
                for (const auto& [v, cv] : h.comul(b1, b, e(y))) {
                  SparseVec left = h.mul(a1, u / da2, b1, v / db2);
                  SparseVec right = h.mul(a2, u % da2, b2, v % db2);
                  Scalar c = f.mul(s, f.mul(cu, cv));
                  for (const auto& [l, cl] : left)
                    for (const auto& [rr, cr] : right) accumulate(f, acc, l * dq + rr, f.mul(c, f.mul(cl, cr)));
                }
            }
            ok = ok && lhs == to_sparse(acc);
          }
        }
    }
    check(r, "compatibility", n, ok);
    // antipode
    ok = true;
    for (std::size_t x = 0; x < h.dim(n); ++x) {
      std::map<std::size_t, Scalar> left, right;
      for (int a = 0; a <= n; ++a) {
        std::size_t db = h.dim(n - a);
        for (const auto& [p, cp] : h.comul(a, n, e(x))) {
          for (const auto& [t, ct] : h.mul(a, h.antipode.at(a).apply(e(p / db)), n - a, e(p % db))) accumulate(f, left, t, f.mul(cp, ct));
          for (const auto& [t, ct] : h.mul(a, e(p / db), n - a, h.antipode.at(n - a).apply(e(p % db)))) accumulate(f, right, t, f.mul(cp, ct));
        }
      }
      SparseVec expect = n == 0 ? e(0) : SparseVec{};
      ok = ok && to_sparse(left) == expect && to_sparse(right) == expect;
    }
    check(r, "antipode", n, ok);
  }
  return r;
}

HopfPresentation tensor_hopf(const Field& field, const GradedSpace& v, int max_degree) {
  if (max_degree < 0) throw ValidationError("max degree must be >= 0");
  v.validate();
  for (const auto& [d, labels] : v.degrees)
    if (d < 1 && !labels.empty()) throw ValidationError("tensor algebra: generators must sit in degrees >= 1");
  std::vector<std::string> names = flat_labels(v);
  Words W(flat_degrees(v), max_degree);
  HopfPresentation h;
  h.field = field;
  h.max_degree = max_degree;
  h.space = word_space(W, [&](std::size_t g) { return names[g]; });
  auto e = [](std::size_t i) { return SparseVec{{i, Scalar(1)}}; };
  for (int a = 0; a <= max_degree; ++a)
    for (int b = 0; a + b <= max_degree; ++b) {
      std::vector<SparseVec> cols;
      for (std::size_t i = 0; i < W.dim(a); ++i)
        for (std::size_t j = 0; j < W.dim(b); ++j) cols.push_back(concat(field, W, e(i), a, e(j), b));
      h.product[{a, b}] = Matrix::from_columns(field, W.dim(a + b), cols);
    }
  for (int n = 0; n <= max_degree; ++n) {
    for (int a = 0; a <= n; ++a) {
      std::vector<SparseVec> cols;
      for (std::size_t x = 0; x < W.dim(n); ++x) cols.push_back(tensor_comul(field, W, a, n, e(x)));
      h.coproduct[{a, n - a}] = Matrix::from_columns(field, W.dim(a) * W.dim(n - a), cols);
    }
    Matrix s(field, W.dim(n), W.dim(n));
    for (std::size_t x = 0; x < W.dim(n); ++x) {
      auto [w, neg] = W.antipode(W.by_degree[static_cast<std::size_t>(n)][x]);
      s.set(W.at(w), x, sgn(field, neg));
    }
    h.antipode[n] = std::move(s);
  }
  return h;
}

Matrix primitives(const HopfPresentation& h, int n) {
  if (n < 0 || n > h.max_degree) throw ValidationError("primitives: degree outside 0..D");
  if (n == 0) return Matrix(h.field, 1, 0);
  Matrix m(h.field, 0, h.dim(n));
  for (int a = 1; a < n; ++a) m = m.vstack(h.coproduct.at({a, n - a}));
  if (m.rows() == 0) return Matrix::identity(h.field, h.dim(n));
  return kernel(m);
}

std::vector<std::size_t> primitive_dims(const HopfPresentation& h) {
  std::vector<std::size_t> out;
  for (int n = 0; n <= h.max_degree; ++n) out.push_back(primitives(h, n).cols());
  return out;
}

namespace {

bool is_primitive(const HopfPresentation& h, int n, const SparseVec& x) {
  for (int a = 1; a < n; ++a)
    if (!h.comul(a, n, x).empty()) return false;
  return true;
}

SparseVec power(const HopfPresentation& h, int a, const SparseVec& x, int p) {
  SparseVec acc = x;
  for (int k = 1; k < p; ++k) acc = h.mul(a * k, acc, a, x);
  return acc;
}

}  // namespace

bool primitives_closed_under_commutator(const HopfPresentation& h) {
  const Field& f = h.field;
  std::vector<Matrix> prim;
  for (int n = 0; n <= h.max_degree; ++n) prim.push_back(primitives(h, n));
  for (int a = 1; a <= h.max_degree; ++a)
    for (int b = 1; a + b <= h.max_degree; ++b)
      for (std::size_t i = 0; i < prim[static_cast<std::size_t>(a)].cols(); ++i)
        for (std::size_t j = 0; j < prim[static_cast<std::size_t>(b)].cols(); ++j) {
          SparseVec x = prim[static_cast<std::size_t>(a)].column(i), y = prim[static_cast<std::size_t>(b)].column(j);
          SparseVec c = sv_axpy(f, h.mul(a, x, b, y), sgn(f, (a * b) % 2 == 0), h.mul(b, y, a, x));
          if (!is_primitive(h, a + b, c)) return false;
        }
  return true;
}

bool primitives_closed_under_p_power(const HopfPresentation& h) {
  int p = static_cast<int>(h.field.characteristic());
  if (p == 0) return true;
  for (int a = 1; a * p <= h.max_degree; ++a) {
    if (p != 2 && a % 2 != 0) continue;
    Matrix prim = primitives(h, a);
    for (std::size_t i = 0; i < prim.cols(); ++i)
      if (!is_primitive(h, a * p, power(h, a, prim.column(i), p))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lie algebras

SparseVec LiePresentation::bracket_of(std::size_t i, std::size_t j) const {
  if (i <= j) {
    auto it = bracket.find({i, j});
    return it == bracket.end() ? SparseVec{} : it->second;
  }
  bool odd = (degrees[i] * degrees[j]) % 2 != 0;
  // [e_i, e_j] = -(-1)^{|i||j|} [e_j, e_i]
  return sv_scale(field, bracket_of(j, i), Scalar(odd ? 1 : -1));
}

SparseVec LiePresentation::bracket_of(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, ci] : x)
    for (const auto& [j, cj] : y) out = sv_axpy(field, out, field.mul(ci, cj), bracket_of(i, j));
  return out;
}

GradedSpace LiePresentation::space() const {
  GradedSpace s;
  for (std::size_t i = 0; i < dim(); ++i) s.degrees[degrees[i]].push_back(labels[i]);
  return s;
}

LieReport check_lie(const LiePresentation& l) {
  LieReport r;
  auto fail = [&](const std::string& m) {
    r.valid = false;
    r.failures.push_back(m);
  };
  if (l.degrees.size() != l.labels.size()) {
    fail("labels and degrees differ in length");
    return r;
  }
  const std::size_t n = l.dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (l.degrees[i] < 1) fail("generator " + l.labels[i] + " is not in degree >= 1");
    for (std::size_t j = i + 1; j < n; ++j)
      if (l.labels[i] == l.labels[j]) fail("duplicate label " + l.labels[i]);
  }
  if (!r.valid) return r;
  for (const auto& [key, v] : l.bracket) {
    auto [i, j] = key;
    if (i > j || j >= n) {
      fail("bracket entry out of range or not in i <= j form");
      continue;
    }
    for (const auto& [k, c] : v) {
      (void)c;
      if (k >= n || l.degrees[k] != l.degrees[i] + l.degrees[j]) fail("bracket [" + l.labels[i] + "," + l.labels[j] + "] has the wrong degree");
    }
    if (i == j && l.degrees[i] % 2 == 0 && !v.empty()) fail("[" + l.labels[i] + "," + l.labels[i] + "] must vanish for an even element");
  }
  if (!r.valid) return r;
  const Field& f = l.field;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        int x = l.degrees[a], y = l.degrees[b], z = l.degrees[c];
        SparseVec ea{{a, Scalar(1)}}, eb{{b, Scalar(1)}}, ec{{c, Scalar(1)}};
        SparseVec t1 = l.bracket_of(ea, l.bracket_of(eb, ec));
        SparseVec t2 = l.bracket_of(eb, l.bracket_of(ec, ea));
        SparseVec t3 = l.bracket_of(ec, l.bracket_of(ea, eb));
        SparseVec s = sv_scale(f, t1, sgn(f, (x * z) % 2 != 0));
        s = sv_axpy(f, s, sgn(f, (y * x) % 2 != 0), t2);
        s = sv_axpy(f, s, sgn(f, (z * y) % 2 != 0), t3);
        if (!s.empty()) {
          fail("Jacobi fails on " + l.labels[a] + "," + l.labels[b] + "," + l.labels[c]);
          return r;
        }
      }
  return r;
}

LiePresentation abelian_lie(const Field& field, const GradedSpace& v) {
  v.validate();
  return LiePresentation{field, flat_labels(v), flat_degrees(v), {}};
}

LiePresentation heisenberg_lie(const Field& field, int degree) {
  if (degree < 1) throw ValidationError("heisenberg: degree must be >= 1");
  LiePresentation l{field, {"x", "y", "z"}, {degree, degree, 2 * degree}, {}};
  l.bracket[{0, 1}] = SparseVec{{2, Scalar(1)}};
  return l;
}

namespace {

// Lie words in V inside T(V): basis vectors per degree.
std::vector<std::vector<SparseVec>> lie_words(const HopfPresentation& t, const std::vector<int>& gen_deg) {
  const Field& f = t.field;
  const int D = t.max_degree;
  std::vector<std::vector<SparseVec>> basis(static_cast<std::size_t>(D) + 1);
  Words W(gen_deg, D);
  std::vector<std::pair<int, std::size_t>> gens;
  for (std::size_t g = 0; g < gen_deg.size(); ++g)
    if (gen_deg[g] <= D) gens.emplace_back(gen_deg[g], W.at({g}));
  for (int n = 1; n <= D; ++n) {
    RowReducer rr(f, t.dim(n));
    auto add = [&](const SparseVec& v) {
      if (rr.insert(v)) basis[static_cast<std::size_t>(n)].push_back(v);
    };
    for (const auto& [d, idx] : gens)
      if (d == n) add(SparseVec{{idx, Scalar(1)}});
    for (const auto& [d, idx] : gens) {
      int r = n - d;
      if (r < 1) continue;
      SparseVec g{{idx, Scalar(1)}};
      for (const SparseVec& w : basis[static_cast<std::size_t>(r)]) {
        SparseVec c = sv_axpy(f, t.mul(d, g, r, w), sgn(f, (d * r) % 2 == 0), t.mul(r, w, d, g));
        add(c);
      }
    }
  }
  return basis;
}

}  // namespace

LiePresentation free_lie(const Field& field, const GradedSpace& v, int max_degree) {
  HopfPresentation t = tensor_hopf(field, v, max_degree);
  std::vector<int> gd = flat_degrees(v);
  auto basis = lie_words(t, gd);
  LiePresentation l;
  l.field = field;
  std::vector<std::pair<int, std::size_t>> where;  // global index -> (degree, local)
  std::map<int, std::size_t> first;
  std::vector<std::string> gen_names = flat_labels(v);
  std::map<int, std::vector<std::string>> gen_by_degree;
  for (std::size_t g = 0; g < gd.size(); ++g) gen_by_degree[gd[g]].push_back(gen_names[g]);
  for (int n = 1; n <= max_degree; ++n) {
    first[n] = l.labels.size();
    const auto& names = gen_by_degree[n];
    for (std::size_t k = 0; k < basis[static_cast<std::size_t>(n)].size(); ++k) {
      l.labels.push_back(k < names.size() ? names[k] : "l" + std::to_string(n) + "_" + std::to_string(k));
      l.degrees.push_back(n);
      where.emplace_back(n, k);
    }
  }
  std::map<int, std::unique_ptr<Solver>> solvers;
  for (int n = 1; n <= max_degree; ++n)
    if (!basis[static_cast<std::size_t>(n)].empty())
      solvers[n] = std::make_unique<Solver>(Matrix::from_columns(field, t.dim(n), basis[static_cast<std::size_t>(n)]));
  for (std::size_t i = 0; i < l.dim(); ++i)
    for (std::size_t j = i; j < l.dim(); ++j) {
      auto [a, ki] = where[i];
      auto [b, kj] = where[j];
      if (a + b > max_degree) continue;
      const SparseVec& x = basis[static_cast<std::size_t>(a)][ki];
      const SparseVec& y = basis[static_cast<std::size_t>(b)][kj];
      SparseVec c = sv_axpy(field, t.mul(a, x, b, y), sgn(field, (a * b) % 2 == 0), t.mul(b, y, a, x));
      if (c.empty()) continue;
      SparseVec coords;
      if (!solvers.count(a + b) || !solvers.at(a + b)->solve(c, coords)) throw AxiomError("free Lie algebra: bracket leaves the span of Lie words");
      SparseVec global;
      for (const auto& [k, val] : coords) global.emplace_back(first.at(a + b) + k, val);
      l.bracket[{i, j}] = std::move(global);
    }
  return l;
}

// ---------------------------------------------------------------------------
// Enveloping algebras

Envelope enveloping(const LiePresentation& l, int max_degree) {
  LieReport lr = check_lie(l);
  if (!lr.valid) throw AxiomError("enveloping: not a Lie algebra: " + lr.failures.front());
  if (max_degree < 0) throw ValidationError("max degree must be >= 0");
  const Field& f = l.field;
  const int D = max_degree;
  Words W(l.degrees, D);
  const std::size_t g = l.dim();

  // Relations x_i x_j - (-1)^{|i||j|} x_j x_i - [x_i, x_j] as vectors of T.
  struct Rel {
    int degree;
    SparseVec vec;
  };
  std::vector<Rel> rels;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i; j < g; ++j) {
      int d = l.degrees[i] + l.degrees[j];
      if (d > D) continue;
      std::map<std::size_t, Scalar> acc;
      accumulate(f, acc, W.at({i, j}), Scalar(1));
      accumulate(f, acc, W.at({j, i}), sgn(f, (l.degrees[i] * l.degrees[j]) % 2 == 0));
      for (const auto& [k, c] : l.bracket_of(i, j)) accumulate(f, acc, W.at({k}), f.neg(c));
      rels.push_back({d, to_sparse(acc)});
    }

  std::vector<RowReducer> ideal;
  for (int n = 0; n <= D; ++n) ideal.emplace_back(f, W.dim(n));
  auto e = [](std::size_t i) { return SparseVec{{i, Scalar(1)}}; };
  for (const Rel& r : rels)
    for (int du = 0; r.degree + du <= D; ++du)
      for (int dw = 0; r.degree + du + dw <= D; ++dw)
        for (std::size_t u = 0; u < W.dim(du); ++u)
          for (std::size_t w = 0; w < W.dim(dw); ++w) {
            SparseVec left = concat(f, W, e(u), du, r.vec, r.degree);
            ideal[static_cast<std::size_t>(r.degree + du + dw)].insert(concat(f, W, left, du + r.degree, e(w), dw));
          }
  std::vector<std::vector<std::size_t>> free(static_cast<std::size_t>(D) + 1);
  std::vector<std::map<std::size_t, std::size_t>> qpos(static_cast<std::size_t>(D) + 1);
  for (int n = 0; n <= D; ++n) {
    auto& rr = ideal[static_cast<std::size_t>(n)];
    rr.finalize();
    free[static_cast<std::size_t>(n)] = rr.free_columns();
    for (std::size_t k = 0; k < free[static_cast<std::size_t>(n)].size(); ++k) qpos[static_cast<std::size_t>(n)][free[static_cast<std::size_t>(n)][k]] = k;
  }
  auto project = [&](int n, const SparseVec& v) {
    SparseVec out;
    for (const auto& [k, c] : ideal[static_cast<std::size_t>(n)].reduce(v)) out.emplace_back(qpos[static_cast<std::size_t>(n)].at(k), c);
    return out;
  };
  auto lift = [&](int n, std::size_t q) { return e(free[static_cast<std::size_t>(n)][q]); };
  auto qdim = [&](int n) { return n < 0 || n > D ? std::size_t{0} : free[static_cast<std::size_t>(n)].size(); };
  auto project_pair = [&](int a, int n, const SparseVec& pairs) {
    std::map<std::size_t, Scalar> acc;
    std::size_t db = W.dim(n - a), qb = qdim(n - a);
    for (const auto& [p, c] : pairs)
      for (const auto& [x, cx] : project(a, e(p / db)))
        for (const auto& [y, cy] : project(n - a, e(p % db))) accumulate(f, acc, x * qb + y, f.mul(c, f.mul(cx, cy)));
    return to_sparse(acc);
  };

  // Hopf ideal checks on the generating relations.
  for (const Rel& r : rels) {
    for (int a = 0; a <= r.degree; ++a)
      if (!project_pair(a, r.degree, tensor_comul(f, W, a, r.degree, r.vec)).empty())
        throw AxiomError("enveloping: relation span is not a coideal");
    std::map<std::size_t, Scalar> acc;
    for (const auto& [k, c] : r.vec) {
      auto [w, neg] = W.antipode(W.by_degree[static_cast<std::size_t>(r.degree)][k]);
      accumulate(f, acc, W.at(w), neg ? f.neg(c) : c);
    }
    if (!project(r.degree, to_sparse(acc)).empty()) throw AxiomError("enveloping: antipode does not preserve the ideal");
  }

  Envelope env;
  HopfPresentation& h = env.hopf;
  h.field = f;
  h.max_degree = D;
  for (int n = 0; n <= D; ++n)
    for (std::size_t q = 0; q < qdim(n); ++q) {
      const Word& w = W.by_degree[static_cast<std::size_t>(n)][free[static_cast<std::size_t>(n)][q]];
      env.basis_words[n].push_back(w);
      std::string label;
      for (auto x : w) label += (label.empty() ? "" : ".") + l.labels[x];
      h.space.degrees[n].push_back(label.empty() ? "1" : label);
    }
  for (int a = 0; a <= D; ++a)
    for (int b = 0; a + b <= D; ++b) {
      std::vector<SparseVec> cols;
      for (std::size_t i = 0; i < qdim(a); ++i)
        for (std::size_t j = 0; j < qdim(b); ++j) cols.push_back(project(a + b, concat(f, W, lift(a, i), a, lift(b, j), b)));
      h.product[{a, b}] = Matrix::from_columns(f, qdim(a + b), cols);
    }
  for (int n = 0; n <= D; ++n) {
    for (int a = 0; a <= n; ++a) {
      std::vector<SparseVec> cols;
      for (std::size_t x = 0; x < qdim(n); ++x) cols.push_back(project_pair(a, n, tensor_comul(f, W, a, n, lift(n, x))));
      h.coproduct[{a, n - a}] = Matrix::from_columns(f, qdim(a) * qdim(n - a), cols);
    }
    std::vector<SparseVec> cols;
    for (std::size_t x = 0; x < qdim(n); ++x) {
      auto [w, neg] = W.antipode(W.by_degree[static_cast<std::size_t>(n)][free[static_cast<std::size_t>(n)][x]]);
      cols.push_back(project(n, SparseVec{{W.at(w), sgn(f, neg)}}));
    }
    h.antipode[n] = Matrix::from_columns(f, qdim(n), cols);
  }
  for (std::size_t i = 0; i < g; ++i)
    env.unit_map.push_back(l.degrees[i] <= D ? project(l.degrees[i], e(W.at({i}))) : SparseVec{});
  env.pbw_dims = sym_dims(f, l.degrees, D);
  return env;
}

MilnorMooreReport milnor_moore_check(const LiePresentation& l, int max_degree) {
  Envelope env = enveloping(l, max_degree);
  const HopfPresentation& h = env.hopf;
  const Field& f = l.field;
  MilnorMooreReport rep;
  rep.envelope_dims = h.dims();
  rep.pbw_dims = env.pbw_dims;
  std::vector<Matrix> prim;
  for (int n = 0; n <= max_degree; ++n) prim.push_back(primitives(h, n));
  // Subspaces generated by primitives, degree by degree.
  std::vector<std::vector<SparseVec>> gen(static_cast<std::size_t>(max_degree) + 1);
  for (int n = 1; n <= max_degree; ++n) {
    MilnorMooreDegree md;
    md.degree = n;
    std::vector<SparseVec> image;
    for (std::size_t i = 0; i < l.dim(); ++i)
      if (l.degrees[i] == n) {
        ++md.lie_dim;
        image.push_back(env.unit_map[i]);
      }
    const Matrix& p = prim[static_cast<std::size_t>(n)];
    md.primitive_dim = p.cols();
    Matrix im = Matrix::from_columns(f, h.dim(n), image);
    std::size_t r = rank(im);
    md.injective = r == md.lie_dim;
    bool inside = rank(p.hstack(im)) == p.cols();
    md.iso = md.injective && inside && r == md.primitive_dim;

    RowReducer rr(f, h.dim(n));
    auto add = [&](const SparseVec& v) {
      if (rr.insert(v)) gen[static_cast<std::size_t>(n)].push_back(v);
    };
    for (std::size_t k = 0; k < p.cols(); ++k) add(p.column(k));
    for (int a = 1; a < n; ++a)
      for (std::size_t k = 0; k < prim[static_cast<std::size_t>(a)].cols(); ++k)
        for (const SparseVec& y : gen[static_cast<std::size_t>(n - a)]) add(h.mul(a, prim[static_cast<std::size_t>(a)].column(k), n - a, y));
    md.generated = rr.rank() == h.dim(n);
    rep.iso = rep.iso && md.iso;
    rep.generated_by_primitives = rep.generated_by_primitives && md.generated;
    rep.degrees.push_back(md);
  }
  return rep;
}

RestrictedReport restricted_monad(const Field& field, const GradedSpace& v, int max_degree) {
  if (field.is_rational()) throw ValidationError("restricted structure needs a field of characteristic p");
  int p = static_cast<int>(field.characteristic());
  HopfPresentation t = tensor_hopf(field, v, max_degree);
  RestrictedReport rep;
  rep.primitive_dims = primitive_dims(t);
  auto words = lie_words(t, flat_degrees(v));
  rep.closure_dims.push_back(0);
  for (int n = 1; n <= max_degree; ++n) {
    std::vector<SparseVec> span = words[static_cast<std::size_t>(n)];
    for (int q = p, m = n / p; m >= 1 && n % q == 0; q *= p, m = n / q) {
      if (p != 2 && m % 2 != 0) {
        if (q > n / p) break;
        continue;
      }
      for (const SparseVec& a : words[static_cast<std::size_t>(m)]) span.push_back(power(t, m, a, q));
      if (q > n / p) break;
    }
    std::size_t r = rank(Matrix::from_columns(field, t.dim(n), span));
    rep.closure_dims.push_back(r);
    bool prim = true;
    for (const auto& s : span) prim = prim && is_primitive(t, n, s);
    if (!prim || r != rep.primitive_dims[static_cast<std::size_t>(n)]) rep.closure_matches = false;
  }
  rep.p_power_closed = primitives_closed_under_p_power(t);
  rep.commutator_closed = primitives_closed_under_commutator(t);
  return rep;
}

// ---------------------------------------------------------------------------
// Sym exponential

namespace {

// Monomials in generators (nondecreasing index sequences), odd ones at most
// once unless the characteristic is 2.
std::vector<std::vector<Word>> monomials(const Field& f, const std::vector<int>& deg, std::size_t lo, std::size_t hi, int D) {
  std::vector<std::vector<Word>> out(static_cast<std::size_t>(D) + 1);
  std::function<void(std::size_t, Word&, int)> rec = [&](std::size_t from, Word& w, int d) {
    out[static_cast<std::size_t>(d)].push_back(w);
    for (std::size_t g = from; g < hi; ++g) {
      int nd = d + deg[g];
      if (nd > D) continue;
      bool odd = deg[g] % 2 != 0 && f.characteristic() != 2;
      if (odd && !w.empty() && w.back() == g) continue;
      w.push_back(g);
      rec(g, w, nd);
      w.pop_back();
    }
  };
  Word w;
  rec(lo, w, 0);
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

std::vector<std::size_t> coinvariant_dims(const Field& f, const GradedSpace& v, int D) {
  std::vector<std::size_t> out(static_cast<std::size_t>(D) + 1, 0);
  out[0] = 1;
  if (v.total_dim() == 0 || D == 0) return out;
  Operad c = comm_nu(f, Window{D, -64, 64});
  for (const auto& [len, by_deg] : free_algebra(c.seq(), v, D))
    for (const auto& [d, k] : by_deg)
      if (d <= D) out[static_cast<std::size_t>(d)] += k;
  return out;
}

}  // namespace

SymExponentialReport sym_exponential_check(const Field& field, const GradedSpace& x, const GradedSpace& y, int max_degree) {
  for (const GradedSpace* s : {&x, &y})
    for (const auto& [d, labels] : s->degrees)
      if (d < 1 && !labels.empty()) throw ValidationError("sym exponential: generators must sit in degrees >= 1");
  const int D = max_degree;
  std::vector<int> deg = flat_degrees(x);
  std::size_t nx = deg.size();
  std::vector<int> dy = flat_degrees(y);
  deg.insert(deg.end(), dy.begin(), dy.end());
  auto mx = monomials(field, deg, 0, nx, D);
  auto my = monomials(field, deg, nx, deg.size(), D);
  auto mxy = monomials(field, deg, 0, deg.size(), D);
  SymExponentialReport rep;
  rep.dims_equal = rep.invertible = true;
  for (int n = 0; n <= D; ++n) {
    std::size_t lhs = mxy[static_cast<std::size_t>(n)].size(), rhs = 0;
    std::map<Word, std::size_t> idx;
    for (std::size_t k = 0; k < lhs; ++k) idx[mxy[static_cast<std::size_t>(n)][k]] = k;
    std::vector<SparseVec> cols;
    for (int a = 0; a <= n; ++a)
      for (const Word& u : mx[static_cast<std::size_t>(a)])
        for (const Word& w : my[static_cast<std::size_t>(n - a)]) {
          Word uw = u;
          uw.insert(uw.end(), w.begin(), w.end());
          cols.push_back(SparseVec{{idx.at(uw), Scalar(1)}});
          ++rhs;
        }
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    Matrix m = Matrix::from_columns(field, lhs, cols);
    if (lhs != rhs) rep.dims_equal = false;
    if (lhs != rhs || rank(m) != lhs) rep.invertible = false;
    rep.iso[n] = std::move(m);
  }
  GradedSpace sum = x;
  for (const auto& [d, labels] : y.degrees)
    for (const auto& lab : labels) sum.degrees[d].push_back(lab + "'");
  rep.coinvariant_dims_match = coinvariant_dims(field, sum, D) == rep.lhs;
  return rep;
}

long witt_number(int d, int n) {
  if (n < 1) return 0;
  auto mu = [](int k) {
    int r = 1;
    for (int p = 2; p * p <= k; ++p)
      if (k % p == 0) {
        k /= p;
        if (k % p == 0) return 0;
        r = -r;
      }
    return k > 1 ? -r : r;
  };
  long total = 0;
  for (int e = 1; e <= n; ++e)
    if (n % e == 0) {
      long pw = 1;
      for (int t = 0; t < n / e; ++t) pw *= d;
      total += mu(e) * pw;
    }
  return total / n;
}

}  // namespace opkit
