#include "opkit/operad.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace opkit {

namespace {

const SparseVec kEmpty;

SparseVec unit_vec(std::size_t i) { return SparseVec{{i, Scalar(1)}}; }

std::string describe(const SparseVec& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size() && k < 6; ++k)
    s += (k ? " " : "") + std::to_string(v[k].first) + ":" + v[k].second.get_str();
  if (v.size() > 6) s += " ...";
  return s + "]";
}

}  // namespace

Operad::Operad(std::string name, SymSeqObject seq, std::size_t unit) : name_(std::move(name)), seq_(std::move(seq)), unit_(unit) {
  if (seq_.dim(1) == 0) throw ValidationError("operad " + name_ + ": arity 1 is empty, no unit");
  if (unit_ >= seq_.dim(1)) throw ValidationError("operad " + name_ + ": unit index out of range");
  if (seq_.arity(1).degrees[unit_] != 0) throw ValidationError("operad " + name_ + ": unit is not in degree 0");
}

void Operad::set_partial(int m, int i, int n, std::vector<SparseVec> table) {
  if (i < 0 || i >= m) throw ValidationError("operad: composition slot out of range");
  if (table.size() != dim(m) * dim(n)) throw ValidationError("operad: composition table has wrong size");
  for (auto& v : table) v = sv_normalize(field(), std::move(v));
  partials_[{m, i, n}] = std::move(table);
}

bool Operad::has_partial(int m, int i, int n) const { return partials_.count({m, i, n}) > 0; }

const SparseVec& Operad::partial(int m, std::size_t a, int i, int n, std::size_t b) const {
  auto it = partials_.find({m, i, n});
  if (it == partials_.end()) {
    if (m + n - 1 > max_arity()) throw ValidationError("operad " + name_ + ": composition leaves the window");
    return kEmpty;
  }
  return it->second[a * dim(n) + b];
}

SparseVec Operad::partial(int m, const SparseVec& x, int i, int n, const SparseVec& y) const {
  const Field& f = field();
  std::map<std::size_t, Scalar> acc;
  for (const auto& [a, ca] : x)
    for (const auto& [b, cb] : y) {
      Scalar c = f.mul(ca, cb);
      for (const auto& [t, ct] : partial(m, a, i, n, b)) {
        auto& slot = acc[t];
        slot = f.add(slot, f.mul(c, ct));
      }
    }
  SparseVec out;
  for (auto& [t, c] : acc)
    if (c != 0) out.emplace_back(t, c);
  return out;
}

Matrix Operad::partial_matrix(int m, int i, int n) const {
  std::size_t dn = dim(n);
  std::vector<SparseVec> cols;
  for (std::size_t a = 0; a < dim(m); ++a)
    for (std::size_t b = 0; b < dn; ++b) cols.push_back(partial(m, a, i, n, b));
  return Matrix::from_columns(field(), dim(m + n - 1), cols);
}

SparseVec Operad::gamma(const OpElement& x, const std::vector<OpElement>& ys) const {
  if (ys.size() != static_cast<std::size_t>(x.arity)) throw ValidationError("operad gamma: wrong number of inputs");
  SparseVec acc = unit_vec(x.index);
  int arity = x.arity, offset = 0;
  for (const OpElement& y : ys) {
    acc = partial(arity, acc, offset, y.arity, unit_vec(y.index));
    if (acc.empty()) return acc;
    arity += y.arity - 1;
    offset += y.arity;
  }
  return acc;
}

bool operator==(const Operad& a, const Operad& b) { return a.seq_ == b.seq_ && a.unit_ == b.unit_ && a.partials_ == b.partials_; }

Perm left_block_perm(const Perm& sigma, int i, int n) {
  int m = static_cast<int>(sigma.size());
  Perm inv = perm::inverse(sigma);
  int ip = inv[static_cast<std::size_t>(i)];
  Perm out(static_cast<std::size_t>(m + n - 1));
  for (int j = 0; j < m; ++j) {
    if (j == ip) continue;
    int pos = j < ip ? j : j + n - 1;
    int s = sigma[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(pos)] = s < i ? s : s + n - 1;
  }
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(ip + k)] = i + k;
  return out;
}

Perm right_block_perm(int m, int i, const Perm& tau) {
  int n = static_cast<int>(tau.size());
  Perm out = perm::identity(m + n - 1);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(i + k)] = i + tau[static_cast<std::size_t>(k)];
  return out;
}

// ---------------------------------------------------------------------------
// Axiom checks

OperadReport check_operad(const Operad& o, std::size_t max_failures) {
  OperadReport rep;
  const Field& f = o.field();
  int N = o.max_arity();
  auto fail = [&](std::string axiom, int m, int i, int n, std::string detail) {
    rep.valid = false;
    if (rep.failures.size() < max_failures) rep.failures.push_back({std::move(axiom), m, i, n, std::move(detail)});
  };
  std::vector<int> ar;
  for (int n = 1; n <= N; ++n)
    if (o.dim(n)) ar.push_back(n);

  try {
    o.seq().validate();
  } catch (const AxiomError& e) {
    fail("action", 0, 0, 0, e.what());
  }

  // Unit.
  for (int n : ar)
    for (std::size_t b = 0; b < o.dim(n); ++b) {
      ++rep.instances_checked;
      if (o.partial(1, o.unit(), 0, n, b) != unit_vec(b))
        fail("left unit", 1, 0, n, "element " + std::to_string(b));
      for (int i = 0; i < n; ++i)
        if (o.partial(n, b, i, 1, o.unit()) != unit_vec(b))
          fail("right unit", n, i, 1, "element " + std::to_string(b));
    }

  // Sequential and parallel associativity.
  for (int a : ar)
    for (int b : ar)
      for (int c : ar) {
        if (a + b + c - 2 > N) continue;
        for (std::size_t x = 0; x < o.dim(a); ++x)
          for (std::size_t y = 0; y < o.dim(b); ++y)
            for (std::size_t z = 0; z < o.dim(c); ++z) {
              SparseVec vx = unit_vec(x), vy = unit_vec(y), vz = unit_vec(z);
              for (int i = 0; i < a; ++i) {
                SparseVec xy = o.partial(a, vx, i, b, vy);
                for (int j = 0; j < b; ++j) {
                  ++rep.instances_checked;
                  SparseVec lhs = o.partial(a + b - 1, xy, i + j, c, vz);
                  SparseVec rhs = o.partial(a, vx, i, b + c - 1, o.partial(b, vy, j, c, vz));
                  if (lhs != rhs)
                    fail("sequential associativity", a, i, b,
                         "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ") j=" +
                             std::to_string(j) + " lhs " + describe(lhs) + " rhs " + describe(rhs));
                }
                for (int k = i + 1; k < a; ++k) {
                  ++rep.instances_checked;
                  SparseVec lhs = o.partial(a + b - 1, xy, k + b - 1, c, vz);
                  SparseVec rhs = o.partial(a + c - 1, o.partial(a, vx, k, c, vz), i, b, vy);
                  if ((o.degree(b, y) * o.degree(c, z)) % 2 != 0) rhs = sv_scale(f, rhs, Scalar(-1));
                  if (lhs != rhs)
                    fail("parallel associativity", a, i, b,
                         "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ") k=" +
                             std::to_string(k) + " lhs " + describe(lhs) + " rhs " + describe(rhs));
                }
              }
            }
      }

  // Equivariance on adjacent transpositions.
  for (int a : ar)
    for (int b : ar) {
      if (a + b - 1 > N) continue;
      for (std::size_t x = 0; x < o.dim(a); ++x)
        for (std::size_t y = 0; y < o.dim(b); ++y)
          for (int i = 0; i < a; ++i) {
            for (int t = 0; t + 1 < a; ++t) {
              ++rep.instances_checked;
              Perm s = perm::transposition(a, t);
              SparseVec lhs = o.partial(a, o.seq().act(a, s, unit_vec(x)), i, b, unit_vec(y));
              int ip = perm::inverse(s)[static_cast<std::size_t>(i)];
              SparseVec rhs = o.seq().act(a + b - 1, left_block_perm(s, i, b), o.partial(a, x, ip, b, y));
              if (lhs != rhs)
                fail("equivariance (left factor)", a, i, b, "s_" + std::to_string(t) + " on element " + std::to_string(x));
            }
            for (int t = 0; t + 1 < b; ++t) {
              ++rep.instances_checked;
              Perm s = perm::transposition(b, t);
              SparseVec lhs = o.partial(a, unit_vec(x), i, b, o.seq().act(b, s, unit_vec(y)));
              SparseVec rhs = o.seq().act(a + b - 1, right_block_perm(a, i, s), o.partial(a, x, i, b, y));
              if (lhs != rhs)
                fail("equivariance (right factor)", a, i, b, "s_" + std::to_string(t) + " on element " + std::to_string(y));
            }
          }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Built-ins

Operad triv_operad(Field field, Window window) {
  window.validate();
  Operad o("triv", triv_sequence(field, window), 0);
  o.set_partial(1, 0, 1, {unit_vec(0)});
  return o;
}

Operad comm_nu(Field field, Window window) {
  window.validate();
  SymSeqObject s(field, window);
  for (int n = 1; n <= window.max_arity; ++n)
    s.set_arity(n, Component{{"c" + std::to_string(n)}, {0}, std::vector<Matrix>(static_cast<std::size_t>(n - 1), Matrix::identity(field, 1))});
  Operad o("comm_nu", s, 0);
  for (int m = 1; m <= window.max_arity; ++m)
    for (int n = 1; m + n - 1 <= window.max_arity; ++n)
      for (int i = 0; i < m; ++i) o.set_partial(m, i, n, {unit_vec(0)});
  return o;
}

namespace {

std::string word_label(const Perm& w) {
  std::string l;
  for (int v : w) l += std::to_string(v + 1) + (w.size() >= 10 ? "." : "");
  return l;
}

}  // namespace

Operad ass_nu(Field field, Window window) {
  window.validate();
  int N = window.max_arity;
  SymSeqObject s(field, window);
  std::vector<std::map<Perm, std::size_t>> index(static_cast<std::size_t>(N + 1));
  std::vector<std::vector<Perm>> words(static_cast<std::size_t>(N + 1));
  for (int n = 1; n <= N; ++n) {
    words[n] = perm::all(n);
    Component c;
    for (std::size_t k = 0; k < words[n].size(); ++k) {
      index[n][words[n][k]] = k;
      c.labels.push_back(word_label(words[n][k]));
      c.degrees.push_back(0);
    }
    for (int t = 0; t + 1 < n; ++t) {
      Perm st = perm::transposition(n, t);
      std::vector<SparseVec> cols;
      for (const Perm& w : words[n]) cols.push_back(unit_vec(index[n].at(perm::compose(st, w))));
      c.transpositions.push_back(Matrix::from_columns(field, words[n].size(), cols));
    }
    s.set_arity(n, std::move(c));
  }
  Operad o("ass_nu", s, 0);
  for (int m = 1; m <= N; ++m)
    for (int n = 1; m + n - 1 <= N; ++n)
      for (int i = 0; i < m; ++i) {
        std::vector<SparseVec> table;
        for (const Perm& x : words[m])
          for (const Perm& y : words[n]) {
            Perm w;
            for (int letter : x) {
              if (letter == i)
                for (int l : y) w.push_back(i + l);
              else
                w.push_back(letter < i ? letter : letter + n - 1);
            }
            table.push_back(unit_vec(index[m + n - 1].at(w)));
          }
        o.set_partial(m, i, n, std::move(table));
      }
  return o;
}

Operad lie(Field field, Window window) {
  window.validate();
  if (window.max_arity > 7) throw ValidationError("lie: window.maxArity " + std::to_string(window.max_arity) + " exceeds 7");
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, Operad> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(field.name(), window.max_arity);
  auto it = cache.find(key);
  if (it == cache.end()) {
    PresentedOperad p = presented_operad(lie_presentation(field), Window{window.max_arity, -64, 64});
    it = cache.emplace(key, p.operad).first;
  }
  Operad o = it->second;
  SymSeqObject s = o.seq();
  s.set_window(window);
  Operad out("lie", s, o.unit());
  for (int m = 1; m <= window.max_arity; ++m)
    for (int n = 1; m + n - 1 <= window.max_arity; ++n)
      for (int i = 0; i < m; ++i) {
        std::vector<SparseVec> table;
        for (std::size_t a = 0; a < o.dim(m); ++a)
          for (std::size_t b = 0; b < o.dim(n); ++b) table.push_back(o.partial(m, a, i, n, b));
        out.set_partial(m, i, n, std::move(table));
      }
  return out;
}

Operad lie_shifted(Field field, Window window) {
  Operad o = operadic_shift(lie(field, window), 1);
  return o;
}

std::vector<std::string> builtin_names() { return {"triv", "comm_nu", "ass_nu", "lie", "lie_shifted"}; }

Operad builtin(const std::string& name, Field field, Window window) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  if (n == "triv") return triv_operad(field, window);
  if (n == "comm_nu") return comm_nu(field, window);
  if (n == "ass_nu") return ass_nu(field, window);
  if (n == "lie") return lie(field, window);
  if (n == "lie_shifted") return lie_shifted(field, window);
  throw ValidationError("unknown operad '" + name + "'");
}

Operad operadic_shift(const Operad& o, int m) {
  const Field& f = o.field();
  SymSeqObject s = operadic_shift(o.seq(), m);
  Operad out(o.name() + (m == 0 ? "" : "[" + std::to_string(m) + "]"), s, o.unit());
  int N = o.max_arity();
  for (int a = 1; a <= N; ++a)
    for (int b = 1; a + b - 1 <= N; ++b) {
      if (!o.dim(a) || !o.dim(b)) continue;
      int e_b = (1 - b) * m;
      for (int i = 0; i < a; ++i) {
        bool base_odd = (m * (b - 1) * i) % 2 != 0;
        std::vector<SparseVec> table;
        for (std::size_t x = 0; x < o.dim(a); ++x)
          for (std::size_t y = 0; y < o.dim(b); ++y) {
            bool odd = base_odd != ((o.degree(a, x) * e_b) % 2 != 0);
            SparseVec v = o.partial(a, x, i, b, y);
            table.push_back(odd ? sv_scale(f, v, Scalar(-1)) : v);
          }
        out.set_partial(a, i, b, std::move(table));
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Duals

std::vector<std::size_t> dual_order(const Component& c) {
  std::vector<std::size_t> p(c.dim());
  std::iota(p.begin(), p.end(), 0);
  std::stable_sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return -c.degrees[a] < -c.degrees[b]; });
  return p;
}

namespace {

// Matrix in the permuted basis: new index j corresponds to old index p[j].
Matrix permute_basis(const Matrix& m, const std::vector<std::size_t>& p) {
  std::vector<std::size_t> inv(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) inv[p[j]] = j;
  Matrix out(m.field(), m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, v] : m.row(r)) out.set(inv[r], inv[c], v);
  return out;
}

}  // namespace

SymSeqObject dual_sequence(const SymSeqObject& x) {
  SymSeqObject out(x.field(), x.window());
  for (const auto& [n, c] : x.arities()) {
    std::vector<std::size_t> p = dual_order(c);
    Component d;
    for (std::size_t j : p) {
      d.labels.push_back(dual_label(c.labels[j]));
      d.degrees.push_back(-c.degrees[j]);
    }
    for (const Matrix& t : c.transpositions) d.transpositions.push_back(permute_basis(t.transpose(), p));
    out.set_arity(n, std::move(d));
  }
  return out;
}

Cooperad dual_cooperad(const Operad& o) {
  Cooperad c;
  c.name = "co" + o.name();
  c.seq = dual_sequence(o.seq());
  std::map<int, std::vector<std::size_t>> inv;
  for (const auto& [n, comp] : o.seq().arities()) {
    std::vector<std::size_t> p = dual_order(comp);
    inv[n].resize(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) inv[n][p[j]] = j;
  }
  c.counit = inv[1][o.unit()];
  int N = o.max_arity();
  const Field& f = o.field();
  for (int m = 1; m <= N; ++m)
    for (int n = 1; m + n - 1 <= N; ++n)
      for (int i = 0; i < m; ++i) {
        if (!o.has_partial(m, i, n)) continue;
        std::size_t dm = o.dim(m), dn = o.dim(n), dt = o.dim(m + n - 1);
        Matrix delta(f, dm * dn, dt);
        for (std::size_t a = 0; a < dm; ++a)
          for (std::size_t b = 0; b < dn; ++b)
            for (const auto& [t, v] : o.partial(m, a, i, n, b))
              delta.set(inv[m][a] * dn + inv[n][b], inv[m + n - 1][t], v);
        c.cocompositions[{m, i, n}] = std::move(delta);
      }
  return c;
}

Operad dual_operad(const Cooperad& c) {
  SymSeqObject s = dual_sequence(c.seq);
  std::map<int, std::vector<std::size_t>> inv;
  for (const auto& [n, comp] : c.seq.arities()) {
    std::vector<std::size_t> p = dual_order(comp);
    inv[n].resize(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) inv[n][p[j]] = j;
  }
  std::string name = c.name.rfind("co", 0) == 0 ? c.name.substr(2) : "dual_" + c.name;
  Operad o(name, s, inv[1][c.counit]);
  for (const auto& [key, delta] : c.cocompositions) {
    auto [m, i, n] = key;
    std::size_t dm = s.dim(m), dn = s.dim(n);
    std::vector<SparseVec> table(dm * dn);
    for (std::size_t r = 0; r < delta.rows(); ++r) {
      std::size_t a = r / dn, b = r % dn;
      for (const auto& [t, v] : delta.row(r)) table[inv[m][a] * dn + inv[n][b]].emplace_back(inv[m + n - 1][t], v);
    }
    o.set_partial(m, i, n, std::move(table));
  }
  return o;
}

// ---------------------------------------------------------------------------
// Module structures

std::size_t right_module_structure_dim(const SymSeqObject& x, const Operad& o) {
  const Field& f = o.field();
  int N = std::min(x.window().max_arity, o.max_arity());
  struct Block {
    int m, i, k;
    std::size_t offset;
  };
  std::vector<Block> blocks;
  std::map<std::tuple<int, int, int>, std::size_t> where;
  std::size_t unknowns = 0;
  for (int m = 1; m <= N; ++m)
    for (int k = 1; m + k - 1 <= N; ++k) {
      if (!x.dim(m) || !o.dim(k) || !x.dim(m + k - 1)) continue;
      for (int i = 0; i < m; ++i) {
        where[{m, i, k}] = blocks.size();
        blocks.push_back({m, i, k, unknowns});
        unknowns += x.dim(m) * o.dim(k) * x.dim(m + k - 1);
      }
    }
  if (unknowns == 0) return 0;
  // Unknown (a, b, t) of block B: coefficient of target t in delta(x_a o_i o_b).
  auto var = [&](const Block& B, std::size_t a, std::size_t b, std::size_t t) {
    return B.offset + (a * o.dim(B.k) + b) * x.dim(B.m + B.k - 1) + t;
  };
  std::vector<SparseVec> rows;
  for (const Block& B : blocks) {
    std::size_t dt = x.dim(B.m + B.k - 1);
    if (B.k == 1)
      for (std::size_t a = 0; a < x.dim(B.m); ++a)
        for (std::size_t t = 0; t < dt; ++t) rows.push_back({{var(B, a, o.unit(), t), Scalar(1)}});
    // delta(x, tau o) = tau' delta(x, o)
    for (int s = 0; s + 1 < B.k; ++s) {
      Perm tau = perm::transposition(B.k, s);
      Matrix act_t = x.action(B.m + B.k - 1, right_block_perm(B.m, B.i, tau));
      Matrix act_o = o.seq().action(B.k, tau);
      for (std::size_t a = 0; a < x.dim(B.m); ++a)
        for (std::size_t b = 0; b < o.dim(B.k); ++b)
          for (std::size_t t = 0; t < dt; ++t) {
            std::map<std::size_t, Scalar> row;
            for (std::size_t b2 = 0; b2 < o.dim(B.k); ++b2) {
              Scalar c = act_o.at(b2, b);
              if (c != 0) row[var(B, a, b2, t)] = f.add(row[var(B, a, b2, t)], c);
            }
            for (std::size_t t2 = 0; t2 < dt; ++t2) {
              Scalar c = act_t.at(t, t2);
              if (c != 0) row[var(B, a, b, t2)] = f.sub(row[var(B, a, b, t2)], c);
            }
            SparseVec r;
            for (auto& [k, v] : row)
              if (v != 0) r.emplace_back(k, v);
            if (!r.empty()) rows.push_back(std::move(r));
          }
    }
    // delta_i(sigma x, o) = sigma' delta_{sigma^-1(i)}(x, o)
    for (int s = 0; s + 1 < B.m; ++s) {
      Perm sigma = perm::transposition(B.m, s);
      int ip = perm::inverse(sigma)[static_cast<std::size_t>(B.i)];
      const Block& B2 = blocks[where.at({B.m, ip, B.k})];
      Matrix act_x = x.action(B.m, sigma);
      Matrix act_t = x.action(B.m + B.k - 1, left_block_perm(sigma, B.i, B.k));
      for (std::size_t a = 0; a < x.dim(B.m); ++a)
        for (std::size_t b = 0; b < o.dim(B.k); ++b)
          for (std::size_t t = 0; t < dt; ++t) {
            std::map<std::size_t, Scalar> row;
            for (std::size_t a2 = 0; a2 < x.dim(B.m); ++a2) {
              Scalar c = act_x.at(a2, a);
              if (c != 0) row[var(B, a2, b, t)] = f.add(row[var(B, a2, b, t)], c);
            }
            for (std::size_t t2 = 0; t2 < dt; ++t2) {
              Scalar c = act_t.at(t, t2);
              if (c != 0) row[var(B2, a, b, t2)] = f.sub(row[var(B2, a, b, t2)], c);
            }
            SparseVec r;
            for (auto& [k, v] : row)
              if (v != 0) r.emplace_back(k, v);
            if (!r.empty()) rows.push_back(std::move(r));
          }
    }
  }
  RowReducer red(f, unknowns);
  for (auto& r : rows) red.insert(std::move(r));
  return unknowns - red.rank();
}

bool same_characters(const SymSeqObject& a, const SymSeqObject& b, int n) {
  if (a.dim(n) != b.dim(n)) return false;
  return a.character(n) == b.character(n);
}

}  // namespace opkit
