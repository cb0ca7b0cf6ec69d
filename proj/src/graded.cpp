#include "opkit/graded.hpp"

#include <algorithm>
#include <set>

namespace opkit {

void Window::validate() const {
  if (max_arity < 1) throw ValidationError("window.maxArity must be >= 1");
  if (min_deg > max_deg) throw ValidationError("window.minDeg must be <= window.maxDeg");
}

std::size_t GradedSpace::dim(int d) const {
  auto it = degrees.find(d);
  return it == degrees.end() ? 0 : it->second.size();
}

std::size_t GradedSpace::total_dim() const {
  std::size_t n = 0;
  for (const auto& [d, b] : degrees) n += b.size();
  return n;
}

std::map<int, std::size_t> GradedSpace::dims() const {
  std::map<int, std::size_t> out;
  for (const auto& [d, b] : degrees)
    if (!b.empty()) out[d] = b.size();
  return out;
}

void GradedSpace::validate() const {
  for (const auto& [d, b] : degrees) {
    std::set<std::string> seen(b.begin(), b.end());
    if (seen.size() != b.size()) throw ValidationError("graded space: duplicate label in degree " + std::to_string(d));
  }
}

ChainComplex::ChainComplex(Field field, GradedSpace space, std::map<int, Matrix> differential)
    : field_(field), space_(std::move(space)) {
  space_.validate();
  for (auto& [n, m] : differential) set_d(n, std::move(m));
}

ChainComplex ChainComplex::concentrated(Field field, int degree, std::size_t dim, const std::string& prefix) {
  GradedSpace s;
  auto& b = s.degrees[degree];
  for (std::size_t i = 0; i < dim; ++i) b.push_back(prefix + std::to_string(i));
  return ChainComplex(field, std::move(s));
}

int ChainComplex::min_degree() const {
  for (const auto& [d, b] : space_.degrees)
    if (!b.empty()) return d;
  return 0;
}

int ChainComplex::max_degree() const {
  for (auto it = space_.degrees.rbegin(); it != space_.degrees.rend(); ++it)
    if (!it->second.empty()) return it->first;
  return 0;
}

Matrix ChainComplex::d(int n) const {
  auto it = diff_.find(n);
  if (it != diff_.end()) return it->second;
  return Matrix(field_, dim(n - 1), dim(n));
}

void ChainComplex::set_d(int n, Matrix m) {
  if (!(m.field() == field_)) throw ValidationError("chain complex: differential over a different field");
  if (m.rows() != dim(n - 1) || m.cols() != dim(n))
    throw ValidationError("chain complex: d_" + std::to_string(n) + " has shape " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " + std::to_string(dim(n - 1)) + "x" +
                          std::to_string(dim(n)));
  if (m.is_zero())
    diff_.erase(n);
  else
    diff_[n] = std::move(m);
}

bool ChainComplex::d_squared_zero() const {
  for (const auto& [n, m] : diff_) {
    auto it = diff_.find(n - 1);
    if (it != diff_.end() && !(it->second * m).is_zero()) return false;
  }
  return true;
}

void ChainComplex::check_d_squared() const {
  for (const auto& [n, m] : diff_) {
    auto it = diff_.find(n - 1);
    if (it != diff_.end() && !(it->second * m).is_zero())
      throw AxiomError("chain complex: d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + " != 0");
  }
}

bool operator==(const ChainComplex& a, const ChainComplex& b) {
  if (!(a.field_ == b.field_) || a.space_.dims() != b.space_.dims()) return false;
  for (const auto& [d, basis] : a.space_.degrees)
    if (!basis.empty() && basis != b.space_.degrees.at(d)) return false;
  return a.diff_ == b.diff_;
}

std::map<int, std::size_t> Homology::dims() const {
  std::map<int, std::size_t> out;
  for (const auto& [d, h] : degrees)
    if (h.reliable && h.dim) out[d] = h.dim;
  return out;
}

std::vector<int> Homology::unreliable() const {
  std::vector<int> out;
  for (const auto& [d, h] : degrees)
    if (!h.reliable) out.push_back(d);
  return out;
}

std::size_t Homology::total_dim() const {
  std::size_t n = 0;
  for (const auto& [d, k] : dims()) n += k;
  return n;
}

GradedSpace Homology::as_space() const {
  GradedSpace s;
  for (const auto& [d, h] : degrees) {
    if (!h.reliable || h.dim == 0) continue;
    auto& b = s.degrees[d];
    for (std::size_t k = 0; k < h.dim; ++k) b.push_back("h" + std::to_string(d) + "_" + std::to_string(k));
  }
  return s;
}

Homology homology(const ChainComplex& c, const Window& w, bool with_representatives) {
  w.validate();
  c.check_d_squared();
  const Field& f = c.field();
  std::map<int, std::size_t> rank_cache;
  auto rank_of = [&](int n) {
    auto it = rank_cache.find(n);
    if (it != rank_cache.end()) return it->second;
    std::size_t r = (c.dim(n) && c.dim(n - 1)) ? rank(c.d(n)) : 0;
    rank_cache[n] = r;
    return r;
  };
  Homology out;
  for (int n = w.min_deg; n <= w.max_deg; ++n) {
    std::size_t dim = c.dim(n);
    if (dim == 0) continue;
    HomologyDegree h;
    h.degree = n;
    bool below = (n == w.min_deg && c.dim(n - 1) > 0);
    bool above = (n == w.max_deg && c.dim(n + 1) > 0);
    h.reliable = !(below || above);
    h.cycles = dim - rank_of(n);
    h.boundaries = rank_of(n + 1);
    if (!with_representatives || h.cycles == h.boundaries) {
      h.representatives = Matrix(f, dim, 0);
    } else {
      Matrix z = c.dim(n - 1) ? kernel(c.d(n)) : Matrix::identity(f, dim);
      Matrix bt = c.d(n + 1).transpose();
      RowReducer rr(f, dim);
      for (std::size_t j = 0; j < bt.rows(); ++j) rr.insert(bt.row(j));
      h.boundaries = rr.rank();
      rank_cache[n + 1] = h.boundaries;
      h.cycles = z.cols();
      Matrix zt = z.transpose();
      std::vector<SparseVec> reps;
      for (std::size_t j = 0; j < zt.rows(); ++j)
        if (rr.insert(zt.row(j))) reps.push_back(zt.row(j));
      h.representatives = Matrix::from_columns(f, dim, reps);
    }
    h.dim = h.cycles - h.boundaries;
    out.degrees[n] = std::move(h);
  }
  return out;
}

Homology homology(const ChainComplex& c, bool with_representatives) {
  if (c.empty()) return {};
  Window w;
  w.min_deg = c.min_degree();
  w.max_deg = c.max_degree();
  return homology(c, w, with_representatives);
}

namespace {
Matrix boundary_basis(const ChainComplex& c, int n) { return image(c.d(n + 1)); }
}  // namespace

HomologyProjector::HomologyProjector(const ChainComplex& c, const HomologyDegree& h)
    : field_(c.field()), boundary_rank_(h.boundaries), dim_(h.dim) {
  if (h.representatives.cols() != h.dim) throw ValidationError("homology projector: representatives were not computed");
  if (h.boundaries == 0 && h.dim > 0) {
    RowReducer rr(field_, c.dim(h.degree));
    Matrix rt = h.representatives.transpose();
    for (std::size_t k = 0; k < rt.rows(); ++k) rr.insert(rt.row(k));
    pivots_ = rr.pivot_columns();
    std::vector<SparseVec> cols;
    for (std::size_t k = 0; k < rt.rows(); ++k) {
      SparseVec v;
      for (const auto& [i, x] : rt.row(k)) {
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), i);
        if (it != pivots_.end() && *it == i) v.emplace_back(static_cast<std::size_t>(it - pivots_.begin()), x);
      }
      cols.push_back(std::move(v));
    }
    solver_ = std::make_unique<Solver>(Matrix::from_columns(field_, pivots_.size(), cols));
    dt_ = c.d(h.degree).transpose();
    restricted_ = true;
  } else {
    solver_ = std::make_unique<Solver>(boundary_basis(c, h.degree).hstack(h.representatives));
  }
}

SparseVec HomologyProjector::coordinates(const SparseVec& z) const {
  SparseVec x;
  if (restricted_) {
    if (!dt_.combine_rows(z).empty()) throw AxiomError("homology projector: vector is not a cycle");
    SparseVec zp;
    for (const auto& [i, v] : z) {
      auto it = std::lower_bound(pivots_.begin(), pivots_.end(), i);
      if (it != pivots_.end() && *it == i) zp.emplace_back(static_cast<std::size_t>(it - pivots_.begin()), v);
    }
    if (!solver_->solve(zp, x)) throw AxiomError("homology projector: vector is not a cycle");
    return x;
  }
  if (!solver_->solve(z, x)) throw AxiomError("homology projector: vector is not a cycle");
  SparseVec out;
  for (const auto& [i, v] : x)
    if (i >= boundary_rank_) out.emplace_back(i - boundary_rank_, v);
  return out;
}

HomologyRetraction::HomologyRetraction(const ChainComplex& c, const HomologyDegree& h)
    : boundary_rank_(h.boundaries), dim_(h.dim) {
  if (h.representatives.cols() != h.dim) throw ValidationError("homology retraction: representatives were not computed");
  Matrix br = boundary_basis(c, h.degree).hstack(h.representatives);
  solver_ = std::make_shared<Solver>(br.hstack(quotient_basis(br)));
}

SparseVec HomologyRetraction::apply(const SparseVec& v) const {
  SparseVec x;
  if (!solver_->solve(v, x)) throw AxiomError("homology retraction: basis completion failed");
  SparseVec out;
  for (const auto& [i, c] : x)
    if (i >= boundary_rank_ && i < boundary_rank_ + dim_) out.emplace_back(i - boundary_rank_, c);
  return out;
}

ChainComplex shift(const ChainComplex& c, int m) {
  GradedSpace s;
  for (const auto& [d, b] : c.space().degrees)
    if (!b.empty()) s.degrees[d + m] = b;
  ChainComplex out(c.field(), std::move(s));
  Scalar sign = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
  for (const auto& [d, b] : c.space().degrees)
    if (c.dim(d) && c.dim(d - 1)) out.set_d(d + m, c.d(d).scaled(sign));
  return out;
}

ChainComplex tensor(const ChainComplex& a, const ChainComplex& b, const Window& w) {
  if (!(a.field() == b.field())) throw ValidationError("tensor: field mismatch");
  const Field& f = a.field();
  // offsets[n][i] = position of the block C_i (x) D_{n-i} inside degree n.
  std::map<int, std::map<int, std::size_t>> offsets;
  GradedSpace s;
  for (int n = w.min_deg; n <= w.max_deg; ++n) {
    std::vector<std::string> basis;
    for (const auto& [i, ba] : a.space().degrees) {
      int j = n - i;
      std::size_t db = b.dim(j);
      if (ba.empty() || db == 0) continue;
      offsets[n][i] = basis.size();
      for (const auto& x : ba)
        for (const auto& y : b.space().degrees.at(j)) basis.push_back("(" + x + "," + y + ")");
    }
    if (!basis.empty()) s.degrees[n] = std::move(basis);
  }
  ChainComplex out(f, s);
  for (const auto& [n, blocks] : offsets) {
    if (!offsets.count(n - 1)) continue;
    const auto& lower = offsets.at(n - 1);
    Matrix dn(f, out.dim(n - 1), out.dim(n));
    for (const auto& [i, off] : blocks) {
      int j = n - i;
      std::size_t da = a.dim(i), db = b.dim(j);
      // dx (x) y
      if (lower.count(i - 1)) {
        Matrix ai = a.d(i);
        std::size_t loff = lower.at(i - 1);
        for (std::size_t r = 0; r < ai.rows(); ++r)
          for (const auto& [col, v] : ai.row(r))
            for (std::size_t y = 0; y < db; ++y) dn.add_to(loff + r * db + y, off + col * db + y, v);
      }
      // (-1)^i x (x) dy
      if (lower.count(i)) {
        Matrix bj = b.d(j);
        std::size_t loff = lower.at(i);
        std::size_t db1 = b.dim(j - 1);
        Scalar sign = (i % 2 == 0) ? Scalar(1) : Scalar(-1);
        for (std::size_t x = 0; x < da; ++x)
          for (std::size_t r = 0; r < bj.rows(); ++r)
            for (const auto& [col, v] : bj.row(r)) dn.add_to(loff + x * db1 + r, off + x * db + col, sign * v);
      }
    }
    out.set_d(n, std::move(dn));
  }
  out.check_d_squared();
  return out;
}

std::string dual_label(const std::string& label) {
  if (!label.empty() && label.back() == '*') return label.substr(0, label.size() - 1);
  return label + "*";
}

ChainComplex dualize(const ChainComplex& c) {
  GradedSpace s;
  for (const auto& [d, b] : c.space().degrees) {
    if (b.empty()) continue;
    auto& out = s.degrees[-d];
    for (const auto& l : b) out.push_back(dual_label(l));
  }
  ChainComplex out(c.field(), std::move(s));
  // (C^v)_n -> (C^v)_{n-1} is the transpose of d_{1-n} : C_{1-n} -> C_{-n}.
  for (const auto& [d, b] : c.space().degrees)
    if (c.dim(d) && c.dim(d - 1)) out.set_d(1 - d, c.d(d).transpose());
  return out;
}

long euler_characteristic(const std::map<int, std::size_t>& dims) {
  long chi = 0;
  for (const auto& [d, n] : dims) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(n);
  return chi;
}

}  // namespace opkit
