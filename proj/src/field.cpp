#include "opkit/field.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace opkit {

namespace {

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1, x = b % m;
  while (e) {
    if (e & 1) r = (r * x) % m;
    x = (x * x) % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t residue(const mpz_class& z, std::uint32_t p) {
  mpz_class r = z % p;
  if (r < 0) r += p;
  return r.get_ui();
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) throw ValidationError("field: " + std::to_string(p) + " is not prime");
  return Field(p);
}

std::string Field::name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

Field Field::parse(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "q" || t == "0" || t == "rationals") return rationals();
  if (!t.empty() && t[0] == 'f') t = t.substr(1);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ValidationError("field: cannot parse '" + text + "'");
  return prime(static_cast<std::uint32_t>(std::stoul(t)));
}

Scalar Field::normalize(const Scalar& x) const {
  if (p_ == 0) {
    Scalar y = x;
    y.canonicalize();
    return y;
  }
  std::uint64_t num = residue(x.get_num(), p_);
  std::uint64_t den = residue(x.get_den(), p_);
  if (den == 0) throw ValidationError("field: denominator divisible by characteristic");
  unsigned __int128 v = static_cast<unsigned __int128>(num) * mod_pow(den, p_ - 2, p_) % p_;
  return Scalar(static_cast<unsigned long>(v));
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  if (p_ == 0) return a + b;
  std::uint64_t v = (a.get_num().get_ui() + b.get_num().get_ui()) % p_;
  return Scalar(static_cast<unsigned long>(v));
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  if (p_ == 0) return a - b;
  std::uint64_t v = (a.get_num().get_ui() + p_ - b.get_num().get_ui()) % p_;
  return Scalar(static_cast<unsigned long>(v));
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  if (p_ == 0) return a * b;
  unsigned __int128 v = static_cast<unsigned __int128>(a.get_num().get_ui()) * b.get_num().get_ui() % p_;
  return Scalar(static_cast<unsigned long>(v));
}

Scalar Field::neg(const Scalar& a) const {
  if (p_ == 0) return -a;
  std::uint64_t v = a.get_num().get_ui();
  return Scalar(static_cast<unsigned long>(v == 0 ? 0 : p_ - v));
}

Scalar Field::inv(const Scalar& a) const {
  if (sgn(a) == 0) throw std::domain_error("field: division by zero");
  if (p_ == 0) return 1 / a;
  return Scalar(static_cast<unsigned long>(mod_pow(a.get_num().get_ui(), p_ - 2, p_)));
}

// ---------------------------------------------------------------------------
// Sparse vectors

SparseVec sv_normalize(const Field& f, SparseVec x) {
  std::sort(x.begin(), x.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.reserve(x.size());
  for (auto& [i, v] : x) {
    Scalar c = f.normalize(v);
    if (!out.empty() && out.back().first == i) {
      out.back().second = f.add(out.back().second, c);
      if (sgn(out.back().second) == 0) out.pop_back();
    } else if (sgn(c) != 0) {
      out.emplace_back(i, std::move(c));
    }
  }
  return out;
}

SparseVec sv_scale(const Field& f, const SparseVec& x, const Scalar& a0) {
  SparseVec out;
  Scalar a = f.normalize(a0);
  if (sgn(a) == 0) return out;
  out.reserve(x.size());
  for (const auto& [i, v] : x) out.emplace_back(i, f.mul(v, a));
  return out;
}

SparseVec sv_axpy(const Field& f, const SparseVec& y, const Scalar& a0, const SparseVec& x) {
  Scalar a = f.normalize(a0);
  if (sgn(a) == 0) return y;
  SparseVec out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, f.mul(a, x[j].second));
      ++j;
    } else {
      Scalar s = f.add(y[i].second, f.mul(a, x[j].second));
      if (sgn(s) != 0) out.emplace_back(y[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows) {}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(i, Scalar(1));
  return m;
}

Matrix Matrix::from_ints(Field field, const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ValidationError("matrix: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, Scalar(rows[i][j]));
  }
  return m;
}

Matrix Matrix::from_rows(Field field, std::size_t cols, std::vector<SparseVec> rows) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.data_[i] = sv_normalize(field, std::move(rows[i]));
    if (!m.data_[i].empty() && m.data_[i].back().first >= cols) throw ValidationError("matrix: column index out of range");
  }
  return m;
}

Matrix Matrix::from_columns(Field field, std::size_t rows, const std::vector<SparseVec>& cols) {
  Matrix m(field, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, v] : cols[j]) {
      if (i >= rows) throw ValidationError("matrix: row index out of range");
      m.data_[i].emplace_back(j, field.normalize(v));
    }
  for (auto& r : m.data_) r = sv_normalize(field, std::move(r));
  return m;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const {
  const auto& r = data_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) return it->second;
  return Scalar(0);
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix: index out of range");
  auto& r = data_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t c) { return e.first < c; });
  Scalar c = field_.normalize(v);
  if (it != r.end() && it->first == j) {
    if (sgn(c) == 0)
      r.erase(it);
    else
      it->second = std::move(c);
  } else if (sgn(c) != 0) {
    r.insert(it, {j, std::move(c)});
  }
}

void Matrix::add_to(std::size_t i, std::size_t j, const Scalar& v) { set(i, j, field_.add(at(i, j), field_.normalize(v))); }

SparseVec Matrix::column(std::size_t j) const {
  SparseVec out;
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar v = at(i, j);
    if (sgn(v) != 0) out.emplace_back(i, std::move(v));
  }
  return out;
}

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const SparseVec& r) { return r.empty(); });
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) t.data_[j].emplace_back(i, v);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw ValidationError("matrix: cannot multiply " + std::to_string(rows_) + "x" + std::to_string(cols_) + " by " +
                          std::to_string(rhs.rows_) + "x" + std::to_string(rhs.cols_));
  if (!(field_ == rhs.field_)) throw ValidationError("matrix: field mismatch");
  Matrix out(field_, rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    SparseVec acc;
    for (const auto& [k, v] : data_[i]) acc = sv_axpy(field_, acc, v, rhs.data_[k]);
    out.data_[i] = std::move(acc);
  }
  return out;
}

void Matrix::check_same_shape(const Matrix& rhs, const char* op) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ValidationError(std::string("matrix: shape mismatch in ") + op);
  if (!(field_ == rhs.field_)) throw ValidationError("matrix: field mismatch");
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  check_same_shape(rhs, "+");
  Matrix out(field_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = sv_axpy(field_, data_[i], Scalar(1), rhs.data_[i]);
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  check_same_shape(rhs, "-");
  Matrix out(field_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = sv_axpy(field_, data_[i], field_.neg(Scalar(1)), rhs.data_[i]);
  return out;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix out(field_, rows_, cols_);
  Scalar cc = field_.normalize(c);
  for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = sv_scale(field_, data_[i], cc);
  return out;
}

SparseVec Matrix::apply(const SparseVec& v) const {
  SparseVec out;
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar s(0);
    const auto& r = data_[i];
    std::size_t a = 0, b = 0;
    while (a < r.size() && b < v.size()) {
      if (r[a].first < v[b].first)
        ++a;
      else if (v[b].first < r[a].first)
        ++b;
      else {
        s = field_.add(s, field_.mul(r[a].second, v[b].second));
        ++a;
        ++b;
      }
    }
    if (sgn(s) != 0) out.emplace_back(i, std::move(s));
  }
  return out;
}

SparseVec Matrix::combine_rows(const SparseVec& v) const {
  std::vector<std::pair<std::size_t, Scalar>> terms;
  for (const auto& [j, c] : v) {
    if (j >= rows_) throw ValidationError("matrix: combine_rows index out of range");
    for (const auto& [k, x] : data_[j]) terms.emplace_back(k, field_.mul(c, x));
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  for (auto& [k, x] : terms) {
    if (!out.empty() && out.back().first == k)
      out.back().second = field_.add(out.back().second, x);
    else
      out.emplace_back(k, std::move(x));
  }
  std::erase_if(out, [](const auto& e) { return sgn(e.second) == 0; });
  return out;
}

Matrix Matrix::kron(const Matrix& rhs) const {
  Matrix out(field_, rows_ * rhs.rows_, cols_ * rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < rhs.rows_; ++k) {
      auto& r = out.data_[i * rhs.rows_ + k];
      for (const auto& [j, v] : data_[i])
        for (const auto& [l, w] : rhs.data_[k]) r.emplace_back(j * rhs.cols_ + l, field_.mul(v, w));
    }
  return out;
}

Matrix Matrix::hstack(const Matrix& rhs) const {
  if (rows_ != rhs.rows_) throw ValidationError("matrix: hstack row mismatch");
  Matrix out(field_, rows_, cols_ + rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out.data_[i] = data_[i];
    for (const auto& [j, v] : rhs.data_[i]) out.data_[i].emplace_back(j + cols_, v);
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& rhs) const {
  if (cols_ != rhs.cols_) throw ValidationError("matrix: vstack column mismatch");
  Matrix out(field_, rows_ + rhs.rows_, cols_);
  std::copy(data_.begin(), data_.end(), out.data_.begin());
  std::copy(rhs.data_.begin(), rhs.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(rows_));
  return out;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  std::vector<std::size_t> where(cols_, RowReducer::npos);
  for (std::size_t k = 0; k < idx.size(); ++k) where.at(idx[k]) = k;
  Matrix out(field_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& [j, v] : data_[i])
      if (where[j] != RowReducer::npos) out.data_[i].emplace_back(where[j], v);
    std::sort(out.data_[i].begin(), out.data_[i].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return out;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_, "0"));
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) out[i][j] = v.get_str();
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  for (const auto& row : to_strings()) {
    os << '[';
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
    os << "]\n";
  }
  return os.str();
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

// ---------------------------------------------------------------------------
// Row reduction

namespace {

using WorkRow = std::map<std::size_t, Scalar>;

WorkRow to_work(const Field& f, SparseVec v) {
  WorkRow w;
  for (auto& [i, c] : sv_normalize(f, std::move(v))) w.emplace(i, std::move(c));
  return w;
}

// w -= a * row, restricted to columns >= row's leading column.
void subtract_row(const Field& f, WorkRow& w, const Scalar& a, const SparseVec& row) {
  auto hint = w.begin();
  for (const auto& [c, v] : row) {
    hint = w.lower_bound(c);
    Scalar delta = f.neg(f.mul(a, v));
    if (hint != w.end() && hint->first == c) {
      hint->second = f.add(hint->second, delta);
      if (sgn(hint->second) == 0) hint = w.erase(hint);
    } else {
      hint = w.emplace_hint(hint, c, std::move(delta));
    }
  }
}

}  // namespace

SparseVec RowReducer::reduce(SparseVec v) const {
  SparseVec unused;
  return reduce(std::move(v), unused);
}

SparseVec RowReducer::reduce(SparseVec v, SparseVec& coeffs) const {
  WorkRow w = to_work(field_, std::move(v));
  SparseVec cs;
  auto it = w.begin();
  while (it != w.end()) {
    std::size_t c = it->first;
    if (c >= cols_) throw ValidationError("row reducer: index out of range");
    std::size_t r = pivot_of_[c];
    if (r == npos) {
      ++it;
      continue;
    }
    Scalar a = it->second;
    cs.emplace_back(r, a);
    subtract_row(field_, w, a, rows_[r]);
    it = w.upper_bound(c);
  }
  coeffs = sv_normalize(field_, std::move(cs));
  return SparseVec(w.begin(), w.end());
}

bool RowReducer::insert(SparseVec v) {
  SparseVec rem = reduce(std::move(v));
  if (rem.empty()) return false;
  Scalar lead_inv = field_.inv(rem.front().second);
  rem = sv_scale(field_, rem, lead_inv);
  pivot_of_[rem.front().first] = rows_.size();
  rows_.push_back(std::move(rem));
  finalized_ = false;
  return true;
}

void RowReducer::finalize() {
  if (finalized_) return;
  std::vector<std::size_t> order(rows_.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
  for (std::size_t r : order) {
    WorkRow w(rows_[r].begin(), rows_[r].end());
    auto it = std::next(w.begin());
    while (it != w.end()) {
      std::size_t c = it->first;
      std::size_t p = pivot_of_[c];
      if (p == npos) {
        ++it;
        continue;
      }
      Scalar a = it->second;
      subtract_row(field_, w, a, rows_[p]);
      it = w.upper_bound(c);
    }
    rows_[r] = SparseVec(w.begin(), w.end());
  }
  finalized_ = true;
}

std::vector<std::size_t> RowReducer::pivot_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cols_; ++c)
    if (pivot_of_[c] != npos) out.push_back(c);
  return out;
}

std::vector<std::size_t> RowReducer::free_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cols_; ++c)
    if (pivot_of_[c] == npos) out.push_back(c);
  return out;
}

// ---------------------------------------------------------------------------
// Linear solving

LinearSolution solve_linear(const Matrix& m, SolveMode mode) {
  const Field& f = m.field();
  LinearSolution out;
  switch (mode) {
    case SolveMode::rank:
    case SolveMode::kernel: {
      RowReducer rr(f, m.cols());
      for (std::size_t i = 0; i < m.rows(); ++i) rr.insert(m.row(i));
      out.rank = rr.rank();
      if (mode == SolveMode::rank) break;
      rr.finalize();
      std::vector<SparseVec> basis;
      std::vector<std::size_t> free = rr.free_columns();
      std::vector<SparseVec> by_free(m.cols());
      for (std::size_t p : rr.pivot_columns())
        for (const auto& [c, v] : rr.pivot_row(p))
          if (c != p) by_free[c].emplace_back(p, f.neg(v));
      for (std::size_t fc : free) {
        SparseVec v = by_free[fc];
        v.emplace_back(fc, Scalar(1));
        basis.push_back(sv_normalize(f, std::move(v)));
      }
      out.basis = Matrix::from_columns(f, m.cols(), basis);
      break;
    }
    case SolveMode::image: {
      // Column space: keep original columns that raise the rank.
      Matrix t = m.transpose();
      RowReducer rr(f, m.rows());
      std::vector<SparseVec> basis;
      for (std::size_t j = 0; j < t.rows(); ++j)
        if (rr.insert(t.row(j))) basis.push_back(t.row(j));
      out.rank = rr.rank();
      out.basis = Matrix::from_columns(f, m.rows(), basis);
      break;
    }
    case SolveMode::quotient_basis: {
      Matrix t = m.transpose();
      RowReducer rr(f, m.rows());
      for (std::size_t j = 0; j < t.rows(); ++j) rr.insert(t.row(j));
      out.rank = rr.rank();
      std::vector<SparseVec> basis;
      for (std::size_t c : rr.free_columns()) basis.push_back(SparseVec{{c, Scalar(1)}});
      out.basis = Matrix::from_columns(f, m.rows(), basis);
      break;
    }
  }
  return out;
}

std::size_t rank(const Matrix& m) { return solve_linear(m, SolveMode::rank).rank; }
Matrix kernel(const Matrix& m) { return solve_linear(m, SolveMode::kernel).basis; }
Matrix image(const Matrix& m) { return solve_linear(m, SolveMode::image).basis; }
Matrix quotient_basis(const Matrix& m) { return solve_linear(m, SolveMode::quotient_basis).basis; }

Solver::Solver(const Matrix& m) : field_(m.field()), rows_(m.rows()), reducer_(m.field(), m.rows()) {
  const Field& f = field_;
  Matrix t = m.transpose();
  for (std::size_t j = 0; j < t.rows(); ++j) {
    SparseVec cs;
    SparseVec rem = reducer_.reduce(t.row(j), cs);
    if (rem.empty()) continue;
    SparseVec combo{{j, Scalar(1)}};
    for (const auto& [k, c] : cs) combo = sv_axpy(f, combo, f.neg(c), combos_[k]);
    Scalar li = f.inv(rem.front().second);
    reducer_.insert(std::move(rem));
    combos_.push_back(sv_scale(f, combo, li));
  }
}

bool Solver::solve(const SparseVec& b, SparseVec& x) const {
  if (!b.empty() && b.back().first >= rows_)
    throw ValidationError("solve: right-hand side has " + std::to_string(b.back().first + 1) + " rows, matrix has " +
                          std::to_string(rows_));
  SparseVec cs;
  if (!reducer_.reduce(b, cs).empty()) return false;
  SparseVec sol;
  for (const auto& [k, c] : cs) sol = sv_axpy(field_, sol, c, combos_[k]);
  x = std::move(sol);
  return true;
}

bool solve(const Matrix& m, const SparseVec& b, SparseVec& x) { return Solver(m).solve(b, x); }

}  // namespace opkit
