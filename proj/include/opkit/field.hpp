#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opkit/error.hpp"

namespace opkit {

using Scalar = mpq_class;

/// Ground field: either Q (arbitrary precision) or F_p for a prime p.
///
/// Scalars are stored as mpq_class in both cases; over F_p the canonical
/// representative is an integer in [0, p).
class Field {
 public:
  Field() = default;  // Q
  static Field rationals() { return Field{}; }
  static Field prime(std::uint32_t p);

  bool is_rational() const { return p_ == 0; }
  std::uint32_t characteristic() const { return p_; }
  std::string name() const;

  Scalar normalize(const Scalar& x) const;
  Scalar from_int(long v) const { return normalize(Scalar(v)); }
  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  /// Parses "Q", "q", "F2", "f3", "2", ... into a field.
  static Field parse(const std::string& text);

  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }

 private:
  explicit Field(std::uint32_t p) : p_(p) {}
  std::uint32_t p_ = 0;
};

bool is_prime(std::uint64_t n);

/// Sparse vector: strictly increasing indices, no explicit zeros.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

/// Exact matrix over a Field. Storage is row-sparse; every entry is kept in
/// canonical form for its field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field field, std::size_t rows, std::size_t cols);

  static Matrix identity(Field field, std::size_t n);
  static Matrix from_ints(Field field, const std::vector<std::vector<long>>& rows);
  static Matrix from_rows(Field field, std::size_t cols, std::vector<SparseVec> rows);
  /// Builds a matrix whose columns are the given sparse vectors.
  static Matrix from_columns(Field field, std::size_t rows, const std::vector<SparseVec>& cols);

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Scalar& v);
  void add_to(std::size_t i, std::size_t j, const Scalar& v);
  const SparseVec& row(std::size_t i) const { return data_[i]; }
  SparseVec column(std::size_t j) const;
  std::size_t nonzeros() const;

  bool is_zero() const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(const Scalar& c) const;
  SparseVec apply(const SparseVec& v) const;
  /// sum_j v_j * row(j), i.e. the transpose applied to v; cost follows the
  /// rows touched.
  SparseVec combine_rows(const SparseVec& v) const;

  /// Kronecker product (row index = i * rhs.rows + k).
  Matrix kron(const Matrix& rhs) const;
  Matrix hstack(const Matrix& rhs) const;
  Matrix vstack(const Matrix& rhs) const;
  Matrix select_columns(const std::vector<std::size_t>& idx) const;

  std::vector<std::vector<std::string>> to_strings() const;
  std::string to_string() const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  void check_same_shape(const Matrix& rhs, const char* op) const;

  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseVec> data_;
};

// Sparse-vector helpers (all results canonical for `f`).
SparseVec sv_axpy(const Field& f, const SparseVec& y, const Scalar& a, const SparseVec& x);
SparseVec sv_scale(const Field& f, const SparseVec& x, const Scalar& a);
SparseVec sv_normalize(const Field& f, SparseVec x);  // sorts, merges, drops zeros

/// Incremental row reduction. Rows are kept in semi-echelon form keyed by
/// their leading column; `finalize()` back-substitutes to full RREF.
class RowReducer {
 public:
  RowReducer(Field field, std::size_t cols) : field_(std::move(field)), cols_(cols), pivot_of_(cols, npos) {}

  /// Reduces `v` and keeps the remainder if nonzero. Returns true if it
  /// increased the rank.
  bool insert(SparseVec v);
  /// Remainder of `v` modulo the current row space.
  SparseVec reduce(SparseVec v) const;
  /// Like reduce, but also returns the coefficients c with v = remainder + sum c_k row_k.
  SparseVec reduce(SparseVec v, SparseVec& coeffs) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  void finalize();
  bool finalized() const { return finalized_; }

  std::size_t rank() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<SparseVec>& rows() const { return rows_; }
  std::vector<std::size_t> pivot_columns() const;  // sorted
  std::vector<std::size_t> free_columns() const;   // sorted
  bool is_pivot(std::size_t c) const { return pivot_of_[c] != npos; }
  const SparseVec& pivot_row(std::size_t c) const { return rows_[pivot_of_[c]]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Field field_;
  std::size_t cols_;
  std::vector<std::size_t> pivot_of_;
  std::vector<SparseVec> rows_;
  bool finalized_ = false;
};

enum class SolveMode { kernel, image, rank, quotient_basis };

struct LinearSolution {
  Matrix basis;       // basis vectors as columns (empty for rank mode)
  std::size_t rank = 0;
};

/// Kernel, image, rank, or a basis of standard vectors completing the image
/// (quotient_basis) for M viewed as a map K^cols -> K^rows.
LinearSolution solve_linear(const Matrix& m, SolveMode mode);

std::size_t rank(const Matrix& m);
Matrix kernel(const Matrix& m);
Matrix image(const Matrix& m);
Matrix quotient_basis(const Matrix& m);

/// Solves M x = b. Returns false when b is not in the image; x is then untouched.
bool solve(const Matrix& m, const SparseVec& b, SparseVec& x);

/// Reusable solver for M x = b over many right-hand sides.
class Solver {
 public:
  explicit Solver(const Matrix& m);
  bool solve(const SparseVec& b, SparseVec& x) const;
  std::size_t rank() const { return reducer_.rank(); }

 private:
  Field field_;
  std::size_t rows_;
  RowReducer reducer_;
  std::vector<SparseVec> combos_;  // reducer row k == sum combos_[k][j] * column j
};

}  // namespace opkit
