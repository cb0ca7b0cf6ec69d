#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "opkit/field.hpp"

namespace opkit {

/// Computation bounds. Every construction in the engine stays inside one.
struct Window {
  int max_arity = 4;
  int min_deg = -16;
  int max_deg = 16;

  void validate() const;
  bool contains_degree(int d) const { return min_deg <= d && d <= max_deg; }
};

/// Finite-dimensional graded vector space with labeled bases.
struct GradedSpace {
  std::map<int, std::vector<std::string>> degrees;

  std::size_t dim(int d) const;
  std::size_t total_dim() const;
  std::map<int, std::size_t> dims() const;  // nonzero degrees only
  void validate() const;                    // labels unique within a degree
};

/// Chain complex with homological grading: d_n maps degree n to degree n-1.
/// Missing differentials are zero.
class ChainComplex {
 public:
  ChainComplex() = default;
  ChainComplex(Field field, GradedSpace space, std::map<int, Matrix> differential = {});

  static ChainComplex concentrated(Field field, int degree, std::size_t dim, const std::string& prefix = "e");

  const Field& field() const { return field_; }
  const GradedSpace& space() const { return space_; }
  std::size_t dim(int d) const { return space_.dim(d); }
  int min_degree() const;  // only meaningful when nonempty
  int max_degree() const;
  bool empty() const { return space_.total_dim() == 0; }

  /// d_n : C_n -> C_{n-1}, a dim(n-1) x dim(n) matrix.
  Matrix d(int n) const;
  void set_d(int n, Matrix m);

  /// Throws AxiomError when some d_{n-1} d_n is nonzero.
  void check_d_squared() const;
  bool d_squared_zero() const;

  friend bool operator==(const ChainComplex& a, const ChainComplex& b);

 private:
  Field field_;
  GradedSpace space_;
  std::map<int, Matrix> diff_;
};

struct HomologyDegree {
  int degree = 0;
  std::size_t dim = 0;
  bool reliable = true;
  std::size_t cycles = 0;      // dim ker d_n
  std::size_t boundaries = 0;  // rank d_{n+1}
  Matrix representatives;      // columns in C_n; empty when only dims were requested
};

struct Homology {
  std::map<int, HomologyDegree> degrees;

  /// Dimensions of reliable, nonzero degrees.
  std::map<int, std::size_t> dims() const;
  std::vector<int> unreliable() const;
  std::size_t total_dim() const;
  /// Representatives packaged as a graded space (labels "h<degree>_<k>").
  GradedSpace as_space() const;
};

/// H_n = ker d_n / im d_{n+1} for each n in the window. A degree on the window
/// edge is flagged unreliable when the complex has cells just outside.
Homology homology(const ChainComplex& c, const Window& w, bool with_representatives = true);
/// Homology over every degree the complex occupies.
Homology homology(const ChainComplex& c, bool with_representatives = true);

/// Expresses cycles in degree n in terms of chosen homology representatives.
class HomologyProjector {
 public:
  HomologyProjector(const ChainComplex& c, const HomologyDegree& h);
  /// Coordinates of the class of cycle z. Throws AxiomError when z is not a cycle.
  SparseVec coordinates(const SparseVec& z) const;
  std::size_t dim() const { return dim_; }

 private:
  Field field_;
  std::size_t boundary_rank_ = 0;
  std::size_t dim_ = 0;
  // Without boundaries: representatives restricted to pivot coordinates,
  // and the differential for the cycle test.
  bool restricted_ = false;
  std::vector<std::size_t> pivots_;
  Matrix dt_;
  std::unique_ptr<Solver> solver_;
};

/// A linear map C_n -> H_n that vanishes on boundaries and sends each chosen
/// representative to its basis vector. Being zero on boundaries, it is a chain
/// map onto homology with zero differential.
class HomologyRetraction {
 public:
  HomologyRetraction() = default;
  HomologyRetraction(const ChainComplex& c, const HomologyDegree& h);
  SparseVec apply(const SparseVec& v) const;
  std::size_t dim() const { return dim_; }

 private:
  std::size_t boundary_rank_ = 0;
  std::size_t dim_ = 0;
  std::shared_ptr<Solver> solver_;
};

ChainComplex shift(const ChainComplex& c, int m);
ChainComplex tensor(const ChainComplex& a, const ChainComplex& b, const Window& w);
ChainComplex dualize(const ChainComplex& c);
/// "a" -> "a*", "a*" -> "a"; keeps dualize an involution on labels.
std::string dual_label(const std::string& label);

/// Euler characteristic sum (-1)^n dim C_n.
long euler_characteristic(const std::map<int, std::size_t>& dims);

}  // namespace opkit
