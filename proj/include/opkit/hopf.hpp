#pragma once

#include <map>
#include <string>
#include <vector>

#include "opkit/graded.hpp"

namespace opkit {

/// Connected graded Hopf algebra truncated at degree D. Degree 0 is the
/// ground field with basis {1}. Structure maps are stored degree-wise:
/// product(a, b) is dim(a+b) x (dim(a) * dim(b)), coproduct(a, b) is
/// (dim(a) * dim(b)) x dim(a+b), pair index i * dim(b) + j.
struct HopfPresentation {
  Field field;
  int max_degree = 0;
  GradedSpace space;
  std::map<std::pair<int, int>, Matrix> product;
  std::map<std::pair<int, int>, Matrix> coproduct;
  std::map<int, Matrix> antipode;

  std::size_t dim(int n) const { return space.dim(n); }
  std::vector<std::size_t> dims() const;  // degrees 0..D
  /// Product of basis elements, zero above degree D.
  SparseVec mul(int a, std::size_t i, int b, std::size_t j) const;
  SparseVec mul(int a, const SparseVec& x, int b, const SparseVec& y) const;
  /// Component of the coproduct in degrees (a, n - a), indexed i * dim(n-a) + j.
  SparseVec comul(int a, int n, const SparseVec& x) const;
};

struct HopfCheck {
  std::string axiom;
  int degree = 0;
  bool ok = true;
};

struct HopfReport {
  bool valid = true;
  std::vector<HopfCheck> checks;  // one entry per axiom and degree
  std::vector<std::string> failures;
};

/// Associativity, unit, coassociativity, counit, bialgebra compatibility
/// (Koszul sign on the middle swap), and both antipode identities.
HopfReport check_hopf(const HopfPresentation& h);

/// T(V) truncated at degree D: words in the basis of V, concatenation,
/// generators primitive, antipode reversing words with sign.
HopfPresentation tensor_hopf(const Field& field, const GradedSpace& v, int max_degree);

/// Basis (as columns) of the kernel of the reduced coproduct in degree n.
Matrix primitives(const HopfPresentation& h, int n);
std::vector<std::size_t> primitive_dims(const HopfPresentation& h);  // degrees 0..D

/// [a, b] = ab - (-1)^{|a||b|} ba of primitives is primitive, for all
/// degrees a + b <= D.
bool primitives_closed_under_commutator(const HopfPresentation& h);
/// In characteristic p, x^p is primitive for primitive x of even degree
/// (any degree when p = 2), for p|x| <= D.
bool primitives_closed_under_p_power(const HopfPresentation& h);

/// Graded Lie algebra with a homogeneous basis in degrees >= 1.
struct LiePresentation {
  Field field;
  std::vector<std::string> labels;
  std::vector<int> degrees;
  /// [e_i, e_j] for i <= j; the rest follows from graded antisymmetry.
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> bracket;

  std::size_t dim() const { return labels.size(); }
  SparseVec bracket_of(std::size_t i, std::size_t j) const;
  SparseVec bracket_of(const SparseVec& x, const SparseVec& y) const;
  GradedSpace space() const;
};

struct LieReport {
  bool valid = true;
  std::vector<std::string> failures;
};

/// Degrees, graded antisymmetry of the given pairs, and the graded Jacobi identity.
LieReport check_lie(const LiePresentation& l);

LiePresentation abelian_lie(const Field& field, const GradedSpace& v);
/// x, y in degree k, z in degree 2k, [x, y] = z.
LiePresentation heisenberg_lie(const Field& field, int degree = 2);
/// Lie subalgebra of T(V) generated by V, up to degree D; brackets landing
/// above D are dropped.
LiePresentation free_lie(const Field& field, const GradedSpace& v, int max_degree);

struct Envelope {
  HopfPresentation hopf;
  /// Quotient basis in words of L's basis, per degree.
  std::map<int, std::vector<std::vector<std::size_t>>> basis_words;
  /// Image of each basis element of L in U, per L index.
  std::vector<SparseVec> unit_map;
  /// Dimensions of Sym(L) per degree (PBW count, diagnostic).
  std::vector<std::size_t> pbw_dims;
};

/// U(L) = T(L) / (xy - (-1)^{|x||y|} yx - [x, y]) up to degree D, computed by
/// row reduction of the two-sided ideal. Throws AxiomError when L fails the
/// Lie axioms or the ideal is not a Hopf ideal.
Envelope enveloping(const LiePresentation& l, int max_degree);

struct MilnorMooreDegree {
  int degree = 0;
  std::size_t lie_dim = 0;
  std::size_t primitive_dim = 0;
  bool injective = false;
  bool iso = false;
  bool generated = false;  // U_n spanned by products of primitives
};

struct MilnorMooreReport {
  bool iso = true;
  bool generated_by_primitives = true;
  std::vector<MilnorMooreDegree> degrees;
  std::vector<std::size_t> envelope_dims;
  std::vector<std::size_t> pbw_dims;
};

/// The unit L -> Prim U(L) degree by degree. Intended for characteristic 0;
/// in characteristic p the report shows where it fails.
MilnorMooreReport milnor_moore_check(const LiePresentation& l, int max_degree);

struct RestrictedReport {
  std::vector<std::size_t> primitive_dims;  // Prim T(V), degrees 0..D
  /// Span of Lie words in V and p^j-th powers of Lie words, per degree.
  std::vector<std::size_t> closure_dims;
  bool closure_matches = true;
  bool p_power_closed = true;
  bool commutator_closed = true;
};

/// Prim(T(V)) over F_p with the witness that it is the restricted Lie
/// algebra generated by V.
RestrictedReport restricted_monad(const Field& field, const GradedSpace& v, int max_degree);

struct SymExponentialReport {
  std::vector<std::size_t> lhs;   // Sym(X + Y) per degree
  std::vector<std::size_t> rhs;   // Sym(X) (x) Sym(Y) per degree
  std::map<int, Matrix> iso;      // multiplication Sym X (x) Sym Y -> Sym(X + Y)
  bool dims_equal = false;
  bool invertible = false;
  bool coinvariant_dims_match = false;  // monomial counts agree with tensor coinvariants
};

SymExponentialReport sym_exponential_check(const Field& field, const GradedSpace& x, const GradedSpace& y, int max_degree);

/// Witt number W_d(n) = (1/n) sum_{e | n} mu(e) d^(n/e).
long witt_number(int d, int n);

}  // namespace opkit
