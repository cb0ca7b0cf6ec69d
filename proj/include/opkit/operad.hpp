#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "opkit/symseq.hpp"

namespace opkit {

/// A basis element of O_n, written (n, index).
struct OpElement {
  int arity = 0;
  std::size_t index = 0;
};

/// Operad with O_0 = 0, given by partial compositions on basis elements.
/// All input positions are 0-based: x o_i y plugs y into input i of x; inputs
/// of x after i move up by arity(y) - 1 and input k of y lands at i + k.
class Operad {
 public:
  Operad() = default;
  Operad(std::string name, SymSeqObject seq, std::size_t unit);

  const std::string& name() const { return name_; }
  const SymSeqObject& seq() const { return seq_; }
  const Field& field() const { return seq_.field(); }
  const Window& window() const { return seq_.window(); }
  int max_arity() const { return seq_.window().max_arity; }
  std::size_t dim(int n) const { return seq_.dim(n); }
  int degree(int n, std::size_t a) const { return seq_.arity(n).degrees[a]; }
  std::size_t unit() const { return unit_; }
  /// O_1 is spanned by the unit.
  bool reduced() const { return seq_.dim(1) == 1 && seq_.dim(0) == 0; }

  /// Table of x o_i y indexed by a * dim(n) + b.
  void set_partial(int m, int i, int n, std::vector<SparseVec> table);
  const SparseVec& partial(int m, std::size_t a, int i, int n, std::size_t b) const;
  SparseVec partial(int m, const SparseVec& x, int i, int n, const SparseVec& y) const;
  /// The composition map as a dim(m+n-1) x (dim(m) * dim(n)) matrix.
  Matrix partial_matrix(int m, int i, int n) const;
  bool has_partial(int m, int i, int n) const;

  /// gamma(x; y_0, ..., y_{r-1}); the result's inputs are ordered y_0's inputs
  /// first, then y_1's, and so on.
  SparseVec gamma(const OpElement& x, const std::vector<OpElement>& ys) const;

  friend bool operator==(const Operad& a, const Operad& b);

 private:
  std::string name_;
  SymSeqObject seq_;
  std::size_t unit_ = 0;
  std::map<std::tuple<int, int, int>, std::vector<SparseVec>> partials_;
};

struct AxiomFailure {
  std::string axiom;
  int m = 0, i = 0, n = 0;
  std::string detail;
};

struct OperadReport {
  bool valid = true;
  std::vector<AxiomFailure> failures;
  std::size_t instances_checked = 0;
};

/// Unit, sequential and parallel associativity (with Koszul signs), and
/// equivariance, for every instance inside the window.
OperadReport check_operad(const Operad& o, std::size_t max_failures = 32);

Operad triv_operad(Field field, Window window);
Operad comm_nu(Field field, Window window);
Operad ass_nu(Field field, Window window);
Operad lie(Field field, Window window);
Operad lie_shifted(Field field, Window window);
/// Names: triv, comm_nu (comm-nu), ass_nu (ass-nu), lie, lie_shifted (lie-shifted).
Operad builtin(const std::string& name, Field field, Window window);
std::vector<std::string> builtin_names();

/// Arity r placed in degree (1-r)m with the action twisted by sign^m; the
/// structure maps are those of the Hadamard product with the m-fold
/// suspension operad.
Operad operadic_shift(const Operad& o, int m);

enum class Symmetry { none, symmetric, antisymmetric };

struct Generator {
  std::string label;
  int arity = 2;
  int degree = 0;
  Symmetry symmetry = Symmetry::none;
};

/// A rooted tree as written by a user: a leaf (1-based label) or a vertex
/// whose j-th child feeds generator input j.
struct ListedTree {
  int leaf = 0;  // > 0 for leaves
  std::string label;
  std::vector<ListedTree> children;

  static ListedTree make_leaf(int l) { return ListedTree{l, {}, {}}; }
  static ListedTree vertex(std::string label, std::vector<ListedTree> children) {
    return ListedTree{0, std::move(label), std::move(children)};
  }
};

struct RelationTerm {
  Scalar coeff;
  ListedTree tree;
};

struct OperadPresentation {
  Field field;
  std::vector<Generator> generators;
  std::vector<std::vector<RelationTerm>> relations;
};

struct PresentedOperad {
  Operad operad;
  /// Canonical free-operad trees per arity, in column order of quotient_map.
  std::map<int, std::vector<std::string>> free_basis;
  /// Free span -> quotient basis, per arity.
  std::map<int, Matrix> quotient_map;
};

/// Free operad on the generators modulo the operadic ideal generated by the
/// Sigma-closure of the relations. Generators must have even degree.
PresentedOperad presented_operad(const OperadPresentation& p, const Window& w);

OperadPresentation lie_presentation(Field field);
OperadPresentation ass_presentation(Field field);
OperadPresentation comm_presentation(Field field);

/// Arity-wise linear dual: degrees negated, actions transposed,
/// cocompositions are transposes of the compositions.
struct Cooperad {
  std::string name;
  SymSeqObject seq;
  std::size_t counit = 0;
  /// Delta_i : C_{m+n-1} -> C_m (x) C_n, rows indexed a * dim(n) + b.
  std::map<std::tuple<int, int, int>, Matrix> cocompositions;
};

Cooperad dual_cooperad(const Operad& o);
/// The operad whose compositions are the transposed cocompositions.
Operad dual_operad(const Cooperad& c);
/// Linear dual of a symmetric sequence; basis order is stable under double dual.
SymSeqObject dual_sequence(const SymSeqObject& x);
/// Permutation p with dual basis element j = original element p[j].
std::vector<std::size_t> dual_order(const Component& c);

/// The block permutation sigma' with (sigma x) o_i y = sigma' (x o_{sigma^-1(i)} y).
Perm left_block_perm(const Perm& sigma, int i, int n);
/// The permutation tau' with x o_i (tau y) = tau' (x o_i y), x of arity m.
Perm right_block_perm(int m, int i, const Perm& tau);

/// Dimension of the space of right O-module structures on X that are
/// unital and equivariant, measured as a deformation of the given one (the
/// action through the unit). Returns the kernel dimension of the linear
/// constraints.
std::size_t right_module_structure_dim(const SymSeqObject& x, const Operad& o);

bool same_characters(const SymSeqObject& a, const SymSeqObject& b, int n);

}  // namespace opkit
