#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "opkit/field.hpp"
#include "opkit/graded.hpp"

namespace opkit {

/// Permutation of {0..n-1} in one-line notation: p[i] is the image of i.
using Perm = std::vector<int>;

namespace perm {
Perm identity(int n);
Perm transposition(int n, int i);  // swaps i and i+1
Perm compose(const Perm& a, const Perm& b);  // (a o b)(i) = a(b(i))
Perm inverse(const Perm& p);
int sign(const Perm& p);
bool is_identity(const Perm& p);
std::vector<Perm> all(int n);
/// One permutation per cycle type, together with the class size.
std::vector<std::pair<Perm, std::size_t>> class_representatives(int n);
/// Adjacent-transposition indices i_1, i_2, ... with p = s_{i_k} ... s_{i_1};
/// applying the action means applying s_{i_1} first.
std::vector<int> adjacent_word(Perm p);
/// Sign of reordering graded items: item at old position a moves to new_pos[a].
int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& new_pos);
}  // namespace perm

/// Arity-n component: a graded space with a left Sigma_n action, given on the
/// adjacent transpositions. sigma acts by renaming input i to sigma(i).
/// Basis is sorted by degree.
struct Component {
  std::vector<std::string> labels;
  std::vector<int> degrees;
  std::vector<Matrix> transpositions;  // n-1 matrices for arity n >= 2

  std::size_t dim() const { return labels.size(); }
  std::map<int, std::size_t> degree_dims() const;
};

/// Arity-indexed graded spaces with symmetric-group actions.
class SymSeqObject {
 public:
  SymSeqObject() = default;
  SymSeqObject(Field field, Window window) : field_(field), window_(window) {}

  const Field& field() const { return field_; }
  const Window& window() const { return window_; }
  void set_window(const Window& w) { window_ = w; }

  /// Installs a component; shapes and degree order are checked.
  void set_arity(int n, Component c);
  bool has_arity(int n) const;
  const Component& arity(int n) const;  // empty component when absent
  const std::map<int, Component>& arities() const { return arities_; }
  std::size_t dim(int n) const { return arity(n).dim(); }
  std::vector<std::size_t> dims(int from, int to) const;

  Matrix action(int n, const Perm& sigma) const;
  SparseVec act(int n, const Perm& sigma, SparseVec v) const;

  /// Group-homomorphism (Coxeter relations) and degree-preservation check.
  /// Throws AxiomError naming the failing relation.
  void validate() const;

  /// Traces on class representatives, in perm::class_representatives order.
  std::vector<Scalar> character(int n) const;
  /// The arity-n component as a chain complex with zero differential.
  ChainComplex component_complex(int n) const;

  friend bool operator==(const SymSeqObject& a, const SymSeqObject& b);

 private:
  Field field_;
  Window window_;
  std::map<int, Component> arities_;
};

/// A basis element of (X o Y)_n: set partition of {0..n-1} with blocks ordered
/// by minimum, an X_k basis index, and one Y basis index per block.
struct ComposeCell {
  std::vector<std::vector<int>> blocks;
  std::size_t x = 0;
  std::vector<std::size_t> ys;

  friend bool operator<(const ComposeCell& a, const ComposeCell& b) {
    return std::tie(a.blocks, a.x, a.ys) < std::tie(b.blocks, b.x, b.ys);
  }
  friend bool operator==(const ComposeCell& a, const ComposeCell& b) = default;
};

/// All set partitions of {0..n-1}, blocks ordered by minimum, in
/// restricted-growth-string order.
std::vector<std::vector<std::vector<int>>> set_partitions(int n);
/// Bell numbers by the triangle recurrence (independent of set_partitions).
std::vector<unsigned long> bell_numbers(int upto);

/// Canonical cells of (X o Y)_n in basis order (sorted by degree, stable).
std::vector<ComposeCell> compose_cells(const SymSeqObject& x, const SymSeqObject& y, int n);
int cell_degree(const SymSeqObject& x, const SymSeqObject& y, const ComposeCell& c);

/// (X o Y)_n = sum_k (X_k (x) sum_{f: n->>k} (x)_j Y_{f^-1(j)})_{Sigma_k}, realized on
/// canonical cells. Requires Y_0 = 0.
SymSeqObject compose(const SymSeqObject& x, const SymSeqObject& y, const Window& w);

/// Iterated composition X_1 o (X_2 o (... o X_l)).
SymSeqObject compose_many(const std::vector<SymSeqObject>& xs, const Window& w);

/// The canonical isomorphism ((X o Y) o Z)_n -> (X o (Y o Z))_n in the
/// bases produced by compose().
Matrix compose_associator(const SymSeqObject& x, const SymSeqObject& y, const SymSeqObject& z, const Window& w, int n);

/// The Sigma_k representation X_k (x) sum_{f: n->>k} (x)_j Y_{f^-1(j)} whose
/// coinvariants give the k-block part of (X o Y)_n.
struct SummandRep {
  std::size_t dim = 0;
  std::vector<Matrix> transpositions;
};
SummandRep compose_summand(const SymSeqObject& x, const SymSeqObject& y, int n, int k);

enum class TruncateSide { above, below };
SymSeqObject truncate(const SymSeqObject& x, int n, TruncateSide side);

/// Arity r shifted by (1-r)m; Sigma_r action twisted by sign^m.
SymSeqObject operadic_shift(const SymSeqObject& x, int m);

SymSeqObject triv_sequence(Field field, Window window);

struct NormMapResult {
  Matrix coinvariant_basis;  // columns: standard vectors spanning a complement of im(sigma - 1)
  Matrix invariant_basis;    // columns: basis of the joint fixed space
  Matrix norm;               // invariants x coinvariants, induced by sum over Sigma_n
  bool is_iso = false;
};

/// Norm map V_{Sigma_n} -> V^{Sigma_n}. `transpositions` are the adjacent
/// transposition actions on V (n-1 matrices). Throws AxiomError when they
/// do not define a Sigma_n action.
NormMapResult norm_map(const Field& field, int n, std::size_t dim, const std::vector<Matrix>& transpositions);
NormMapResult norm_map(const SymSeqObject& x, int n);

/// Word-length graded dims of the free O-algebra on V:
/// result[n][degree] = dim of the degree part of (O_n (x) V^{(x)n})_{Sigma_n}.
std::map<int, std::map<int, std::size_t>> free_algebra(const SymSeqObject& o, const GradedSpace& v, int max_word_length);
std::vector<std::size_t> free_algebra_dims(const SymSeqObject& o, const GradedSpace& v, int max_word_length);

/// Tensor power V^{(x)n} with the permutation action (Koszul signs):
/// transposition matrices and per-basis degrees.
struct TensorPower {
  std::vector<int> degrees;
  std::vector<Matrix> transpositions;
};
TensorPower tensor_power(const Field& field, const GradedSpace& v, int n);

}  // namespace opkit
