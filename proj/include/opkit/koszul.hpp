#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "opkit/graded.hpp"
#include "opkit/operad.hpp"

namespace opkit {

/// Right O-module: X o O -> X. `act(x, ops)` returns an element of X whose
/// inputs are the inputs of ops[0], then ops[1], and so on.
struct RightModule {
  std::string name;
  SymSeqObject seq;
  std::function<SparseVec(const OpElement&, const std::vector<OpElement>&)> act;
};

/// Left O-module: O o Y -> Y, with the same input-order convention.
struct LeftModule {
  std::string name;
  SymSeqObject seq;
  std::function<SparseVec(const OpElement&, const std::vector<OpElement>&)> act;
};

/// triv with O acting through the augmentation.
RightModule trivial_right(const Operad& o);
LeftModule trivial_left(const Operad& o);
/// O acting on itself.
RightModule regular_right(const Operad& o);
LeftModule regular_left(const Operad& o);
/// tau_m(O): O truncated to arities <= m; composites of larger arity vanish.
RightModule truncated_right(const Operad& o, int m);

/// Nondegenerate cell of the two-sided bar complex: a chain of set partitions
/// P_0 > P_1 > ... > P_s of {0..n-1} (strict refinements), an X-decoration on
/// the blocks of P_0, for each level j an O-decoration per block of P_{j-1}
/// with inputs the P_j-blocks inside it (ordered by minimum), and a
/// Y-decoration per block of P_s.
struct BarCell {
  std::vector<std::vector<int>> levels;       // block id per element, blocks numbered by minimum
  std::size_t x = 0;                          // index in X_{#blocks(P_0)}
  std::vector<std::vector<std::size_t>> ops;  // ops[j-1][b] for level j, block b of P_{j-1}
  std::vector<std::size_t> ys;                // per block of P_s

  int length() const { return static_cast<int>(levels.size()) - 1; }
  friend bool operator<(const BarCell& a, const BarCell& b) {
    return std::tie(a.levels, a.x, a.ops, a.ys) < std::tie(b.levels, b.x, b.ops, b.ys);
  }
  friend bool operator==(const BarCell& a, const BarCell& b) = default;
};

struct BarArity {
  ChainComplex complex;
  std::map<int, std::vector<BarCell>> cells;  // per degree, in basis order
};

/// Bar(X, O, Y): the normalized two-sided bar complex, arity by arity.
class BarComplex {
 public:
  BarComplex(RightModule x, Operad o, LeftModule y, Window w);

  const Window& window() const { return w_; }
  const Operad& operad() const { return o_; }
  const RightModule& right() const { return x_; }
  const LeftModule& left() const { return y_; }

  /// Builds (and caches) arity n. Throws ValidationError when a cell lies
  /// outside the degree window or the predicted cell count exceeds the guard.
  const BarArity& arity(int n) const;
  const ChainComplex& complex(int n) const { return arity(n).complex; }
  /// Sigma_n action of s_t on the degree-d cells.
  Matrix action(int n, int d, int t) const;

  /// Number of nondegenerate cells at arity n, counted without building them.
  std::size_t predicted_cells(int n) const;

  std::string cell_label(int n, const BarCell& c) const;

 private:
  std::vector<BarCell> enumerate(int n) const;
  int cell_degree(const BarCell& c) const;
  SparseVec boundary(int n, const BarCell& c, const std::map<BarCell, std::size_t>& index) const;
  SparseVec act(int n, const BarCell& c, const Perm& sigma, const std::map<BarCell, std::size_t>& index) const;

  RightModule x_;
  Operad o_;
  LeftModule y_;
  Window w_;
  mutable std::map<int, BarArity> cache_;
  mutable std::map<int, std::map<BarCell, std::size_t>> index_;
};

constexpr std::size_t kMaxBarCells = 400000;

/// Homology of a complex carrying a Sigma_n action on every degree, packaged
/// as an arity component (basis "h<deg>_<k>", induced action matrices).
struct ArityHomology {
  Homology homology;
  Component component;
  std::map<int, HomologyRetraction> retractions;
};
/// Retractions onto the chosen representatives are built only on request.
ArityHomology homology_with_action(const ChainComplex& c, int n, const std::function<Matrix(int degree, int t)>& action,
                                   bool with_retractions = false);

struct RelativeHomology {
  SymSeqObject homology;
  std::map<int, Homology> per_arity;
  std::map<int, std::size_t> cells;
};

/// Arity-wise homology of Bar(X, O, Y) with the induced Sigma_n actions.
RelativeHomology relative_compose_homology(const RightModule& x, const Operad& o, const LeftModule& y, const Window& w);

// ---------------------------------------------------------------------------
// Tree bar construction with its cooperad structure.

/// Rooted tree with leaves 0..n-1 and vertices decorated by O-basis elements
/// of arity >= 2; children ordered by minimal leaf, child j feeding input j.
struct TreeCell {
  int leaf = -1;
  std::size_t op = 0;
  std::vector<TreeCell> kids;
  friend bool operator<(const TreeCell& a, const TreeCell& b) {
    return std::tie(a.leaf, a.op, a.kids) < std::tie(b.leaf, b.op, b.kids);
  }
  friend bool operator==(const TreeCell& a, const TreeCell& b) = default;
};

/// The cofree-cooperad bar construction of a reduced operad: trees decorated
/// by the suspension of the augmentation ideal, differential contracting
/// internal edges, cocomposition cutting subtrees.
class TreeBar {
 public:
  TreeBar(Operad o, int max_arity);

  const Operad& operad() const { return o_; }
  int max_arity() const { return max_arity_; }
  const ChainComplex& complex(int n) const;
  const std::map<int, std::vector<TreeCell>>& cells(int n) const;
  Matrix action(int n, int d, int t) const;
  /// Delta_i applied to a chain of degree d in arity m+k-1; the result is
  /// indexed by pairs (cell of arity m, cell of arity k) with their degrees.
  std::map<std::pair<int, int>, std::map<std::pair<std::size_t, std::size_t>, Scalar>> cocompose(int m, int i, int k, int d,
                                                                                                  const SparseVec& v) const;

 private:
  struct Arity {
    ChainComplex complex;
    std::map<int, std::vector<TreeCell>> cells;
    std::map<TreeCell, std::pair<int, std::size_t>> index;
  };
  const Arity& build(int n) const;

  Operad o_;
  int max_arity_;
  mutable std::map<int, Arity> cache_;
};

struct KoszulDual {
  SymSeqObject homology;            // leveled bar, arity-wise
  std::map<int, Homology> per_arity;
  bool formal = true;               // each arity concentrated in one degree
  std::vector<int> unformal_arities;
  bool has_structure = false;
  Cooperad cooperad;                // induced on tree-bar homology when formal
};

/// The cooperad structure is computed only when asked for and formal.
KoszulDual koszul_dual(const Operad& o, const Window& w, bool with_structure = true);

/// The operad dual to the Koszul dual cooperad, built from the tree bar.
/// Throws AxiomError when the homology is not concentrated per arity.
Operad koszul_dual_operad(const Operad& o, const Window& w);

struct DualMatch {
  int arity = 0;
  std::map<int, std::size_t> expected;  // degree -> dim
  std::map<int, std::size_t> computed;
  bool dims_match = false;
  bool characters_match = false;
};

struct DoubleDualReport {
  bool ok = false;
  bool formal = true;
  bool dual_operad_valid = false;
  std::vector<DualMatch> arities;
  std::string note;
};

/// Cobar of the Koszul dual cooperad, computed as the linear dual of the bar
/// complex of its dual operad, compared with O arity by arity.
DoubleDualReport double_dual_check(const Operad& o, const Window& w);

struct NormRecord {
  int stage = 0;
  int arity = 0;
  std::string what;
  bool is_iso = false;
};

struct TowerStage {
  int m = 0;
  SymSeqObject homology;
  std::map<int, Homology> per_arity;
  /// Homology of the fiber (cells with exactly m blocks in P_0), per arity.
  std::map<int, std::map<int, std::size_t>> fiber;
  /// Fiber homology dims predicted by (O_m-part) o (Koszul dual), per arity.
  std::map<int, std::map<int, std::size_t>> fiber_predicted;
  bool fiber_matches = true;
  /// Exactness of the long exact sequence of fiber -> stage m -> stage m-1.
  bool les_consistent = true;
  /// Degrees carrying homology per arity >= 2.
  std::map<int, std::vector<int>> support;
  bool concentrated = true;  // every arity >= 2 in the single degree 1 - m
};

struct TowerReport {
  std::vector<TowerStage> stages;
  std::vector<NormRecord> norms;
};

TowerReport truncation_tower(const Operad& o, const Window& w, int max_stage);

}  // namespace opkit
