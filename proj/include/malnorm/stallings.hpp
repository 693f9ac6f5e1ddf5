#ifndef MALNORM_STALLINGS_HPP
#define MALNORM_STALLINGS_HPP

#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "malnorm/word.hpp"

namespace malnorm {

/// Stallings graph of a finitely generated subgroup of a free group: a
/// folded, connected, based core graph with one partial permutation of the
/// vertex set per positive generator. Freely reduced words labelling closed
/// paths at the basepoint are exactly the subgroup elements.
///
/// Graphs are canonicalized on construction (BFS renumbering from the
/// basepoint in generator order), so equal subgroups built in any generator
/// order compare equal and all outputs are deterministic. The basepoint is
/// always vertex 0.
class SubgroupGraph {
 public:
  /// The trivial subgroup of F_1 (placeholder value).
  SubgroupGraph() : SubgroupGraph(1, 1) {}

  /// Builds the subgroup graph of gp(generators) by Stallings folding.
  static SubgroupGraph fold(int rank, std::span<const Word> generators);
  static SubgroupGraph fold(int rank, std::initializer_list<Word> generators);

  /// Builds from an explicit edge list (u --g--> v with g a positive
  /// generator index). Rejects unfolded input; trims to the based core.
  static SubgroupGraph from_edges(
      int rank, std::size_t vertices, std::size_t basepoint,
      std::span<const std::tuple<std::size_t, int, std::size_t>> edges);

  int rank() const { return rank_; }
  std::size_t vertex_count() const { return nv_; }
  std::size_t edge_count() const;
  static constexpr std::size_t basepoint() { return 0; }

  /// Endpoint of the edge at v labelled by a signed letter, if present.
  std::optional<std::size_t> step(std::size_t v, std::int32_t letter) const;
  /// Endpoint of the path labelled w starting at v, if the whole of w can
  /// be read.
  std::optional<std::size_t> trace(std::size_t v, const Word& w) const;

  /// Membership: w labels a closed path at the basepoint.
  bool contains(const Word& w) const;

  /// Membership witness: w as a product of basis() elements, as signed
  /// 1-based indices into basis(). nullopt iff w is not in the subgroup.
  std::optional<std::vector<std::int32_t>> express(const Word& w) const;

  /// Index in the ambient free group; nullopt means infinite.
  std::optional<std::size_t> finite_index() const;

  /// Free basis from the shortlex BFS spanning tree, one word per non-tree
  /// edge; size is |E| - |V| + 1.
  std::vector<Word> basis() const;

  /// True iff w labels a reduced path somewhere in the graph. False
  /// guarantees w is not a subword of any freely reduced subgroup element.
  bool reads_path(const Word& w) const;

  /// True iff some conjugate of w lies in the subgroup.
  bool conjugate_into(const Word& w) const;

  /// Smallest p >= 1 such that a conjugate of w^p lies in the subgroup;
  /// nullopt if no power does.
  std::optional<std::size_t> power_conjugate_into(const Word& w) const;

  /// No edges (the trivial subgroup).
  bool is_trivial() const { return edge_count() == 0; }

  /// Label of the BFS tree path from the basepoint to v.
  Word path_from_base(std::size_t v) const;

  /// Text export: "basepoint v0" plus one "vI --x--> vJ" line per edge.
  std::string to_text() const;

  friend bool operator==(const SubgroupGraph&, const SubgroupGraph&) = default;

 private:
  SubgroupGraph(int rank, std::size_t nv)
      : rank_(rank), nv_(nv), fwd_(nv * rank, -1), bwd_(nv * rank, -1) {}

  std::int32_t& fwd(std::size_t v, int g) { return fwd_[v * rank_ + g - 1]; }
  std::int32_t& bwd(std::size_t v, int g) { return bwd_[v * rank_ + g - 1]; }
  std::int32_t fwd(std::size_t v, int g) const {
    return fwd_[v * rank_ + g - 1];
  }
  std::int32_t bwd(std::size_t v, int g) const {
    return bwd_[v * rank_ + g - 1];
  }

  /// Removes degree-<=1 vertices (never the basepoint), checks
  /// connectivity, renumbers canonically.
  void normalize();

  int rank_ = 0;
  std::size_t nv_ = 0;
  // nv * rank transition tables, -1 = absent. fwd[v][g] = target of the
  // g-edge leaving v; bwd[v][g] = source of the g-edge entering v.
  std::vector<std::int32_t> fwd_, bwd_;

  friend class PullbackBuilder;
};

/// A connected component of the fiber product of two subgroup graphs,
/// trimmed to its cyclic core. Encodes the intersection H1 and z H2 z^-1
/// for the double coset H1 z H2 the component realizes.
struct PullbackComponent {
  /// Core vertex pairs (first factor vertex, second factor vertex).
  std::vector<std::pair<std::size_t, std::size_t>> vertex_pairs;
  /// Canonical double-coset representative (shortlex-least over the core).
  Word representative;
  /// Subgroup graph of H1 and z H2 z^-1.
  SubgroupGraph intersection;
  /// Self-pullback only: this is the diagonal component (z in H).
  bool is_diagonal = false;
};

/// Components of the fiber product with nontrivial intersection subgroup.
/// For g1 == g2 the diagonal component is always included and flagged.
std::vector<PullbackComponent> pullback(const SubgroupGraph& g1,
                                        const SubgroupGraph& g2);

struct MalnormalityViolation {
  Word z, h, h_prime;  // z not in H, h and h_prime in H, z h z^-1 = h_prime
};

struct MalnormalityReport {
  bool verdict = false;
  std::vector<MalnormalityViolation> violations;
};

/// Certifies malnormality via the self-pullback: the subgroup is malnormal
/// iff every non-diagonal component has trivial intersection. Violations are
/// materialized from the offending components.
MalnormalityReport is_malnormal(const SubgroupGraph& graph);

/// True iff no nontrivial element of H1 has a conjugate lying in H2.
/// Decided on the basepoint-free fiber product: a cycle surviving repeated
/// degree-<=1 deletion projects to closed reduced cycles in both factors.
bool conjugacy_disjoint(const SubgroupGraph& g1, const SubgroupGraph& g2);

struct DoubleCosetViolation {
  Word z;
  std::vector<Word> intersection_basis;  // z^-1 g z in H for each g
};

/// The finitely many double cosets HzH with z not in H and z^-1 H z and H
/// nontrivial, one entry per non-diagonal self-pullback component.
std::vector<DoubleCosetViolation> violating_double_cosets(
    const SubgroupGraph& graph);

}  // namespace malnorm

#endif
