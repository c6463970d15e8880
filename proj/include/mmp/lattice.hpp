#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mmp/diagram.hpp"

namespace mmp {

using Element = int;

struct LatticeDiagnostic;
class OmlLattice;
std::variant<OmlLattice, LatticeDiagnostic> build_lattice(const MmpDiagram& d);

/// A (block, subset-of-block) pair; subsets are stored as sorted vertices.
struct BlockSubset {
  std::size_t block = 0;
  std::vector<Vertex> vertices;
};

/// Finite ortholattice with explicit operation tables.
class OmlLattice {
 public:
  /// Fixture constructor from an order relation and an orthocomplement
  /// table. Computes meet and join; throws std::invalid_argument when the
  /// order has no bottom/top or some pair lacks a glb or lub.
  static OmlLattice from_order(std::vector<std::vector<char>> leq, std::vector<Element> ortho);

  std::size_t size() const noexcept { return leq_.size(); }
  Element zero() const noexcept { return zero_; }
  Element one() const noexcept { return one_; }
  bool leq(Element x, Element y) const { return leq_[idx(x)][idx(y)] != 0; }
  Element meet(Element x, Element y) const { return meet_[idx(x)][idx(y)]; }
  Element join(Element x, Element y) const { return join_[idx(x)][idx(y)]; }
  Element ortho(Element x) const { return ortho_[idx(x)]; }

  /// Element of each diagram vertex; empty for fixture lattices.
  const std::vector<Element>& atom_of_vertex() const noexcept { return atom_of_vertex_; }
  /// The (block, subset) pairs identified into element x.
  const std::vector<BlockSubset>& members(Element x) const { return members_.at(idx(x)); }
  std::string name(Element x) const;

  /// Copy with a replaced orthocomplement table, nothing recomputed.
  /// Used to build negative controls.
  OmlLattice with_ortho(std::vector<Element> ortho) const;

 private:
  friend std::variant<OmlLattice, LatticeDiagnostic> build_lattice(const MmpDiagram& d);
  static std::size_t idx(Element x) { return static_cast<std::size_t>(x); }

  std::vector<std::vector<char>> leq_;
  std::vector<std::vector<Element>> meet_;
  std::vector<std::vector<Element>> join_;
  std::vector<Element> ortho_;
  Element zero_ = 0;
  Element one_ = 0;
  std::vector<Element> atom_of_vertex_;
  std::vector<std::vector<BlockSubset>> members_;
  std::vector<std::string> names_;
};

struct LatticeDiagnostic {
  enum class Kind {
    AtomsCollapsed,         // some vertex is not an atom: shared with another vertex, 0, 1 or above an element
    NotPartialOrder,        // x <= y <= x for distinct x, y
    NotALattice,            // a pair lacks a glb or lub
    OrthocomplementIllDefined,
    NotOrthomodular,
  };
  Kind kind;
  Element x = -1;
  Element y = -1;
  /// Two incomparable minimal upper (or maximal lower) bounds for NotALattice.
  std::optional<std::pair<Element, Element>> bounds;
  std::string message;
};

/// Pastes the Boolean algebras of the blocks: (B1, S) ~ (B2, S) when S lies
/// in both blocks, all empty subsets form 0, all full blocks form 1, and the
/// identification is closed under within-block complementation. The order
/// is the transitive closure of subset order within blocks. Every lattice
/// and ortholattice property, and orthomodularity, is checked exhaustively.
std::variant<OmlLattice, LatticeDiagnostic> build_lattice(const MmpDiagram& d);

struct LawCheck {
  bool holds = true;
  /// Elements witnessing the failure; meaning depends on the check.
  std::vector<Element> witness;
  int clause = 0;  // superposition: 1 or 2 when failing
};

/// x <= y implies y = x v (x' ^ y), over all pairs. Witness: {x, y}.
LawCheck check_orthomodular(const OmlLattice& l);

/// Atoms of l (elements covering 0), ascending.
std::vector<Element> atoms(const OmlLattice& l);

/// Clause 1: distinct atoms a, b have a third atom c <= a v b (witness {a, b}).
/// Clause 2: if c is a superposition of a and b then a is one of b and c
/// (witness {a, b, c}).
LawCheck check_superposition(const OmlLattice& l);

/// True iff a chain 0 < a < b < c < 1 exists; witness is a longest chain.
LawCheck check_minimal_length(const OmlLattice& l);

/// x <= y implies y' <= x'; x ^ x' = 0; x v x' = 1; x'' = x. Witness: {x} or {x, y}.
LawCheck check_ortholattice(const OmlLattice& l);

}  // namespace mmp
