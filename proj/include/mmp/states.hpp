#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mmp/diagram.hpp"
#include "mmp/exact_lp.hpp"

namespace mmp {

/// Dispersion-free state: exactly one vertex valued 1 in every block.
struct ZeroOneState {
  std::vector<std::uint8_t> values;  // indexed by vertex
  friend bool operator==(const ZeroOneState&, const ZeroOneState&) = default;
};

/// Vertex weights in [0, 1] summing to 1 over every block.
struct ProbabilisticState {
  std::vector<Rational> values;  // indexed by vertex
};

bool is_01_state(const MmpDiagram& d, const ZeroOneState& s);
bool is_state(const MmpDiagram& d, const ProbabilisticState& s);
ProbabilisticState to_probabilistic(const ZeroOneState& s);
/// Inverse of to_probabilistic; nullopt when some value is not 0 or 1.
std::optional<ZeroOneState> to_zero_one(const ProbabilisticState& s);

// 0-1 states ----------------------------------------------------------------

struct ColoringResult {
  bool colorable = false;
  std::optional<ZeroOneState> witness;
  std::uint64_t nodes = 0;  // search nodes visited; the exhausted tree is the certificate
};

/// Complete backtracking with unit propagation: a 1 forces every
/// block-neighbor to 0, a block with all but one vertex at 0 forces the last
/// one to 1.
ColoringResult admits_01_state(const MmpDiagram& d);

struct ZeroOneEnumeration {
  std::vector<ZeroOneState> states;
  bool truncated = false;
};

ZeroOneEnumeration enumerate_01_states(const MmpDiagram& d, std::size_t limit);

// Probabilistic states --------------------------------------------------------

/// The block-sum system {x >= 0, sum over each block = 1} as an LP.
LinearProgram state_system(const MmpDiagram& d);

struct StateFeasibility {
  bool feasible = false;
  std::optional<ProbabilisticState> state;  // a basic solution when feasible
  std::vector<Rational> farkas;             // certificate over blocks when infeasible
};

/// Single exact feasibility test.
StateFeasibility state_feasibility(const MmpDiagram& d);

/// A state in the relative interior of the state polytope (the average of
/// per-vertex maximizers), or nullopt when no state exists. For a single
/// block this is the uniform state.
std::optional<ProbabilisticState> admits_state(const MmpDiagram& d);

// Quantum state sets ------------------------------------------------------------

struct QuantumCheck {
  bool holds = false;
  std::optional<std::pair<Vertex, Vertex>> failing_pair;
  /// Vertices that no state can set to 1; their pairs pass vacuously.
  std::vector<Vertex> unreachable_atoms;
  std::size_t pairs_checked = 0;
  /// For every passing non-vacuous pair (a, b) a state with m(a) = 1 and
  /// m(b) < 1 exists; when requested, witnesses[a * n + b] holds one.
  std::vector<std::optional<ProbabilisticState>> witnesses;
};

struct QuantumOptions {
  unsigned workers = 1;
  bool keep_witnesses = false;
};

/// For every ordered pair of distinct atoms (a, b): some state has m(a) = 1
/// and m(b) < 1. Decided by minimizing m(b) under m(a) = 1 exactly.
QuantumCheck admits_quantum_states(const MmpDiagram& d, const QuantumOptions& options = {});

struct StateClassification {
  bool admits_any_state = false;
  bool admits_01_state = false;
  bool admits_quantum_states = false;
  bool has_unreachable_atoms = false;
  std::optional<ZeroOneState> zero_one_witness;
  std::optional<ProbabilisticState> state_witness;
  std::optional<std::pair<Vertex, Vertex>> failing_pair;
};

StateClassification classify_state_space(const MmpDiagram& d, const QuantumOptions& options = {});

}  // namespace mmp
