#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "mmp/diagram.hpp"

namespace mmp {

/// Permutation of the incidence-graph nodes of a diagram: nodes
/// [0, vertex_count) are vertices, node vertex_count + j is block j.
using NodePermutation = std::vector<int>;

/// Result of canonically labeling the vertex-block incidence graph.
struct CanonicalLabeling {
  std::vector<int> vertex_position;  // vertex -> canonical vertex index
  std::vector<int> block_position;   // block -> canonical block index
  std::vector<NodePermutation> generators;  // generate the full automorphism group
  mpz_class automorphism_count = 1;
  MmpDiagram canonical_diagram;  // vertices and blocks renumbered by position
};

struct CanonicalForm {
  std::string canonical_text;
  mpz_class automorphism_count = 1;
};

/// Canonical labeling by individualization-refinement on the bipartite
/// incidence graph (vertices and blocks as separate color classes), with
/// automorphism pruning. Block order and within-block order are ignored.
CanonicalLabeling canonical_labeling(const MmpDiagram& d);

CanonicalForm canonical_form(const MmpDiagram& d);

bool are_isomorphic(const MmpDiagram& a, const MmpDiagram& b);

/// Orbit representative (smallest member) of every vertex and every block
/// under the automorphism group described by `labeling`.
std::vector<int> vertex_orbits(const MmpDiagram& d, const CanonicalLabeling& labeling);
std::vector<int> block_orbits(const MmpDiagram& d, const CanonicalLabeling& labeling);

}  // namespace mmp
