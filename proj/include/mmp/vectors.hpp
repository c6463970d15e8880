#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmp/diagram.hpp"
#include "mmp/rational_linalg.hpp"

namespace mmp {

/// Vertex-indexed exact vectors of a common dimension.
struct VectorSet {
  int dimension = 0;
  std::map<Vertex, RationalVector> vectors;
  friend bool operator==(const VectorSet&, const VectorSet&) = default;
};

class VectorParseError : public std::runtime_error {
 public:
  VectorParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Lines `label: c1 ... cd`, components integers or p/q; blank lines and
/// `#` comments skipped. Labels are resolved through d's labels.
VectorSet parse_vectors(std::string_view text, const MmpDiagram& d);

/// Same, resolving labels as default labels: single alphabet characters
/// when every label is one character, otherwise 1-based integers.
VectorSet parse_vectors(std::string_view text);

/// One line per vector in vertex order, labelled with default labels.
std::string serialize_vectors(const VectorSet& v);
/// Labelled with d's labels.
std::string serialize_vectors(const VectorSet& v, const MmpDiagram& d);

struct InnerProductViolation {
  std::size_t block = 0;
  Vertex u = 0;
  Vertex v = 0;
  Rational inner_product;
};

struct RealizationReport {
  bool valid = true;
  std::vector<InnerProductViolation> violations;
};

/// Exact inner product of every pair of vertices sharing a block. Throws
/// std::invalid_argument on a missing vector, a wrong-length vector or a
/// block larger than the dimension.
RealizationReport verify_realization(const MmpDiagram& d, const VectorSet& v);

struct RealizeOptions {
  int retries = 100;
  int coefficient_range = 3;    // null-space coefficients drawn from [-r, r]
  int backtrack_attempts = 3;   // samples tried per vertex before backing up
  std::uint64_t max_nodes = 2'000'000;
  bool distinct_rays = true;    // no two vertices on the same ray
  /// When nonempty, search exhaustively over vectors whose entries all lie
  /// in this set instead of sampling. Only this mode can prove impossibility.
  std::vector<Rational> candidate_entries;
};

enum class RealizeStatus { Realized, BudgetExhausted, ImpossibleInCandidateSpace };

struct RealizeResult {
  RealizeStatus status = RealizeStatus::BudgetExhausted;
  std::optional<VectorSet> vectors;
  std::uint64_t seed = 0;
  int attempts = 0;
  std::uint64_t nodes = 0;
  std::string detail;
};

/// Assigns vectors vertex by vertex, each sampled from the exact null space
/// of its already assigned block neighbours, with limited backtracking and
/// restarts. Outputs are primitive integer vectors. Deterministic in
/// (d, dimension, seed, options). Throws std::invalid_argument when some
/// block is larger than the dimension.
RealizeResult realize(const MmpDiagram& d, int dimension, std::uint64_t seed, const RealizeOptions& options = {});

/// Runs seeds first_seed .. first_seed + count - 1 on `workers` threads and
/// returns the successful result with the smallest seed, which realize()
/// reproduces on its own. Otherwise the result for the last seed.
RealizeResult realize_race(const MmpDiagram& d, int dimension, std::uint64_t first_seed, std::uint64_t count,
                           unsigned workers, const RealizeOptions& options = {});

std::string to_string(RealizeStatus s);

}  // namespace mmp
