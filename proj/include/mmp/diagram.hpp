#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmp {

using Vertex = int;
using Block = std::vector<Vertex>;

/// Label characters in numbering order. Vertex i of a diagram with at most
/// 62 vertices is written as kLabelAlphabet[i].
inline constexpr std::string_view kLabelAlphabet =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ1234567890";

/// Version of the MMP line dialect read and written by this library.
inline constexpr int kMmpDialectVersion = 1;

enum class MmpFormat { Auto, Letters, Numeric };

/// Default label of vertex `v`: an alphabet character when the diagram fits
/// the alphabet, otherwise the 1-based index.
std::string default_label(Vertex v, int vertex_count);

/// A hypergraph of atoms grouped into blocks of mutually orthogonal atoms.
///
/// Immutable once built. The constructor only enforces index sanity (every
/// vertex in range, no repeats inside a block); the three MMP conditions are
/// checked by validate() so that malformed inputs can still be reported.
class MmpDiagram {
 public:
  MmpDiagram() = default;
  MmpDiagram(int vertex_count, std::vector<Block> blocks);
  MmpDiagram(int vertex_count, std::vector<Block> blocks, std::vector<std::string> labels);

  int vertex_count() const noexcept { return vertex_count_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_.at(i); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(Vertex v) const { return labels_.at(static_cast<std::size_t>(v)); }
  std::optional<Vertex> vertex_of(std::string_view label) const;

  /// blocks_of_vertex()[v] lists the indices of the blocks containing v.
  std::vector<std::vector<std::size_t>> blocks_of_vertex() const;

  /// Copy with `b` appended; vertices >= vertex_count() are added as fresh
  /// vertices with default labels.
  MmpDiagram with_block(Block b) const;

  /// Copy with block `index` removed. Vertices left without a block are
  /// dropped and the survivors renumbered in increasing order.
  MmpDiagram without_block(std::size_t index) const;

  /// Structural equality: same vertex count and identical block lists.
  /// Labels are presentation only and do not take part.
  friend bool operator==(const MmpDiagram& a, const MmpDiagram& b) {
    return a.vertex_count_ == b.vertex_count_ && a.blocks_ == b.blocks_;
  }

 private:
  int vertex_count_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::string> labels_;
};

class MmpParseError : public std::runtime_error {
 public:
  MmpParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses one diagram line. Vertices are numbered by first appearance of
/// their label. With MmpFormat::Auto the numeric dialect is chosen when the
/// line contains whitespace before its terminating period.
MmpDiagram parse_mmp(std::string_view line, MmpFormat format = MmpFormat::Auto);

/// Writes the diagram in normalized form: vertex i is printed as its
/// default label, so the output does not depend on the labels a diagram was
/// parsed with. Letters fall back to Numeric beyond 62 vertices.
std::string serialize_mmp(const MmpDiagram& d, MmpFormat format = MmpFormat::Auto);

/// True for blank lines and "#" comment lines of an MMP stream.
bool is_comment_or_blank(std::string_view line) noexcept;

bool is_connected(const MmpDiagram& d);

// Validation ---------------------------------------------------------------

enum class ViolationKind {
  UncoveredVertex,        // condition 1
  SmallBlock,             // condition 2
  SmallIntersectingBlock, // condition 3
  DuplicateBlock,         // degenerate input, same vertex set twice
};

/// 1, 2 or 3 for the MMP conditions; 0 for DuplicateBlock.
int condition_id(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::vector<Vertex> vertices;
  std::vector<std::size_t> blocks;
  std::string describe() const;
};

enum class WarningKind {
  LargeIntersection, // two blocks share two or more vertices
  ShortLoop,         // loop of order 3 or 4
};

struct Warning {
  WarningKind kind;
  std::vector<std::size_t> blocks;
  std::vector<Vertex> vertices;
  std::string describe() const;
};

struct ValidationOptions {
  /// Additionally report Greechie-style constraints as warnings.
  bool strict = false;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Violation> violations;
  std::vector<Warning> warnings;
};

ValidationReport validate(const MmpDiagram& d, const ValidationOptions& options = {});

}  // namespace mmp
