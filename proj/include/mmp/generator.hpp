#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmp/diagram.hpp"

namespace mmp {

/// A named predicate on diagrams usable as a generation filter.
///
/// `hereditary` filters fail on every extension of a diagram they fail on,
/// so the search may prune on them without changing the emitted set.
struct DiagramFilter {
  std::string name;
  bool hereditary = false;
  std::function<bool(const MmpDiagram&)> accept;
};

/// Known names: "non-01-colorable", "stateless" (not hereditary),
/// "01-colorable", "admits-state" (hereditary).
const DiagramFilter& filter_by_name(std::string_view name);
std::vector<std::string> filter_names();

struct GenerationParams {
  int target_blocks = 1;
  int block_size_min = 3;
  int block_size_max = 3;
  int max_vertices = 0;  // 0: target_blocks * block_size_max
  bool require_connected = true;
  std::vector<std::string> filters;
  /// Prune intermediate diagrams on hereditary filters.
  bool prune_hereditary = true;

  int effective_max_vertices() const {
    return max_vertices > 0 ? max_vertices : target_blocks * block_size_max;
  }
  void check() const;
};

struct SearchBudget {
  std::uint64_t max_nodes = 0;  // 0: unlimited
  double max_seconds = 0;       // 0: unlimited
};

struct GenerationStats {
  std::uint64_t nodes = 0;     // accepted canonical diagrams visited
  std::uint64_t emitted = 0;
  std::uint64_t candidates = 0;  // extension representatives tested
  std::vector<std::uint64_t> per_level;  // accepted diagrams per block count
  std::string summary() const;
};

class SearchBudgetExceeded : public std::runtime_error {
 public:
  SearchBudgetExceeded(const std::string& what, GenerationStats stats)
      : std::runtime_error(what), stats_(std::move(stats)) {}
  const GenerationStats& stats() const noexcept { return stats_; }

 private:
  GenerationStats stats_;
};

/// One-block extension of a parent diagram: the new block is `existing`
/// followed by `fresh` new vertices numbered from the parent's vertex count.
struct Extension {
  std::vector<Vertex> existing;
  int fresh = 0;

  Block new_block(int parent_vertex_count) const;
  MmpDiagram apply(const MmpDiagram& parent) const;
};

/// One representative per Aut(d)-orbit of valid one-block extensions.
std::vector<Extension> extensions(const MmpDiagram& d, const GenerationParams& p);

/// True iff block `block_index` of `child` lies in the orbit of the
/// canonical deletion block: the eligible block of largest canonical
/// position, where eligible means removal keeps the diagram connected
/// when `require_connected` is set.
bool is_canonical_extension(const MmpDiagram& child, std::size_t block_index, bool require_connected);

/// Same, locating e's block as the last block of `child` = e.apply(parent).
bool is_canonical_extension(const MmpDiagram& child, const Extension& e, bool require_connected);

using DiagramSink = std::function<void(const MmpDiagram&)>;

/// Emits every isomorphism class of diagrams with exactly target_blocks
/// blocks that descends from `d`, each once. Returns the number emitted.
std::uint64_t scan(const MmpDiagram& d, const GenerationParams& p, const DiagramSink& emit,
                   const SearchBudget& budget = {}, GenerationStats* stats = nullptr);

struct GenerateOptions {
  SearchBudget budget;
  unsigned workers = 1;  // > 1 explores subtrees concurrently; emission order may differ
};

/// Runs scan from the empty diagram.
GenerationStats generate_all(const GenerationParams& p, const DiagramSink& emit,
                             const GenerateOptions& options = {});

std::vector<MmpDiagram> generate_all(const GenerationParams& p);

}  // namespace mmp
