#include "mmp/generator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "mmp/canonical.hpp"
#include "mmp/states.hpp"

namespace mmp {

// Filters --------------------------------------------------------------------

namespace {

const std::vector<DiagramFilter>& registry() {
  static const std::vector<DiagramFilter> filters = {
      {"non-01-colorable", false, [](const MmpDiagram& d) { return !admits_01_state(d).colorable; }},
      {"stateless", false, [](const MmpDiagram& d) { return !state_feasibility(d).feasible; }},
      {"01-colorable", true, [](const MmpDiagram& d) { return admits_01_state(d).colorable; }},
      {"admits-state", true, [](const MmpDiagram& d) { return state_feasibility(d).feasible; }},
  };
  return filters;
}

}  // namespace

const DiagramFilter& filter_by_name(std::string_view name) {
  for (const auto& f : registry()) {
    if (f.name == name) return f;
  }
  throw std::invalid_argument("unknown filter '" + std::string(name) + "'");
}

std::vector<std::string> filter_names() {
  std::vector<std::string> out;
  for (const auto& f : registry()) out.push_back(f.name);
  return out;
}

void GenerationParams::check() const {
  if (target_blocks < 1) throw std::invalid_argument("target block count must be at least 1");
  if (block_size_min < 2) throw std::invalid_argument("block size must be at least 2");
  if (block_size_min > block_size_max) throw std::invalid_argument("empty block size range");
  if (max_vertices < 0) throw std::invalid_argument("negative vertex limit");
  for (const auto& f : filters) filter_by_name(f);
}

std::string GenerationStats::summary() const {
  std::string s = "nodes=" + std::to_string(nodes) + " emitted=" + std::to_string(emitted) +
                  " candidates=" + std::to_string(candidates) + " per-level=";
  for (std::size_t i = 0; i < per_level.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(per_level[i]);
  }
  return s;
}

// Extensions -------------------------------------------------------------------

Block Extension::new_block(int parent_vertex_count) const {
  Block b = existing;
  for (int i = 0; i < fresh; ++i) b.push_back(parent_vertex_count + i);
  return b;
}

MmpDiagram Extension::apply(const MmpDiagram& parent) const {
  return parent.with_block(new_block(parent.vertex_count()));
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Calls f(subset) for all k-subsets of [0, n) in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n) return;
  std::vector<Vertex> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    f(s);
    int i = k - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++s[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

std::vector<Extension> extensions(const MmpDiagram& d, const GenerationParams& p) {
  const int n = d.vertex_count();
  const int max_v = p.effective_max_vertices();
  const auto incidence = d.blocks_of_vertex();

  std::vector<char> in_small_block(static_cast<std::size_t>(n), 0);
  for (const Block& b : d.blocks()) {
    if (b.size() < 3) {
      for (Vertex v : b) in_small_block[static_cast<std::size_t>(v)] = 1;
    }
  }
  std::vector<Block> sorted_blocks;
  for (const Block& b : d.blocks()) {
    Block s = b;
    std::sort(s.begin(), s.end());
    sorted_blocks.push_back(std::move(s));
  }
  std::sort(sorted_blocks.begin(), sorted_blocks.end());

  std::vector<Extension> candidates;
  std::map<std::pair<std::vector<Vertex>, int>, std::size_t> index;
  for (int s = 0; s <= std::min(p.block_size_max, n); ++s) {
    if (s == 0 && p.require_connected && n > 0) continue;
    for_each_subset(n, s, [&](const std::vector<Vertex>& subset) {
      for (Vertex v : subset) {
        if (in_small_block[static_cast<std::size_t>(v)]) return;  // condition 3 on the old block
      }
      for (int f = std::max(0, p.block_size_min - s); f <= p.block_size_max - s; ++f) {
        const int k = s + f;
        if (k < 1 || n + f > max_v) continue;
        if (s > 0 && k < 3) continue;  // condition 3 on the new block
        if (f == 0 && std::binary_search(sorted_blocks.begin(), sorted_blocks.end(), subset)) continue;
        index.emplace(std::make_pair(subset, f), candidates.size());
        candidates.push_back({subset, f});
      }
    });
  }
  if (candidates.empty()) return {};

  // Merge candidates along the automorphism group generators.
  const CanonicalLabeling labeling = canonical_labeling(d);
  UnionFind uf(candidates.size());
  for (const auto& g : labeling.generators) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::vector<Vertex> image;
      for (Vertex v : candidates[i].existing) image.push_back(g[static_cast<std::size_t>(v)]);
      std::sort(image.begin(), image.end());
      auto it = index.find({image, candidates[i].fresh});
      if (it != index.end()) uf.unite(i, it->second);
    }
  }
  std::vector<Extension> reps;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (uf.find(i) == i) reps.push_back(candidates[i]);
  }
  return reps;
}

bool is_canonical_extension(const MmpDiagram& child, std::size_t block_index, bool require_connected) {
  const CanonicalLabeling labeling = canonical_labeling(child);
  std::vector<std::size_t> by_position(child.block_count());
  for (std::size_t j = 0; j < child.block_count(); ++j) {
    by_position[static_cast<std::size_t>(labeling.block_position[j])] = j;
  }
  std::size_t chosen = child.block_count();
  for (std::size_t p = child.block_count(); p-- > 0;) {
    const std::size_t j = by_position[p];
    if (!require_connected || is_connected(child.without_block(j))) {
      chosen = j;
      break;
    }
  }
  if (chosen == child.block_count()) return false;
  const auto orbits = block_orbits(child, labeling);
  return orbits[chosen] == orbits[block_index];
}

bool is_canonical_extension(const MmpDiagram& child, const Extension& e, bool require_connected) {
  if (child.block_count() == 0 || e.existing.size() + static_cast<std::size_t>(e.fresh) != child.block(child.block_count() - 1).size()) {
    return false;
  }
  return is_canonical_extension(child, child.block_count() - 1, require_connected);
}

// Search -----------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

class Scanner {
 public:
  Scanner(const GenerationParams& p, const DiagramSink& emit, const SearchBudget& budget,
          std::atomic<std::uint64_t>& shared_nodes, Clock::time_point start, const std::atomic<bool>* stop)
      : p_(p), emit_(emit), budget_(budget), shared_nodes_(shared_nodes), start_(start), stop_(stop) {
    for (const auto& name : p.filters) {
      const DiagramFilter& f = filter_by_name(name);
      filters_.push_back(&f);
      if (f.hereditary && p.prune_hereditary) pruning_.push_back(&f);
    }
    stats_.per_level.assign(static_cast<std::size_t>(p.target_blocks) + 1, 0);
  }

  void visit(const MmpDiagram& d) {
    if (static_cast<int>(d.block_count()) >= p_.target_blocks) {
      if (std::all_of(filters_.begin(), filters_.end(), [&](const DiagramFilter* f) { return f->accept(d); })) {
        ++stats_.emitted;
        emit_(d);
      }
      return;
    }
    for (const Extension& e : extensions(d, p_)) {
      ++stats_.candidates;
      MmpDiagram child = e.apply(d);
      if (!is_canonical_extension(child, child.block_count() - 1, p_.require_connected)) continue;
      count_node(child);
      if (static_cast<int>(child.block_count()) < p_.target_blocks &&
          !std::all_of(pruning_.begin(), pruning_.end(), [&](const DiagramFilter* f) { return f->accept(child); })) {
        continue;
      }
      visit(child);
    }
  }

  // Children of d that the search would descend into, without recursing.
  std::vector<MmpDiagram> children(const MmpDiagram& d) {
    std::vector<MmpDiagram> out;
    for (const Extension& e : extensions(d, p_)) {
      ++stats_.candidates;
      MmpDiagram child = e.apply(d);
      if (!is_canonical_extension(child, child.block_count() - 1, p_.require_connected)) continue;
      count_node(child);
      if (static_cast<int>(child.block_count()) < p_.target_blocks &&
          !std::all_of(pruning_.begin(), pruning_.end(), [&](const DiagramFilter* f) { return f->accept(child); })) {
        continue;
      }
      out.push_back(std::move(child));
    }
    return out;
  }

  GenerationStats& stats() { return stats_; }

 private:
  void count_node(const MmpDiagram& child) {
    ++stats_.nodes;
    ++stats_.per_level[child.block_count()];
    const std::uint64_t total = shared_nodes_.fetch_add(1) + 1;
    if (stop_ != nullptr && stop_->load()) throw SearchBudgetExceeded("search stopped", stats_);
    if (budget_.max_nodes > 0 && total > budget_.max_nodes) {
      throw SearchBudgetExceeded("node budget of " + std::to_string(budget_.max_nodes) + " exceeded", stats_);
    }
    if (budget_.max_seconds > 0 && (stats_.nodes & 63) == 0) {
      const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
      if (elapsed > budget_.max_seconds) {
        throw SearchBudgetExceeded("time budget of " + std::to_string(budget_.max_seconds) + " s exceeded", stats_);
      }
    }
  }

  const GenerationParams& p_;
  const DiagramSink& emit_;
  SearchBudget budget_;
  std::atomic<std::uint64_t>& shared_nodes_;
  Clock::time_point start_;
  const std::atomic<bool>* stop_;
  std::vector<const DiagramFilter*> filters_;
  std::vector<const DiagramFilter*> pruning_;
  GenerationStats stats_;
};

void merge(GenerationStats& into, const GenerationStats& from) {
  into.nodes += from.nodes;
  into.emitted += from.emitted;
  into.candidates += from.candidates;
  if (into.per_level.size() < from.per_level.size()) into.per_level.resize(from.per_level.size(), 0);
  for (std::size_t i = 0; i < from.per_level.size(); ++i) into.per_level[i] += from.per_level[i];
}

}  // namespace

std::uint64_t scan(const MmpDiagram& d, const GenerationParams& p, const DiagramSink& emit,
                   const SearchBudget& budget, GenerationStats* stats) {
  p.check();
  std::atomic<std::uint64_t> nodes{0};
  Scanner scanner(p, emit, budget, nodes, Clock::now(), nullptr);
  try {
    scanner.visit(d);
  } catch (const SearchBudgetExceeded&) {
    if (stats != nullptr) *stats = scanner.stats();
    throw;
  }
  if (stats != nullptr) *stats = scanner.stats();
  return scanner.stats().emitted;
}

GenerationStats generate_all(const GenerationParams& p, const DiagramSink& emit, const GenerateOptions& options) {
  p.check();
  const auto start = Clock::now();
  std::atomic<std::uint64_t> nodes{0};
  if (options.workers <= 1) {
    Scanner scanner(p, emit, options.budget, nodes, start, nullptr);
    scanner.visit(MmpDiagram());
    return scanner.stats();
  }

  // Expand breadth-first until there is enough work to share, then hand
  // whole subtrees to workers.
  std::mutex mu;
  DiagramSink locked_emit = [&](const MmpDiagram& d) {
    std::lock_guard<std::mutex> lock(mu);
    emit(d);
  };
  GenerationStats total;
  std::vector<MmpDiagram> frontier{MmpDiagram()};
  {
    Scanner scanner(p, locked_emit, options.budget, nodes, start, nullptr);
    while (!frontier.empty() && frontier.size() < 4 * options.workers &&
           static_cast<int>(frontier.front().block_count()) < p.target_blocks) {
      std::vector<MmpDiagram> next;
      for (const auto& d : frontier) {
        for (auto& c : scanner.children(d)) next.push_back(std::move(c));
      }
      frontier = std::move(next);
    }
    merge(total, scanner.stats());
  }

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> stop{false};
  std::optional<SearchBudgetExceeded> failure;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < options.workers; ++w) {
    pool.emplace_back([&] {
      Scanner scanner(p, locked_emit, options.budget, nodes, start, &stop);
      try {
        while (true) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= frontier.size() || stop.load()) break;
          scanner.visit(frontier[i]);
        }
      } catch (const SearchBudgetExceeded& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure.emplace(e);
        stop.store(true);
      }
      std::lock_guard<std::mutex> lock(mu);
      merge(total, scanner.stats());
    });
  }
  for (auto& t : pool) t.join();
  if (failure) throw SearchBudgetExceeded(failure->what(), total);
  return total;
}

std::vector<MmpDiagram> generate_all(const GenerationParams& p) {
  std::vector<MmpDiagram> out;
  generate_all(p, [&](const MmpDiagram& d) { out.push_back(d); });
  return out;
}

}  // namespace mmp
