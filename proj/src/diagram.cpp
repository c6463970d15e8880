#include "mmp/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <unordered_map>

namespace mmp {

std::string default_label(Vertex v, int vertex_count) {
  if (vertex_count <= static_cast<int>(kLabelAlphabet.size()) && v >= 0 &&
      v < static_cast<int>(kLabelAlphabet.size())) {
    return std::string(1, kLabelAlphabet[static_cast<std::size_t>(v)]);
  }
  return std::to_string(v + 1);
}

namespace {

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) out.push_back(default_label(v, n));
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

MmpDiagram::MmpDiagram(int vertex_count, std::vector<Block> blocks)
    : MmpDiagram(vertex_count, std::move(blocks), default_labels(vertex_count)) {}

MmpDiagram::MmpDiagram(int vertex_count, std::vector<Block> blocks, std::vector<std::string> labels)
    : vertex_count_(vertex_count), blocks_(std::move(blocks)), labels_(std::move(labels)) {
  if (vertex_count_ < 0) throw std::invalid_argument("negative vertex count");
  if (labels_.size() != static_cast<std::size_t>(vertex_count_)) {
    throw std::invalid_argument("label count does not match vertex count");
  }
  std::vector<int> seen(static_cast<std::size_t>(vertex_count_), -1);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (Vertex v : blocks_[i]) {
      if (v < 0 || v >= vertex_count_) {
        throw std::invalid_argument("block " + std::to_string(i) + " references vertex " +
                                    std::to_string(v) + " out of range");
      }
      if (seen[static_cast<std::size_t>(v)] == static_cast<int>(i)) {
        throw std::invalid_argument("block " + std::to_string(i) + " repeats vertex " +
                                    std::to_string(v));
      }
      seen[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  }
}

std::optional<Vertex> MmpDiagram::vertex_of(std::string_view label) const {
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    if (labels_[v] == label) return static_cast<Vertex>(v);
  }
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> MmpDiagram::blocks_of_vertex() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(vertex_count_));
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (Vertex v : blocks_[i]) out[static_cast<std::size_t>(v)].push_back(i);
  }
  return out;
}

MmpDiagram MmpDiagram::with_block(Block b) const {
  int n = vertex_count_;
  for (Vertex v : b) n = std::max(n, v + 1);
  std::vector<std::string> labels = labels_;
  for (int v = vertex_count_; v < n; ++v) labels.push_back(default_label(v, n));
  // Default labels change once the diagram outgrows the alphabet.
  if (n > static_cast<int>(kLabelAlphabet.size()) && labels_ == default_labels(vertex_count_)) {
    labels = default_labels(n);
  }
  std::vector<Block> blocks = blocks_;
  blocks.push_back(std::move(b));
  return MmpDiagram(n, std::move(blocks), std::move(labels));
}

MmpDiagram MmpDiagram::without_block(std::size_t index) const {
  if (index >= blocks_.size()) throw std::out_of_range("block index");
  std::vector<char> used(static_cast<std::size_t>(vertex_count_), 0);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i == index) continue;
    for (Vertex v : blocks_[i]) used[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<Vertex> renumber(static_cast<std::size_t>(vertex_count_), -1);
  std::vector<std::string> labels;
  int n = 0;
  for (int v = 0; v < vertex_count_; ++v) {
    if (used[static_cast<std::size_t>(v)]) {
      renumber[static_cast<std::size_t>(v)] = n++;
      labels.push_back(labels_[static_cast<std::size_t>(v)]);
    }
  }
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i == index) continue;
    Block b;
    for (Vertex v : blocks_[i]) b.push_back(renumber[static_cast<std::size_t>(v)]);
    blocks.push_back(std::move(b));
  }
  return MmpDiagram(n, std::move(blocks), std::move(labels));
}

// Parsing ------------------------------------------------------------------

namespace {

class LabelTable {
 public:
  Vertex intern(const std::string& label) {
    auto [it, inserted] = ids_.try_emplace(label, static_cast<Vertex>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  int size() const { return static_cast<int>(labels_.size()); }
  std::vector<std::string> take() { return std::move(labels_); }

 private:
  std::unordered_map<std::string, Vertex> ids_;
  std::vector<std::string> labels_;
};

void add_to_block(Block& block, Vertex v, std::size_t offset) {
  if (std::find(block.begin(), block.end(), v) != block.end()) {
    throw MmpParseError("duplicate vertex in block", offset);
  }
  block.push_back(v);
}

// Checks that only whitespace follows the period at `period`.
void expect_tail(std::string_view line, std::size_t period) {
  for (std::size_t i = period + 1; i < line.size(); ++i) {
    if (!is_space(line[i])) throw MmpParseError("unexpected character after period", i);
  }
}

MmpDiagram parse_letters(std::string_view line) {
  LabelTable table;
  std::vector<Block> blocks;
  Block current;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == ',' || c == '.') {
      if (current.empty()) throw MmpParseError("empty block", i);
      blocks.push_back(std::move(current));
      current.clear();
      if (c == '.') {
        expect_tail(line, i);
        const int n = table.size();
        return MmpDiagram(n, std::move(blocks), table.take());
      }
      continue;
    }
    if (kLabelAlphabet.find(c) == std::string_view::npos) {
      throw MmpParseError(std::string("unknown character '") + c + "'", i);
    }
    add_to_block(current, table.intern(std::string(1, c)), i);
  }
  throw MmpParseError("missing terminating period", line.size());
}

MmpDiagram parse_numeric(std::string_view line) {
  LabelTable table;
  std::vector<Block> blocks;
  Block current;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c == ',' || c == '.') {
      if (current.empty()) throw MmpParseError("empty block", i);
      blocks.push_back(std::move(current));
      current.clear();
      if (c == '.') {
        expect_tail(line, i);
        const int n = table.size();
        return MmpDiagram(n, std::move(blocks), table.take());
      }
      ++i;
      continue;
    }
    if (c < '0' || c > '9') throw MmpParseError(std::string("unknown character '") + c + "'", i);
    const std::size_t start = i;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    std::string digits(line.substr(start, i - start));
    if (digits[0] == '0') throw MmpParseError("vertex numbers are 1-based without leading zeros", start);
    add_to_block(current, table.intern(digits), start);
  }
  throw MmpParseError("missing terminating period", line.size());
}

}  // namespace

MmpDiagram parse_mmp(std::string_view line, MmpFormat format) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  if (format == MmpFormat::Auto) {
    const std::size_t period = line.find('.');
    const std::string_view head = line.substr(0, period);
    format = head.find_first_of(" \t") != std::string_view::npos ? MmpFormat::Numeric
                                                                  : MmpFormat::Letters;
  }
  return format == MmpFormat::Numeric ? parse_numeric(line) : parse_letters(line);
}

std::string serialize_mmp(const MmpDiagram& d, MmpFormat format) {
  const bool letters = format != MmpFormat::Numeric &&
                       d.vertex_count() <= static_cast<int>(kLabelAlphabet.size());
  std::string out;
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    if (i > 0) out += ',';
    const Block& b = d.block(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (letters) {
        out += kLabelAlphabet[static_cast<std::size_t>(b[j])];
      } else {
        if (j > 0) out += ' ';
        out += std::to_string(b[j] + 1);
      }
    }
  }
  out += '.';
  return out;
}

bool is_comment_or_blank(std::string_view line) noexcept {
  for (char c : line) {
    if (is_space(c)) continue;
    return c == '#';
  }
  return true;
}

bool is_connected(const MmpDiagram& d) {
  const int n = d.vertex_count();
  if (n == 0) return true;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const Block& b : d.blocks()) {
    for (std::size_t j = 1; j < b.size(); ++j) parent[static_cast<std::size_t>(find(b[j]))] = find(b[0]);
  }
  const int root = find(0);
  for (int v = 1; v < n; ++v) {
    if (find(v) != root) return false;
  }
  return true;
}

// Validation ---------------------------------------------------------------

int condition_id(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::UncoveredVertex: return 1;
    case ViolationKind::SmallBlock: return 2;
    case ViolationKind::SmallIntersectingBlock: return 3;
    case ViolationKind::DuplicateBlock: return 0;
  }
  return 0;
}

namespace {

template <typename T>
std::string join_numbers(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) s += ' ';
    s += std::to_string(xs[i]);
  }
  return s;
}

}  // namespace

std::string Violation::describe() const {
  switch (kind) {
    case ViolationKind::UncoveredVertex:
      return "condition 1: vertex " + join_numbers(vertices) + " belongs to no block";
    case ViolationKind::SmallBlock:
      return "condition 2: block " + join_numbers(blocks) + " has fewer than 2 vertices";
    case ViolationKind::SmallIntersectingBlock:
      return "condition 3: block " + std::to_string(blocks.front()) +
             " intersects another block but has fewer than 3 vertices (shared: " +
             join_numbers(vertices) + ")";
    case ViolationKind::DuplicateBlock:
      return "duplicate block: blocks " + join_numbers(blocks) + " have the same vertex set";
  }
  return {};
}

std::string Warning::describe() const {
  switch (kind) {
    case WarningKind::LargeIntersection:
      return "blocks " + join_numbers(blocks) + " share vertices " + join_numbers(vertices);
    case WarningKind::ShortLoop:
      return "loop of order " + std::to_string(blocks.size()) + " through blocks " +
             join_numbers(blocks);
  }
  return {};
}

namespace {

std::vector<Vertex> intersection(const Block& a, const Block& b) {
  std::vector<Vertex> out;
  for (Vertex v : a) {
    if (std::find(b.begin(), b.end(), v) != b.end()) out.push_back(v);
  }
  return out;
}

// A loop through blocks b[0..k) in this cyclic order exists when consecutive
// blocks meet in pairwise distinct vertices.
bool has_loop(const std::vector<std::vector<std::vector<Vertex>>>& meet,
              const std::vector<std::size_t>& cycle, std::vector<Vertex>& chosen, std::size_t pos) {
  if (pos == cycle.size()) return true;
  const std::size_t a = cycle[pos];
  const std::size_t b = cycle[(pos + 1) % cycle.size()];
  for (Vertex v : meet[a][b]) {
    if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
    chosen.push_back(v);
    if (has_loop(meet, cycle, chosen, pos + 1)) return true;
    chosen.pop_back();
  }
  return false;
}

void find_short_loops(const MmpDiagram& d, std::vector<Warning>& out) {
  const std::size_t nb = d.block_count();
  std::vector<std::vector<std::vector<Vertex>>> meet(nb, std::vector<std::vector<Vertex>>(nb));
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = i + 1; j < nb; ++j) {
      meet[i][j] = intersection(d.block(i), d.block(j));
      meet[j][i] = meet[i][j];
    }
  }
  auto try_cycle = [&](std::vector<std::size_t> cycle) {
    std::vector<Vertex> chosen;
    if (has_loop(meet, cycle, chosen, 0)) {
      out.push_back({WarningKind::ShortLoop, std::move(cycle), std::move(chosen)});
      return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = i + 1; j < nb; ++j) {
      if (meet[i][j].empty()) continue;
      for (std::size_t k = j + 1; k < nb; ++k) {
        try_cycle({i, j, k});
      }
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = i + 1; j < nb; ++j) {
      for (std::size_t k = j + 1; k < nb; ++k) {
        for (std::size_t l = k + 1; l < nb; ++l) {
          // The three distinct cyclic orders of four blocks.
          if (try_cycle({i, j, k, l})) continue;
          if (try_cycle({i, j, l, k})) continue;
          try_cycle({i, k, j, l});
        }
      }
    }
  }
}

}  // namespace

ValidationReport validate(const MmpDiagram& d, const ValidationOptions& options) {
  ValidationReport report;
  const auto incidence = d.blocks_of_vertex();

  for (int v = 0; v < d.vertex_count(); ++v) {
    if (incidence[static_cast<std::size_t>(v)].empty()) {
      report.violations.push_back({ViolationKind::UncoveredVertex, {v}, {}});
    }
  }
  if (d.vertex_count() >= 2) {
    for (std::size_t i = 0; i < d.block_count(); ++i) {
      if (d.block(i).size() < 2) report.violations.push_back({ViolationKind::SmallBlock, d.block(i), {i}});
    }
  }
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    const Block& b = d.block(i);
    if (b.size() >= 3) continue;
    std::vector<Vertex> shared;
    for (Vertex v : b) {
      if (incidence[static_cast<std::size_t>(v)].size() > 1) shared.push_back(v);
    }
    if (!shared.empty()) {
      report.violations.push_back({ViolationKind::SmallIntersectingBlock, std::move(shared), {i}});
    }
  }
  std::vector<std::pair<Block, std::size_t>> sorted;
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    Block b = d.block(i);
    std::sort(b.begin(), b.end());
    sorted.emplace_back(std::move(b), i);
  }
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].first == sorted[i - 1].first) {
      report.violations.push_back(
          {ViolationKind::DuplicateBlock, sorted[i].first, {sorted[i - 1].second, sorted[i].second}});
    }
  }

  if (options.strict) {
    for (std::size_t i = 0; i < d.block_count(); ++i) {
      for (std::size_t j = i + 1; j < d.block_count(); ++j) {
        auto shared = intersection(d.block(i), d.block(j));
        if (shared.size() >= 2) {
          report.warnings.push_back({WarningKind::LargeIntersection, {i, j}, std::move(shared)});
        }
      }
    }
    find_short_loops(d, report.warnings);
  }
  report.passed = report.violations.empty();
  return report;
}

}  // namespace mmp
