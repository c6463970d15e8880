#include "mmp/canonical.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace mmp {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[static_cast<std::size_t>(a)] = b;  // keep the smallest member as root
  }

 private:
  std::vector<int> parent_;
};

using Certificate = std::vector<int>;

// Individualization-refinement search over ordered partitions of the
// incidence graph. A partition is stored as a color per node, where a color
// is the start position of the node's cell.
class Searcher {
 public:
  explicit Searcher(const MmpDiagram& d) : n_(d.vertex_count()) {
    nodes_ = n_ + static_cast<int>(d.block_count());
    adj_.resize(static_cast<std::size_t>(nodes_));
    for (std::size_t j = 0; j < d.block_count(); ++j) {
      const int b = n_ + static_cast<int>(j);
      for (Vertex v : d.block(j)) {
        adj_[static_cast<std::size_t>(b)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(b);
      }
    }
  }

  void run() {
    std::vector<int> color(static_cast<std::size_t>(nodes_));
    for (int u = 0; u < nodes_; ++u) color[static_cast<std::size_t>(u)] = u < n_ ? 0 : n_;
    std::vector<int> prefix;
    search(std::move(color), prefix, true);
  }

  int vertex_count() const { return n_; }
  const std::vector<int>& best_positions() const { return best_pos_; }
  const std::vector<NodePermutation>& generators() const { return gens_; }
  const mpz_class& group_size() const { return group_size_; }

 private:
  static constexpr int kContinue = INT_MAX;

  void refine(std::vector<int>& color) const {
    std::vector<int> order(static_cast<std::size_t>(nodes_));
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(nodes_));
    int cells = count_cells(color);
    while (true) {
      for (int u = 0; u < nodes_; ++u) {
        auto& s = sig[static_cast<std::size_t>(u)];
        s.clear();
        for (int w : adj_[static_cast<std::size_t>(u)]) s.push_back(color[static_cast<std::size_t>(w)]);
        std::sort(s.begin(), s.end());
      }
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int ca = color[static_cast<std::size_t>(a)];
        const int cb = color[static_cast<std::size_t>(b)];
        if (ca != cb) return ca < cb;
        return sig[static_cast<std::size_t>(a)] < sig[static_cast<std::size_t>(b)];
      });
      std::vector<int> next(static_cast<std::size_t>(nodes_));
      int start = 0;
      int new_cells = 0;
      for (int i = 0; i < nodes_; ++i) {
        const int u = order[static_cast<std::size_t>(i)];
        if (i == 0) {
          new_cells = 1;
        } else {
          const int p = order[static_cast<std::size_t>(i - 1)];
          if (color[static_cast<std::size_t>(p)] != color[static_cast<std::size_t>(u)] ||
              sig[static_cast<std::size_t>(p)] != sig[static_cast<std::size_t>(u)]) {
            start = i;
            ++new_cells;
          }
        }
        next[static_cast<std::size_t>(u)] = start;
      }
      color.swap(next);
      if (new_cells == cells) return;
      cells = new_cells;
    }
  }

  int count_cells(const std::vector<int>& color) const {
    std::vector<int> c = color;
    std::sort(c.begin(), c.end());
    return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
  }

  // Members of the first non-singleton cell, or empty when discrete.
  std::vector<int> target_cell(const std::vector<int>& color) const {
    std::vector<int> size(static_cast<std::size_t>(nodes_), 0);
    for (int c : color) ++size[static_cast<std::size_t>(c)];
    for (int c = 0; c < nodes_; ++c) {
      if (size[static_cast<std::size_t>(c)] > 1) {
        std::vector<int> members;
        for (int u = 0; u < nodes_; ++u) {
          if (color[static_cast<std::size_t>(u)] == c) members.push_back(u);
        }
        return members;
      }
    }
    return {};
  }

  static void individualize(std::vector<int>& color, int node) {
    const int c = color[static_cast<std::size_t>(node)];
    for (std::size_t u = 0; u < color.size(); ++u) {
      if (static_cast<int>(u) != node && color[u] == c) color[u] = c + 1;
    }
  }

  Certificate certificate(const std::vector<int>& pos) const {
    std::vector<int> inv(static_cast<std::size_t>(nodes_));
    for (int u = 0; u < nodes_; ++u) inv[static_cast<std::size_t>(pos[static_cast<std::size_t>(u)])] = u;
    Certificate cert;
    for (int p = n_; p < nodes_; ++p) {
      const int b = inv[static_cast<std::size_t>(p)];
      std::vector<int> members;
      for (int v : adj_[static_cast<std::size_t>(b)]) members.push_back(pos[static_cast<std::size_t>(v)]);
      std::sort(members.begin(), members.end());
      cert.push_back(static_cast<int>(members.size()));
      cert.insert(cert.end(), members.begin(), members.end());
    }
    return cert;
  }

  void add_generator(const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<int> inv(static_cast<std::size_t>(nodes_));
    for (int u = 0; u < nodes_; ++u) inv[static_cast<std::size_t>(to[static_cast<std::size_t>(u)])] = u;
    NodePermutation g(static_cast<std::size_t>(nodes_));
    bool identity = true;
    for (int u = 0; u < nodes_; ++u) {
      g[static_cast<std::size_t>(u)] = inv[static_cast<std::size_t>(from[static_cast<std::size_t>(u)])];
      identity = identity && g[static_cast<std::size_t>(u)] == u;
    }
    if (!identity) gens_.push_back(std::move(g));
  }

  UnionFind orbits_fixing(const std::vector<int>& prefix) const {
    UnionFind uf(nodes_);
    for (const auto& g : gens_) {
      const bool fixes = std::all_of(prefix.begin(), prefix.end(),
                                     [&](int p) { return g[static_cast<std::size_t>(p)] == p; });
      if (!fixes) continue;
      for (int u = 0; u < nodes_; ++u) uf.unite(u, g[static_cast<std::size_t>(u)]);
    }
    return uf;
  }

  int leaf(const std::vector<int>& pos, const std::vector<int>& prefix) {
    Certificate cert = certificate(pos);
    if (!have_first_) {
      have_first_ = true;
      first_pos_ = pos;
      first_cert_ = cert;
      best_pos_ = pos;
      best_cert_ = std::move(cert);
      return kContinue;
    }
    if (cert == first_cert_) {
      add_generator(first_pos_, pos);
      // The whole subtree below the divergence point is an image of the
      // first-path subtree; resume at the divergence node.
      std::size_t k = 0;
      while (k < prefix.size() && k < first_path_.size() && prefix[k] == first_path_[k]) ++k;
      return static_cast<int>(k);
    }
    if (cert == best_cert_) {
      add_generator(best_pos_, pos);
    } else if (cert < best_cert_) {
      best_pos_ = pos;
      best_cert_ = std::move(cert);
    }
    return kContinue;
  }

  int search(std::vector<int> color, std::vector<int>& prefix, bool on_first_path) {
    refine(color);
    const std::vector<int> cell = target_cell(color);
    if (cell.empty()) return leaf(color, prefix);

    const int depth = static_cast<int>(prefix.size());
    std::vector<int> explored;
    for (std::size_t i = 0; i < cell.size(); ++i) {
      const int child = cell[i];
      if (!explored.empty()) {
        UnionFind uf = orbits_fixing(prefix);
        const int root = uf.find(child);
        const bool seen = std::any_of(explored.begin(), explored.end(),
                                      [&](int e) { return uf.find(e) == root; });
        if (seen) continue;
      }
      const bool child_first = on_first_path && i == 0;
      if (child_first) first_path_.push_back(child);
      std::vector<int> child_color = color;
      individualize(child_color, child);
      prefix.push_back(child);
      const int r = search(std::move(child_color), prefix, child_first);
      prefix.pop_back();
      explored.push_back(child);
      if (r < depth) return r;
    }
    if (on_first_path) {
      UnionFind uf = orbits_fixing(prefix);
      const int root = uf.find(first_path_[static_cast<std::size_t>(depth)]);
      long orbit = 0;
      for (int u : cell) orbit += uf.find(u) == root ? 1 : 0;
      group_size_ *= orbit;
    }
    return kContinue;
  }

  int n_ = 0;
  int nodes_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> first_path_;
  bool have_first_ = false;
  std::vector<int> first_pos_;
  Certificate first_cert_;
  std::vector<int> best_pos_;
  Certificate best_cert_;
  std::vector<NodePermutation> gens_;
  mpz_class group_size_ = 1;
};

std::vector<int> orbit_roots(int nodes, const std::vector<NodePermutation>& gens, int from, int to) {
  UnionFind uf(nodes);
  for (const auto& g : gens) {
    for (int u = 0; u < nodes; ++u) uf.unite(u, g[static_cast<std::size_t>(u)]);
  }
  std::vector<int> out;
  for (int u = from; u < to; ++u) out.push_back(uf.find(u) - from);
  return out;
}

}  // namespace

CanonicalLabeling canonical_labeling(const MmpDiagram& d) {
  Searcher searcher(d);
  searcher.run();
  const int n = d.vertex_count();
  const auto& pos = searcher.best_positions();

  CanonicalLabeling out;
  out.vertex_position.assign(pos.begin(), pos.begin() + n);
  for (std::size_t j = 0; j < d.block_count(); ++j) {
    out.block_position.push_back(pos[static_cast<std::size_t>(n) + j] - n);
  }
  out.generators = searcher.generators();
  out.automorphism_count = searcher.group_size();

  std::vector<Block> blocks(d.block_count());
  for (std::size_t j = 0; j < d.block_count(); ++j) {
    Block b;
    for (Vertex v : d.block(j)) b.push_back(out.vertex_position[static_cast<std::size_t>(v)]);
    std::sort(b.begin(), b.end());
    blocks[static_cast<std::size_t>(out.block_position[j])] = std::move(b);
  }
  // Renumber by first appearance so the canonical diagram survives a
  // serialize/parse round trip unchanged.
  std::vector<int> renumber(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (Block& b : blocks) {
    for (Vertex& v : b) {
      int& r = renumber[static_cast<std::size_t>(v)];
      if (r < 0) r = next++;
      v = r;
    }
    std::sort(b.begin(), b.end());
  }
  for (int& r : renumber)
    if (r < 0) r = next++;
  for (int& p : out.vertex_position) p = renumber[static_cast<std::size_t>(p)];
  out.canonical_diagram = MmpDiagram(n, std::move(blocks));
  return out;
}

CanonicalForm canonical_form(const MmpDiagram& d) {
  CanonicalLabeling l = canonical_labeling(d);
  return {serialize_mmp(l.canonical_diagram), l.automorphism_count};
}

bool are_isomorphic(const MmpDiagram& a, const MmpDiagram& b) {
  if (a.vertex_count() != b.vertex_count() || a.block_count() != b.block_count()) return false;
  return canonical_form(a).canonical_text == canonical_form(b).canonical_text;
}

std::vector<int> vertex_orbits(const MmpDiagram& d, const CanonicalLabeling& labeling) {
  const int nodes = d.vertex_count() + static_cast<int>(d.block_count());
  return orbit_roots(nodes, labeling.generators, 0, d.vertex_count());
}

std::vector<int> block_orbits(const MmpDiagram& d, const CanonicalLabeling& labeling) {
  const int nodes = d.vertex_count() + static_cast<int>(d.block_count());
  return orbit_roots(nodes, labeling.generators, d.vertex_count(), nodes);
}

}  // namespace mmp
