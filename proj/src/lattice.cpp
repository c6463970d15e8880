#include "mmp/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mmp {

namespace {

using Table = std::vector<std::vector<Element>>;
using Relation = std::vector<std::vector<char>>;

struct BoundsFailure {
  Element x, y;
  Element b1, b2;
  bool upper;
};

// glb (upper == false) or lub (upper == true) of every pair.
std::optional<BoundsFailure> bound_table(const Relation& leq, bool upper, Table& out) {
  const std::size_t n = leq.size();
  std::vector<int> rank(n, 0);  // size of the down-set (lub) or up-set (glb)
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) rank[a] += upper ? leq[b][a] : leq[a][b];
  }
  out.assign(n, std::vector<Element>(n, -1));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x; y < n; ++y) {
      std::vector<std::size_t> bounds;
      for (std::size_t z = 0; z < n; ++z) {
        const bool ok = upper ? (leq[x][z] && leq[y][z]) : (leq[z][x] && leq[z][y]);
        if (ok) bounds.push_back(z);
      }
      // The candidate extreme bound has the smallest up-set (lub) or
      // down-set (glb) among the bounds.
      std::size_t best = n;
      for (std::size_t z : bounds) {
        if (best == n || rank[z] < rank[best]) best = z;
      }
      std::size_t clash = n;
      for (std::size_t z : bounds) {
        const bool below = upper ? leq[best][z] : leq[z][best];
        if (!below) {
          clash = z;
          break;
        }
      }
      if (best == n || clash != n) {
        // Report two incomparable extreme bounds.
        std::vector<std::size_t> extreme;
        for (std::size_t z : bounds) {
          bool minimal = true;
          for (std::size_t w : bounds) {
            if (w != z && (upper ? leq[w][z] : leq[z][w])) {
              minimal = false;
              break;
            }
          }
          if (minimal) extreme.push_back(z);
        }
        BoundsFailure f{static_cast<Element>(x), static_cast<Element>(y), -1, -1, upper};
        if (extreme.size() >= 2) {
          f.b1 = static_cast<Element>(extreme[0]);
          f.b2 = static_cast<Element>(extreme[1]);
        }
        return f;
      }
      out[x][y] = out[y][x] = static_cast<Element>(best);
    }
  }
  return std::nullopt;
}

// 64-bit rows for the transitive closure.
class BitMatrix {
 public:
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  bool get(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U; }
  void close_transitively() {
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (!get(i, k)) continue;
        for (std::size_t w = 0; w < words_; ++w) bits_[i * words_ + w] |= bits_[k * words_ + w];
      }
    }
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

constexpr std::size_t kMaxBlockSize = 12;

}  // namespace

OmlLattice OmlLattice::from_order(std::vector<std::vector<char>> leq, std::vector<Element> ortho) {
  const std::size_t n = leq.size();
  if (n == 0 || ortho.size() != n) throw std::invalid_argument("order and orthocomplement sizes differ");
  OmlLattice l;
  l.zero_ = l.one_ = -1;
  for (std::size_t x = 0; x < n; ++x) {
    bool bottom = true;
    bool top = true;
    for (std::size_t y = 0; y < n; ++y) {
      bottom = bottom && leq[x][y];
      top = top && leq[y][x];
    }
    if (bottom) l.zero_ = static_cast<Element>(x);
    if (top) l.one_ = static_cast<Element>(x);
  }
  if (l.zero_ < 0 || l.one_ < 0) throw std::invalid_argument("order has no bottom or no top");
  if (bound_table(leq, false, l.meet_) || bound_table(leq, true, l.join_)) {
    throw std::invalid_argument("order is not a lattice");
  }
  l.leq_ = std::move(leq);
  l.ortho_ = std::move(ortho);
  l.members_.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    l.names_.push_back(static_cast<Element>(x) == l.zero_  ? "0"
                       : static_cast<Element>(x) == l.one_ ? "1"
                                                           : "e" + std::to_string(x));
  }
  return l;
}

OmlLattice OmlLattice::with_ortho(std::vector<Element> ortho) const {
  if (ortho.size() != size()) throw std::invalid_argument("orthocomplement table size");
  OmlLattice l = *this;
  l.ortho_ = std::move(ortho);
  return l;
}

std::string OmlLattice::name(Element x) const { return names_.at(idx(x)); }

std::variant<OmlLattice, LatticeDiagnostic> build_lattice(const MmpDiagram& d) {
  if (d.block_count() == 0) throw std::invalid_argument("diagram has no blocks");
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  std::vector<Block> blocks;
  for (const Block& b : d.blocks()) {
    if (b.size() > kMaxBlockSize) {
      throw std::invalid_argument("block of " + std::to_string(b.size()) + " vertices exceeds the lattice limit of " +
                                  std::to_string(kMaxBlockSize));
    }
    Block s = b;
    std::sort(s.begin(), s.end());
    blocks.push_back(std::move(s));
    offset.push_back(total);
    total += std::size_t{1} << b.size();
  }
  auto subset = [&](std::size_t b, std::size_t mask) {
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      if (mask & (std::size_t{1} << i)) out.push_back(blocks[b][i]);
    }
    return out;
  };
  auto full = [&](std::size_t b) { return (std::size_t{1} << blocks[b].size()) - 1; };

  // Identify equal vertex sets across blocks, all full blocks, then close
  // under complementation.
  std::vector<std::pair<std::size_t, std::size_t>> pair_of(total);
  UnionFind uf(total);
  std::map<std::vector<Vertex>, std::size_t> first;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t mask = 0; mask <= full(b); ++mask) {
      const std::size_t id = offset[b] + mask;
      pair_of[id] = {b, mask};
      auto [it, inserted] = first.emplace(subset(b, mask), id);
      if (!inserted) uf.unite(id, it->second);
    }
    uf.unite(offset[b] + full(b), offset[0] + full(0));
  }
  auto complement = [&](std::size_t id) {
    const auto [b, mask] = pair_of[id];
    return offset[b] + (full(b) ^ mask);
  };
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> comp_of_root(total, total);
    for (std::size_t id = 0; id < total; ++id) {
      const std::size_t r = uf.find(id);
      const std::size_t c = complement(id);
      if (comp_of_root[r] == total) {
        comp_of_root[r] = c;
      } else if (uf.unite(comp_of_root[r], c)) {
        changed = true;
      }
    }
  }

  std::vector<Element> element_of_root(total, -1);
  std::vector<Element> element(total);
  OmlLattice l;
  for (std::size_t id = 0; id < total; ++id) {
    const std::size_t r = uf.find(id);
    if (element_of_root[r] < 0) {
      element_of_root[r] = static_cast<Element>(l.members_.size());
      l.members_.emplace_back();
    }
    element[id] = element_of_root[r];
    l.members_[static_cast<std::size_t>(element[id])].push_back({pair_of[id].first, subset(pair_of[id].first, pair_of[id].second)});
  }
  const std::size_t n = l.members_.size();
  l.zero_ = element[offset[0]];
  l.one_ = element[offset[0] + full(0)];

  for (std::size_t x = 0; x < n; ++x) {
    const auto& ms = l.members_[x];
    const auto best = std::min_element(ms.begin(), ms.end(), [](const BlockSubset& a, const BlockSubset& b) {
      return a.vertices.size() != b.vertices.size() ? a.vertices.size() < b.vertices.size() : a.vertices < b.vertices;
    });
    std::string name;
    bool single = std::all_of(best->vertices.begin(), best->vertices.end(), [&](Vertex v) { return d.label(v).size() == 1; });
    for (std::size_t i = 0; i < best->vertices.size(); ++i) {
      if (i > 0 && !single) name += '.';
      name += d.label(best->vertices[i]);
    }
    if (static_cast<Element>(x) == l.zero_) name = "0";
    if (static_cast<Element>(x) == l.one_) name = "1";
    l.names_.push_back(name);
  }

  const auto incidence = d.blocks_of_vertex();
  l.atom_of_vertex_.assign(static_cast<std::size_t>(d.vertex_count()), -1);
  std::vector<Vertex> vertex_of_element(n, -1);
  for (Vertex v = 0; v < d.vertex_count(); ++v) {
    const auto& inc = incidence[static_cast<std::size_t>(v)];
    if (inc.empty()) continue;
    const std::size_t b = inc.front();
    const auto pos = std::find(blocks[b].begin(), blocks[b].end(), v) - blocks[b].begin();
    const Element e = element[offset[b] + (std::size_t{1} << pos)];
    l.atom_of_vertex_[static_cast<std::size_t>(v)] = e;
    if (e == l.zero_ || e == l.one_) {
      return LatticeDiagnostic{LatticeDiagnostic::Kind::AtomsCollapsed, e, -1, std::nullopt,
                               "vertex " + d.label(v) + " is identified with " + (e == l.zero_ ? "0" : "1")};
    }
    if (vertex_of_element[static_cast<std::size_t>(e)] >= 0) {
      const Vertex u = vertex_of_element[static_cast<std::size_t>(e)];
      return LatticeDiagnostic{LatticeDiagnostic::Kind::AtomsCollapsed, e, -1, std::nullopt,
                               "vertices " + d.label(u) + " and " + d.label(v) + " are identified"};
    }
    vertex_of_element[static_cast<std::size_t>(e)] = v;
  }
  if (l.zero_ == l.one_) {
    return LatticeDiagnostic{LatticeDiagnostic::Kind::OrthocomplementIllDefined, l.zero_, l.one_, std::nullopt,
                             "identification collapses 0 and 1"};
  }

  BitMatrix order(n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t s = 0; s <= full(b); ++s) {
      const std::size_t rest = full(b) ^ s;
      // Every superset s | sub of s.
      for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
        order.set(static_cast<std::size_t>(element[offset[b] + s]), static_cast<std::size_t>(element[offset[b] + (s | sub)]));
        if (sub == 0) break;
      }
    }
  }
  order.close_transitively();
  l.leq_.assign(n, std::vector<char>(n, 0));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) l.leq_[x][y] = order.get(x, y) ? 1 : 0;
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (l.leq_[x][y] && l.leq_[y][x]) {
        return LatticeDiagnostic{LatticeDiagnostic::Kind::NotPartialOrder, static_cast<Element>(x),
                                 static_cast<Element>(y), std::nullopt,
                                 l.names_[x] + " and " + l.names_[y] + " are below each other"};
      }
    }
  }

  // e.g. abc,debc. gives a = d v e
  for (Vertex v = 0; v < d.vertex_count(); ++v) {
    const auto e = static_cast<std::size_t>(l.atom_of_vertex_[static_cast<std::size_t>(v)]);
    for (std::size_t y = 0; y < n; ++y) {
      if (y != e && static_cast<Element>(y) != l.zero_ && l.leq_[y][e]) {
        return LatticeDiagnostic{LatticeDiagnostic::Kind::AtomsCollapsed, static_cast<Element>(e),
                                 static_cast<Element>(y), std::nullopt,
                                 "vertex " + d.label(v) + " is not an atom: " + l.names_[y] + " lies below it"};
      }
    }
  }

  for (bool upper : {false, true}) {
    if (auto f = bound_table(l.leq_, upper, upper ? l.join_ : l.meet_)) {
      LatticeDiagnostic diag{LatticeDiagnostic::Kind::NotALattice, f->x, f->y, std::nullopt, {}};
      diag.message = "no " + std::string(upper ? "lub" : "glb") + " for " + l.names_[static_cast<std::size_t>(f->x)] +
                     " and " + l.names_[static_cast<std::size_t>(f->y)];
      if (f->b1 >= 0) {
        diag.bounds = std::make_pair(f->b1, f->b2);
        diag.message += ": " + l.names_[static_cast<std::size_t>(f->b1)] + " and " +
                        l.names_[static_cast<std::size_t>(f->b2)] + " are incomparable " +
                        (upper ? "minimal upper" : "maximal lower") + " bounds";
      }
      return diag;
    }
  }

  l.ortho_.assign(n, -1);
  for (std::size_t id = 0; id < total; ++id) {
    l.ortho_[static_cast<std::size_t>(element[id])] = element[complement(id)];
  }
  if (LawCheck c = check_ortholattice(l); !c.holds) {
    LatticeDiagnostic diag{LatticeDiagnostic::Kind::OrthocomplementIllDefined, c.witness[0],
                           c.witness.size() > 1 ? c.witness[1] : -1, std::nullopt, {}};
    diag.message = "orthocomplement fails at " + l.names_[static_cast<std::size_t>(c.witness[0])];
    return diag;
  }
  if (LawCheck c = check_orthomodular(l); !c.holds) {
    return LatticeDiagnostic{LatticeDiagnostic::Kind::NotOrthomodular, c.witness[0], c.witness[1], std::nullopt,
                             "orthomodular law fails for " + l.names_[static_cast<std::size_t>(c.witness[0])] +
                                 " <= " + l.names_[static_cast<std::size_t>(c.witness[1])]};
  }
  return l;
}

// Law checks -------------------------------------------------------------------

LawCheck check_ortholattice(const OmlLattice& l) {
  const auto n = static_cast<Element>(l.size());
  for (Element x = 0; x < n; ++x) {
    const Element c = l.ortho(x);
    if (c < 0 || c >= n || l.ortho(c) != x || l.meet(x, c) != l.zero() || l.join(x, c) != l.one()) {
      return {false, {x}, 0};
    }
  }
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      if (l.leq(x, y) && !l.leq(l.ortho(y), l.ortho(x))) return {false, {x, y}, 0};
    }
  }
  return {};
}

LawCheck check_orthomodular(const OmlLattice& l) {
  const auto n = static_cast<Element>(l.size());
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      if (l.leq(x, y) && l.join(x, l.meet(l.ortho(x), y)) != y) return {false, {x, y}, 0};
    }
  }
  return {};
}

std::vector<Element> atoms(const OmlLattice& l) {
  std::vector<Element> out;
  const auto n = static_cast<Element>(l.size());
  for (Element x = 0; x < n; ++x) {
    if (x == l.zero()) continue;
    bool minimal = true;
    for (Element z = 0; z < n && minimal; ++z) {
      if (z != l.zero() && z != x && l.leq(z, x)) minimal = false;
    }
    if (minimal) out.push_back(x);
  }
  return out;
}

LawCheck check_superposition(const OmlLattice& l) {
  const auto as = atoms(l);
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (std::size_t j = i + 1; j < as.size(); ++j) {
      const Element ab = l.join(as[i], as[j]);
      const bool found = std::any_of(as.begin(), as.end(), [&](Element c) {
        return c != as[i] && c != as[j] && l.leq(c, ab);
      });
      if (!found) return {false, {as[i], as[j]}, 1};
    }
  }
  for (Element a : as) {
    for (Element b : as) {
      if (b == a) continue;
      const Element ab = l.join(a, b);
      for (Element c : as) {
        if (c == a || c == b || !l.leq(c, ab)) continue;
        if (!l.leq(a, l.join(b, c))) return {false, {a, b, c}, 2};
      }
    }
  }
  return {};
}

LawCheck check_minimal_length(const OmlLattice& l) {
  const std::size_t n = l.size();
  std::vector<Element> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> below(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) below[x] += l.leq(static_cast<Element>(y), static_cast<Element>(x));
  }
  std::sort(order.begin(), order.end(), [&](Element a, Element b) {
    return below[static_cast<std::size_t>(a)] < below[static_cast<std::size_t>(b)];
  });
  std::vector<int> length(n, 1);
  std::vector<Element> prev(n, -1);
  for (Element x : order) {
    for (Element y : order) {
      if (y != x && l.leq(y, x) && length[static_cast<std::size_t>(y)] + 1 > length[static_cast<std::size_t>(x)]) {
        length[static_cast<std::size_t>(x)] = length[static_cast<std::size_t>(y)] + 1;
        prev[static_cast<std::size_t>(x)] = y;
      }
    }
  }
  LawCheck out;
  for (Element x = l.one(); x >= 0; x = prev[static_cast<std::size_t>(x)]) out.witness.push_back(x);
  std::reverse(out.witness.begin(), out.witness.end());
  out.holds = length[static_cast<std::size_t>(l.one())] >= 5;
  return out;
}

}  // namespace mmp
