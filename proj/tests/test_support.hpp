#pragma once

// Brute-force oracles and fixtures shared by the test binaries. None of
// this code calls into the canonical labeling, the generator or the state
// solvers, so it can serve as an independent check of them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mmp/diagram.hpp"

namespace fixtures {

inline const char* const kSevenFive = "abc,cde,efa,egb,dgf.";
inline const char* const kCabello = "abcd,defg,ghij,jklm,mnop,pqra,bikr,celn,fhoq.";
inline const char* const kTenFive = "abcd,defg,ghia,bfij,cehj.";

// Triples are the rows and quadruples the columns of a 4 x 3 grid: block
// sums would force 4 = 3, so no state exists.
inline mmp::MmpDiagram grid_stateless() {
  std::vector<mmp::Block> blocks;
  for (int r = 0; r < 4; ++r) blocks.push_back({3 * r, 3 * r + 1, 3 * r + 2});
  for (int c = 0; c < 3; ++c) blocks.push_back({c, 3 + c, 6 + c, 9 + c});
  return mmp::MmpDiagram(12, blocks);
}

inline const char* const kSevenVectors =
    "a: 608683911 17315878 -22061625 -111556858 20961326\n"
    "b: 3 68 -123 52 4\n"
    "c: 1 3 5 7 11\n"
    "d: 11 -11 11 -11 4\n"
    "e: 1788 -8663 -1348 8223 -2420\n"
    "f: 5791304343 -304905182408 -1387655556967 1686769435032 7600253389432\n"
    "g: 1 1 1 1 0\n";

inline const char* const kCabelloVectors =
    "a: 1 0 0 -1\nb: 0 1 1 0\nc: 1 1 -1 1\nd: 1 -1 1 1\ne: 1 1 1 -1\nf: 0 1 0 1\n"
    "g: 1 0 -1 0\nh: 0 1 0 -1\ni: 1 -1 1 -1\nj: 1 1 1 1\nk: 1 1 -1 -1\nl: 1 -1 0 0\n"
    "m: 0 0 1 -1\nn: 0 0 1 1\no: 1 0 0 0\np: 0 1 0 0\nq: 0 0 1 0\nr: 1 0 0 1\n";

}  // namespace fixtures

namespace oracle {

using mmp::Block;
using mmp::MmpDiagram;
using mmp::Vertex;

inline std::vector<Block> sorted_blocks(const MmpDiagram& d) {
  std::vector<Block> out;
  for (Block b : d.blocks()) {
    std::sort(b.begin(), b.end());
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> degrees(const MmpDiagram& d) {
  std::vector<int> deg(static_cast<std::size_t>(d.vertex_count()), 0);
  for (const Block& b : d.blocks()) {
    for (Vertex v : b) ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

// Visits every bijection V(a) -> V(b) preserving degrees and reports each
// one that maps the block multiset onto the block multiset.
template <class Visit>
void for_each_isomorphism(const MmpDiagram& a, const MmpDiagram& b, Visit visit) {
  const int n = a.vertex_count();
  if (n != b.vertex_count() || a.block_count() != b.block_count()) return;
  const auto da = degrees(a);
  const auto db = degrees(b);
  const auto target = sorted_blocks(b);
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  bool stop = false;
  auto rec = [&](auto&& self, int v) -> void {
    if (stop) return;
    if (v == n) {
      MmpDiagram mapped(n, [&] {
        std::vector<Block> bs;
        for (const Block& blk : a.blocks()) {
          Block m;
          for (Vertex x : blk) m.push_back(image[static_cast<std::size_t>(x)]);
          bs.push_back(m);
        }
        return bs;
      }());
      if (sorted_blocks(mapped) == target && !visit(image)) stop = true;
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used[static_cast<std::size_t>(w)] || da[static_cast<std::size_t>(v)] != db[static_cast<std::size_t>(w)]) continue;
      used[static_cast<std::size_t>(w)] = 1;
      image[static_cast<std::size_t>(v)] = w;
      self(self, v + 1);
      used[static_cast<std::size_t>(w)] = 0;
    }
  };
  rec(rec, 0);
}

inline bool isomorphic(const MmpDiagram& a, const MmpDiagram& b) {
  bool found = false;
  for_each_isomorphism(a, b, [&](const std::vector<int>&) {
    found = true;
    return false;
  });
  return found;
}

inline std::uint64_t automorphism_count(const MmpDiagram& d) {
  std::uint64_t count = 0;
  for_each_isomorphism(d, d, [&](const std::vector<int>&) {
    ++count;
    return true;
  });
  return count;
}

inline bool connected(const MmpDiagram& d) {
  const int n = d.vertex_count();
  if (n == 0) return true;
  std::vector<int> comp(static_cast<std::size_t>(n));
  std::iota(comp.begin(), comp.end(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const Block& b : d.blocks()) {
      int low = n;
      for (Vertex v : b) low = std::min(low, comp[static_cast<std::size_t>(v)]);
      for (Vertex v : b) {
        if (comp[static_cast<std::size_t>(v)] != low) {
          comp[static_cast<std::size_t>(v)] = low;
          changed = true;
        }
      }
    }
  }
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

// Applies a vertex permutation and shuffles block order and within-block order.
template <class Rng>
MmpDiagram scramble(const MmpDiagram& d, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(d.vertex_count()));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Block> bs;
  for (const Block& b : d.blocks()) {
    Block m;
    for (Vertex v : b) m.push_back(perm[static_cast<std::size_t>(v)]);
    std::shuffle(m.begin(), m.end(), rng);
    bs.push_back(m);
  }
  std::shuffle(bs.begin(), bs.end(), rng);
  return MmpDiagram(d.vertex_count(), bs);
}

// Drops uncovered vertices and renumbers by first appearance.
inline MmpDiagram compact(int n, const std::vector<Block>& blocks) {
  std::vector<int> id(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::vector<Block> out;
  for (const Block& b : blocks) {
    Block m;
    for (Vertex v : b) {
      if (id[static_cast<std::size_t>(v)] < 0) id[static_cast<std::size_t>(v)] = next++;
      m.push_back(id[static_cast<std::size_t>(v)]);
    }
    out.push_back(m);
  }
  return MmpDiagram(next, out);
}

// Random diagram passing validate(): blocks of size in [smin, smax] drawn
// from up to max_vertices vertices, rejected until valid.
template <class Rng>
MmpDiagram random_valid(Rng& rng, int max_vertices, int max_blocks, int smin = 3, int smax = 3) {
  while (true) {
    const int n = std::uniform_int_distribution<int>(smax, max_vertices)(rng);
    const int k = std::uniform_int_distribution<int>(1, max_blocks)(rng);
    std::vector<Block> blocks;
    for (int i = 0; i < k; ++i) {
      const int s = std::uniform_int_distribution<int>(smin, smax)(rng);
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      blocks.emplace_back(all.begin(), all.begin() + s);
    }
    MmpDiagram d = compact(n, blocks);
    if (mmp::validate(d).passed) return d;
  }
}

// Every assignment in {0,1}^n with exactly one 1 per block, by increasing
// bitmask (bit v = value of vertex v).
inline std::vector<std::uint64_t> zero_one_states(const MmpDiagram& d) {
  std::vector<std::uint64_t> out;
  const int n = d.vertex_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool ok = true;
    for (const Block& b : d.blocks()) {
      int ones = 0;
      for (Vertex v : b) ones += static_cast<int>((mask >> v) & 1U);
      if (ones != 1) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(mask);
  }
  return out;
}

// Enumerate-then-dedup: every set of `blocks` distinct triples over
// `max_vertices` points, compacted, filtered for connectivity, reduced to
// one representative per isomorphism class.
inline std::vector<MmpDiagram> triple_diagrams(int max_vertices, int blocks, bool require_connected) {
  std::vector<Block> triples;
  for (int a = 0; a < max_vertices; ++a)
    for (int b = a + 1; b < max_vertices; ++b)
      for (int c = b + 1; c < max_vertices; ++c) triples.push_back({a, b, c});
  const int t = static_cast<int>(triples.size());
  std::map<std::vector<int>, std::vector<MmpDiagram>> buckets;  // invariant -> classes
  std::vector<MmpDiagram> out;
  if (blocks > t) return out;
  std::vector<int> idx(static_cast<std::size_t>(blocks));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<Block> chosen;
    for (int i : idx) chosen.push_back(triples[static_cast<std::size_t>(i)]);
    MmpDiagram d = compact(max_vertices, chosen);
    if (!require_connected || connected(d)) {
      std::vector<int> key = degrees(d);
      std::sort(key.begin(), key.end());
      key.push_back(-1);
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        std::vector<int> meets;
        for (std::size_t j = 0; j < chosen.size(); ++j) {
          if (i == j) continue;
          int m = 0;
          for (Vertex v : chosen[i]) m += std::count(chosen[j].begin(), chosen[j].end(), v) > 0;
          meets.push_back(m);
        }
        std::sort(meets.begin(), meets.end());
        int code = 0;
        for (int m : meets) code = code * 4 + m;
        key.push_back(code);
      }
      std::sort(key.begin() + static_cast<long>(d.vertex_count()) + 1, key.end());
      auto& bucket = buckets[key];
      if (std::none_of(bucket.begin(), bucket.end(), [&](const MmpDiagram& e) { return isomorphic(d, e); })) {
        bucket.push_back(d);
        out.push_back(d);
      }
    }
    int i = blocks - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == t - blocks + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < blocks; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace oracle
