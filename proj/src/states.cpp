#include "mmp/states.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace mmp {

bool is_01_state(const MmpDiagram& d, const ZeroOneState& s) {
  if (s.values.size() != static_cast<std::size_t>(d.vertex_count())) return false;
  for (auto v : s.values) {
    if (v > 1) return false;
  }
  for (const Block& b : d.blocks()) {
    int ones = 0;
    for (Vertex v : b) ones += s.values[static_cast<std::size_t>(v)];
    if (ones != 1) return false;
  }
  return true;
}

bool is_state(const MmpDiagram& d, const ProbabilisticState& s) {
  if (s.values.size() != static_cast<std::size_t>(d.vertex_count())) return false;
  for (const auto& x : s.values) {
    if (sgn(x) < 0 || x > 1) return false;
  }
  for (const Block& b : d.blocks()) {
    Rational sum;
    for (Vertex v : b) sum += s.values[static_cast<std::size_t>(v)];
    if (sum != 1) return false;
  }
  return true;
}

ProbabilisticState to_probabilistic(const ZeroOneState& s) {
  ProbabilisticState out;
  for (auto v : s.values) out.values.emplace_back(static_cast<int>(v));
  return out;
}

std::optional<ZeroOneState> to_zero_one(const ProbabilisticState& s) {
  ZeroOneState out;
  for (const auto& x : s.values) {
    if (x == 0) {
      out.values.push_back(0);
    } else if (x == 1) {
      out.values.push_back(1);
    } else {
      return std::nullopt;
    }
  }
  return out;
}

// 0-1 search -----------------------------------------------------------------

namespace {

constexpr std::int8_t kUnset = -1;

class ColoringSearch {
 public:
  explicit ColoringSearch(const MmpDiagram& d) : d_(d), incidence_(d.blocks_of_vertex()) {}

  // Calls visit(values) for every complete 0-1 state until it returns false.
  template <typename Visit>
  void run(Visit&& visit) {
    std::vector<std::int8_t> values(static_cast<std::size_t>(d_.vertex_count()), kUnset);
    std::vector<Vertex> queue;
    for (std::size_t i = 0; i < d_.block_count(); ++i) {
      if (d_.block(i).empty()) return;
      if (d_.block(i).size() == 1) {
        values[static_cast<std::size_t>(d_.block(i)[0])] = 1;
        queue.push_back(d_.block(i)[0]);
      }
    }
    if (!propagate(values, queue)) return;
    descend(values, visit);
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  bool set(std::vector<std::int8_t>& values, Vertex v, std::int8_t x, std::vector<Vertex>& queue) {
    auto& cur = values[static_cast<std::size_t>(v)];
    if (cur == kUnset) {
      cur = x;
      queue.push_back(v);
      return true;
    }
    return cur == x;
  }

  bool propagate(std::vector<std::int8_t>& values, std::vector<Vertex>& queue) {
    while (!queue.empty()) {
      const Vertex v = queue.back();
      queue.pop_back();
      for (std::size_t bi : incidence_[static_cast<std::size_t>(v)]) {
        const Block& b = d_.block(bi);
        if (values[static_cast<std::size_t>(v)] == 1) {
          for (Vertex u : b) {
            if (u != v && !set(values, u, 0, queue)) return false;
          }
          continue;
        }
        int ones = 0;
        int unset = 0;
        Vertex last = -1;
        for (Vertex u : b) {
          const auto x = values[static_cast<std::size_t>(u)];
          if (x == 1) ++ones;
          if (x == kUnset) {
            ++unset;
            last = u;
          }
        }
        if (ones == 0 && unset == 0) return false;
        if (ones == 0 && unset == 1 && !set(values, last, 1, queue)) return false;
      }
    }
    return true;
  }

  // Returns false when the visitor asked to stop.
  template <typename Visit>
  bool descend(std::vector<std::int8_t>& values, Visit& visit) {
    ++nodes_;
    // Branch on the open block with the fewest unset vertices.
    std::size_t pick = d_.block_count();
    int pick_unset = 0;
    for (std::size_t i = 0; i < d_.block_count(); ++i) {
      int ones = 0;
      int unset = 0;
      for (Vertex u : d_.block(i)) {
        const auto x = values[static_cast<std::size_t>(u)];
        ones += x == 1;
        unset += x == kUnset;
      }
      if (ones > 0) continue;
      if (pick == d_.block_count() || unset < pick_unset) {
        pick = i;
        pick_unset = unset;
      }
    }
    if (pick == d_.block_count()) {
      // Every block holds its 1; vertices outside all blocks default to 0.
      for (auto& x : values) {
        if (x == kUnset) x = 0;
      }
      return visit(values);
    }
    for (Vertex u : d_.block(pick)) {
      if (values[static_cast<std::size_t>(u)] != kUnset) continue;
      std::vector<std::int8_t> next = values;
      std::vector<Vertex> queue;
      next[static_cast<std::size_t>(u)] = 1;
      queue.push_back(u);
      if (propagate(next, queue) && !descend(next, visit)) return false;
    }
    return true;
  }

  const MmpDiagram& d_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::uint64_t nodes_ = 0;
};

ZeroOneState to_state(const std::vector<std::int8_t>& values) {
  ZeroOneState s;
  s.values.reserve(values.size());
  for (auto x : values) s.values.push_back(static_cast<std::uint8_t>(x));
  return s;
}

}  // namespace

ColoringResult admits_01_state(const MmpDiagram& d) {
  ColoringSearch search(d);
  ColoringResult result;
  search.run([&](const std::vector<std::int8_t>& values) {
    result.colorable = true;
    result.witness = to_state(values);
    return false;
  });
  result.nodes = search.nodes();
  return result;
}

ZeroOneEnumeration enumerate_01_states(const MmpDiagram& d, std::size_t limit) {
  ColoringSearch search(d);
  ZeroOneEnumeration out;
  search.run([&](const std::vector<std::int8_t>& values) {
    if (out.states.size() >= limit) {
      out.truncated = true;
      return false;
    }
    out.states.push_back(to_state(values));
    return true;
  });
  return out;
}

// Probabilistic states ---------------------------------------------------------

LinearProgram state_system(const MmpDiagram& d) {
  LinearProgram lp;
  lp.variables = static_cast<std::size_t>(d.vertex_count());
  for (const Block& b : d.blocks()) {
    std::vector<Rational> row(lp.variables);
    for (Vertex v : b) row[static_cast<std::size_t>(v)] = 1;
    lp.add_equality(std::move(row), 1);
  }
  return lp;
}

StateFeasibility state_feasibility(const MmpDiagram& d) {
  LpResult r = solve_lp(state_system(d));
  StateFeasibility out;
  out.feasible = r.status == LpStatus::Optimal;
  if (out.feasible) {
    out.state = ProbabilisticState{std::move(r.x)};
  } else {
    out.farkas = std::move(r.farkas);
  }
  return out;
}

std::optional<ProbabilisticState> admits_state(const MmpDiagram& d) {
  const LinearProgram base = state_system(d);
  if (solve_lp(base).status != LpStatus::Optimal) return std::nullopt;
  const std::size_t n = base.variables;
  std::vector<Rational> sum(n);
  for (std::size_t v = 0; v < n; ++v) {
    LinearProgram lp = base;
    lp.objective.assign(n, Rational(0));
    lp.objective[v] = -1;
    LpResult r = solve_lp(lp);
    for (std::size_t u = 0; u < n; ++u) sum[u] += r.x[u];
  }
  ProbabilisticState s;
  for (auto& x : sum) {
    if (n > 0) x /= static_cast<long>(n);
    x.canonicalize();
    s.values.push_back(x);
  }
  return s;
}

// Quantum state sets -----------------------------------------------------------

namespace {

LinearProgram pinned_system(const MmpDiagram& d, Vertex a) {
  LinearProgram lp = state_system(d);
  std::vector<Rational> row(lp.variables);
  row[static_cast<std::size_t>(a)] = 1;
  lp.add_equality(std::move(row), 1);
  return lp;
}

}  // namespace

QuantumCheck admits_quantum_states(const MmpDiagram& d, const QuantumOptions& options) {
  const int n = d.vertex_count();
  QuantumCheck out;
  if (options.keep_witnesses) out.witnesses.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  if (solve_lp(state_system(d)).status != LpStatus::Optimal) {
    out.holds = false;  // the state set must be nonempty
    return out;
  }

  // Vertices sharing a block with a are forced to 0 once m(a) = 1.
  std::vector<std::vector<char>> neighbor(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (const Block& b : d.blocks()) {
    for (Vertex u : b) {
      for (Vertex w : b) neighbor[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] = 1;
    }
  }

  std::vector<char> reachable(static_cast<std::size_t>(n), 0);
  std::vector<std::optional<ProbabilisticState>> pinned(static_cast<std::size_t>(n));
  for (Vertex a = 0; a < n; ++a) {
    LpResult r = solve_lp(pinned_system(d, a));
    if (r.status == LpStatus::Optimal) {
      reachable[static_cast<std::size_t>(a)] = 1;
      pinned[static_cast<std::size_t>(a)] = ProbabilisticState{std::move(r.x)};
    } else {
      out.unreachable_atoms.push_back(a);
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> checked{0};
  std::mutex mu;
  std::optional<std::pair<Vertex, Vertex>> failing;
  const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const Vertex a = static_cast<Vertex>(k / static_cast<std::size_t>(n));
      const Vertex b = static_cast<Vertex>(k % static_cast<std::size_t>(n));
      if (a == b) continue;
      checked.fetch_add(1);
      if (!reachable[static_cast<std::size_t>(a)]) continue;
      std::optional<ProbabilisticState> witness;
      bool pass = false;
      const auto& base = *pinned[static_cast<std::size_t>(a)];
      if (neighbor[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] ||
          base.values[static_cast<std::size_t>(b)] < 1) {
        pass = true;
        witness = base;
      } else {
        LinearProgram lp = pinned_system(d, a);
        lp.objective.assign(lp.variables, Rational(0));
        lp.objective[static_cast<std::size_t>(b)] = 1;
        LpResult r = solve_lp(lp);
        pass = r.status == LpStatus::Optimal && r.value < 1;
        if (pass) witness = ProbabilisticState{std::move(r.x)};
      }
      std::lock_guard<std::mutex> lock(mu);
      if (!pass) {
        // Keep the smallest failing pair so the verdict is scheduling-independent.
        if (!failing || std::make_pair(a, b) < *failing) failing = std::make_pair(a, b);
      } else if (options.keep_witnesses) {
        out.witnesses[k] = std::move(witness);
      }
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  out.pairs_checked = checked.load();
  out.failing_pair = failing;
  out.holds = !failing.has_value();
  return out;
}

StateClassification classify_state_space(const MmpDiagram& d, const QuantumOptions& options) {
  StateClassification c;
  ColoringResult coloring = admits_01_state(d);
  c.admits_01_state = coloring.colorable;
  c.zero_one_witness = std::move(coloring.witness);
  c.state_witness = admits_state(d);
  c.admits_any_state = c.state_witness.has_value();
  QuantumOptions q = options;
  q.keep_witnesses = false;
  QuantumCheck quantum = admits_quantum_states(d, q);
  c.admits_quantum_states = quantum.holds;
  c.has_unreachable_atoms = !quantum.unreachable_atoms.empty();
  c.failing_pair = quantum.failing_pair;
  return c;
}

}  // namespace mmp
