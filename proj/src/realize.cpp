#include <algorithm>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include "mmp/vectors.hpp"

namespace mmp {

namespace {

struct BudgetHit {};

std::vector<std::vector<Vertex>> neighbour_lists(const MmpDiagram& d) {
  std::vector<std::set<Vertex>> sets(static_cast<std::size_t>(d.vertex_count()));
  for (const Block& b : d.blocks()) {
    for (Vertex u : b) {
      for (Vertex v : b) {
        if (u != v) sets[static_cast<std::size_t>(u)].insert(v);
      }
    }
  }
  std::vector<std::vector<Vertex>> out;
  for (const auto& s : sets) out.emplace_back(s.begin(), s.end());
  return out;
}

class Sampler {
 public:
  Sampler(const MmpDiagram& d, int dim, const RealizeOptions& o, std::mt19937_64& eng, std::uint64_t node_limit)
      : n_(static_cast<std::size_t>(d.vertex_count())),
        dim_(static_cast<std::size_t>(dim)),
        opts_(o),
        eng_(eng),
        nbrs_(neighbour_lists(d)),
        assigned_(n_),
        limit_(node_limit) {}

  // Tie-break priority: identity on the first attempt, shuffled later.
  void set_priority(bool shuffle) {
    priority_.resize(n_);
    std::iota(priority_.begin(), priority_.end(), std::size_t{0});
    if (shuffle) {
      for (std::size_t i = n_; i > 1; --i) std::swap(priority_[i - 1], priority_[eng_() % i]);
    }
  }

  bool run() { return dfs(n_); }
  std::uint64_t nodes() const { return nodes_; }

  VectorSet result() const {
    VectorSet out;
    out.dimension = static_cast<int>(dim_);
    for (std::size_t v = 0; v < n_; ++v) out.vectors.emplace(static_cast<Vertex>(v), *assigned_[v]);
    return out;
  }

 private:
  RationalMatrix constraints(std::size_t v) const {
    RationalMatrix m;
    for (Vertex u : nbrs_[v]) {
      if (assigned_[static_cast<std::size_t>(u)]) m.push_back(*assigned_[static_cast<std::size_t>(u)]);
    }
    return m;
  }

  std::size_t choose() const {
    std::size_t best = n_;
    std::tuple<std::size_t, std::size_t, std::size_t> best_key{};
    for (std::size_t v = 0; v < n_; ++v) {
      if (assigned_[v]) continue;
      std::size_t fixed = 0;
      for (Vertex u : nbrs_[v]) fixed += assigned_[static_cast<std::size_t>(u)].has_value();
      const auto key = std::make_tuple(fixed, nbrs_[v].size(), n_ - priority_[v]);
      if (best == n_ || key > best_key) {
        best = v;
        best_key = key;
      }
    }
    return best;
  }

  bool lookahead(std::size_t v) const {
    for (Vertex y : nbrs_[v]) {
      if (assigned_[static_cast<std::size_t>(y)]) continue;
      if (rank(constraints(static_cast<std::size_t>(y)), dim_) >= dim_) return false;
    }
    return true;
  }

  RationalVector sample(const std::vector<RationalVector>& basis) {
    const auto range = static_cast<std::uint64_t>(2 * opts_.coefficient_range + 1);
    while (true) {
      RationalVector x(dim_, 0);
      for (const auto& b : basis) {
        const long c = static_cast<long>(eng_() % range) - opts_.coefficient_range;
        if (c == 0) continue;
        for (std::size_t i = 0; i < dim_; ++i) x[i] += c * b[i];
      }
      if (!is_zero(x)) return primitive(x);
    }
  }

  bool dfs(std::size_t remaining) {
    if (remaining == 0) return true;
    const std::size_t v = choose();
    const auto basis = null_space(constraints(v), dim_);
    if (basis.empty()) return false;
    const int tries = basis.size() == 1 ? 1 : std::max(1, opts_.backtrack_attempts);
    for (int t = 0; t < tries; ++t) {
      if (++nodes_ > limit_) throw BudgetHit{};
      RationalVector x = basis.size() == 1 ? primitive(basis[0]) : sample(basis);
      if (opts_.distinct_rays &&
          std::any_of(assigned_.begin(), assigned_.end(), [&](const auto& a) { return a && *a == x; })) {
        continue;
      }
      assigned_[v] = std::move(x);
      if (lookahead(v) && dfs(remaining - 1)) return true;
      assigned_[v].reset();
    }
    return false;
  }

  std::size_t n_;
  std::size_t dim_;
  const RealizeOptions& opts_;
  std::mt19937_64& eng_;
  std::vector<std::vector<Vertex>> nbrs_;
  std::vector<std::optional<RationalVector>> assigned_;
  std::vector<std::size_t> priority_;
  std::uint64_t nodes_ = 0;
  std::uint64_t limit_;
};

using Bits = std::vector<std::uint64_t>;

class Exhaustive {
 public:
  Exhaustive(const MmpDiagram& d, int dim, const RealizeOptions& o)
      : n_(static_cast<std::size_t>(d.vertex_count())), opts_(o), nbrs_(neighbour_lists(d)) {
    build_rays(static_cast<std::size_t>(dim));
    words_ = (rays_.size() + 63) / 64;
    ortho_.assign(rays_.size(), Bits(words_, 0));
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      for (std::size_t j = 0; j < rays_.size(); ++j) {
        if (dot(rays_[i], rays_[j]) == 0) ortho_[i][j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
    choice_.assign(n_, -1);
  }

  std::size_t ray_count() const { return rays_.size(); }

  // true: found; false: space exhausted. Throws BudgetHit.
  bool run() { return dfs(n_); }
  std::uint64_t nodes() const { return nodes_; }

  VectorSet result(int dim) const {
    VectorSet out;
    out.dimension = dim;
    for (std::size_t v = 0; v < n_; ++v) out.vectors.emplace(static_cast<Vertex>(v), rays_[static_cast<std::size_t>(choice_[v])]);
    return out;
  }

 private:
  void build_rays(std::size_t dim) {
    std::set<std::vector<mpz_class>> seen;
    const std::size_t k = opts_.candidate_entries.size();
    double total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= static_cast<double>(k);
    if (total > 2e6) throw std::invalid_argument("candidate space too large to enumerate");
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
      RationalVector v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = opts_.candidate_entries[idx[i]];
      if (!is_zero(v)) {
        RationalVector p = primitive(v);
        std::vector<mpz_class> key;
        for (const auto& x : p) key.push_back(x.get_num());
        if (seen.insert(key).second) rays_.push_back(std::move(p));
      }
      std::size_t i = dim;
      while (i > 0 && ++idx[i - 1] == k) idx[--i] = 0;
      if (i == 0) break;
    }
  }

  Bits domain(std::size_t v) const {
    Bits b(words_, ~std::uint64_t{0});
    if (rays_.size() % 64) b.back() = (std::uint64_t{1} << (rays_.size() % 64)) - 1;
    for (Vertex u : nbrs_[v]) {
      const int c = choice_[static_cast<std::size_t>(u)];
      if (c < 0) continue;
      for (std::size_t w = 0; w < words_; ++w) b[w] &= ortho_[static_cast<std::size_t>(c)][w];
    }
    if (opts_.distinct_rays) {
      for (int c : choice_) {
        if (c >= 0) b[static_cast<std::size_t>(c) / 64] &= ~(std::uint64_t{1} << (static_cast<std::size_t>(c) % 64));
      }
    }
    return b;
  }

  static std::size_t count(const Bits& b) {
    std::size_t s = 0;
    for (auto w : b) s += static_cast<std::size_t>(__builtin_popcountll(w));
    return s;
  }

  bool dfs(std::size_t remaining) {
    if (remaining == 0) return true;
    if (++nodes_ > opts_.max_nodes) throw BudgetHit{};
    // Smallest domain first.
    std::size_t best = n_;
    std::size_t best_count = 0;
    Bits best_dom;
    for (std::size_t v = 0; v < n_; ++v) {
      if (choice_[v] >= 0) continue;
      Bits dom = domain(v);
      const std::size_t c = count(dom);
      if (best == n_ || c < best_count) {
        best = v;
        best_count = c;
        best_dom = std::move(dom);
      }
      if (c == 0) return false;
    }
    for (std::size_t r = 0; r < rays_.size(); ++r) {
      if (!((best_dom[r / 64] >> (r % 64)) & 1U)) continue;
      choice_[best] = static_cast<int>(r);
      if (dfs(remaining - 1)) return true;
      choice_[best] = -1;
    }
    return false;
  }

  std::size_t n_;
  const RealizeOptions& opts_;
  std::vector<std::vector<Vertex>> nbrs_;
  std::vector<RationalVector> rays_;
  std::size_t words_ = 0;
  std::vector<Bits> ortho_;
  std::vector<int> choice_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

RealizeResult realize(const MmpDiagram& d, int dimension, std::uint64_t seed, const RealizeOptions& options) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    if (static_cast<int>(d.block(b).size()) > dimension) {
      throw std::invalid_argument("block " + std::to_string(b) + " has " + std::to_string(d.block(b).size()) +
                                  " vertices, more than dimension " + std::to_string(dimension));
    }
  }
  RealizeResult result;
  result.seed = seed;

  if (!options.candidate_entries.empty()) {
    Exhaustive search(d, dimension, options);
    result.attempts = 1;
    try {
      if (search.run()) {
        result.status = RealizeStatus::Realized;
        result.vectors = search.result(dimension);
      } else {
        result.status = RealizeStatus::ImpossibleInCandidateSpace;
        result.detail = "no assignment among " + std::to_string(search.ray_count()) + " candidate rays";
      }
    } catch (const BudgetHit&) {
      result.status = RealizeStatus::BudgetExhausted;
      result.detail = "node budget of " + std::to_string(options.max_nodes) + " reached";
    }
    result.nodes = search.nodes();
    return result;
  }

  std::mt19937_64 eng(seed);
  for (int attempt = 0; attempt < std::max(1, options.retries); ++attempt) {
    if (result.nodes >= options.max_nodes) break;
    Sampler s(d, dimension, options, eng, options.max_nodes - result.nodes);
    s.set_priority(attempt > 0);
    ++result.attempts;
    bool ok = false;
    try {
      ok = s.run();
    } catch (const BudgetHit&) {
    }
    result.nodes += s.nodes();
    if (ok) {
      result.status = RealizeStatus::Realized;
      result.vectors = s.result();
      return result;
    }
  }
  result.status = RealizeStatus::BudgetExhausted;
  result.detail = std::to_string(result.attempts) + " attempts, " + std::to_string(result.nodes) + " nodes";
  return result;
}

RealizeResult realize_race(const MmpDiagram& d, int dimension, std::uint64_t first_seed, std::uint64_t count,
                           unsigned workers, const RealizeOptions& options) {
  if (count == 0) throw std::invalid_argument("no seeds to race");
  workers = std::max(1U, workers);
  // Chunks of `workers` seeds; the first chunk with a success decides.
  for (std::uint64_t base = 0; base < count; base += workers) {
    const std::uint64_t chunk = std::min<std::uint64_t>(workers, count - base);
    std::vector<RealizeResult> results(chunk);
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::uint64_t i = 0; i < chunk; ++i) {
      threads.emplace_back([&, i] {
        try {
          results[i] = realize(d, dimension, first_seed + base + i, options);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    for (auto& r : results) {
      if (r.status == RealizeStatus::Realized) return std::move(r);
    }
    if (base + chunk == count) return std::move(results.back());
  }
  return {};
}

}  // namespace mmp
