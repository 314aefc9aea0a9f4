#include "sbpairs/oracle.hpp"

#include <algorithm>
#include <limits>

#include "sbpairs/error.hpp"

namespace sbpairs {
namespace {

bool ranked_before(const CyclePath& a, const CyclePath& b) {
  if (a.weight_sum != b.weight_sum) return a.weight_sum < b.weight_sum;
  return a.nodes < b.nodes;
}

struct Walker {
  const MarketGraph& graph;
  const TabuList& tabu;
  int max_len;
  std::vector<CyclePath>& out;
  std::size_t& count;
  std::vector<int> path;  // interior nodes
  std::vector<bool> used;

  void extend(double partial) {
    const int len = static_cast<int>(path.size());
    if (len >= 2 && !tabu.contains({path.front(), path.back()})) {
      CyclePath c;
      c.nodes.reserve(path.size() + 2);
      c.nodes.push_back(0);
      c.nodes.insert(c.nodes.end(), path.begin(), path.end());
      c.nodes.push_back(0);
      // Same summation order as path_weight so both agree bit for bit.
      c.weight_sum = partial + graph(path.back(), 0);
      out.push_back(std::move(c));
      ++count;
    }
    if (len == max_len) return;
    for (int v = 1; v <= graph.n_stocks(); ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[static_cast<std::size_t>(v)] = true;
      path.push_back(v);
      extend(partial + graph(path[path.size() - 2], v));
      path.pop_back();
      used[static_cast<std::size_t>(v)] = false;
    }
  }
};

}  // namespace

OracleResult enumerate_cycles(const MarketGraph& graph, const TabuList& tabu, int max_len, std::size_t keep) {
  const int n = graph.n_stocks();
  if (n > kOracleMaxStocks)
    throw Error(Errc::universe_too_large, std::to_string(n) + " stocks exceeds oracle limit");
  if (tabu.n_stocks() != n) throw Error(Errc::dimension_mismatch, "tabu size differs from graph");
  if (max_len <= 0 || max_len > n) max_len = n;

  // Partitioned by first interior node; merged in partition order.
  std::vector<std::vector<CyclePath>> parts(static_cast<std::size_t>(n));
  std::vector<std::size_t> counts(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(dynamic)
  for (int first = 1; first <= n; ++first) {
    auto& out = parts[static_cast<std::size_t>(first - 1)];
    Walker w{graph,   tabu,    max_len, out, counts[static_cast<std::size_t>(first - 1)],
             {first}, std::vector<bool>(static_cast<std::size_t>(n + 1), false)};
    w.used[static_cast<std::size_t>(first)] = true;
    w.extend(graph(0, first));
    std::sort(out.begin(), out.end(), ranked_before);
    if (keep && out.size() > keep) out.resize(keep);
  }

  OracleResult res;
  for (auto c : counts) res.count += c;
  for (auto& p : parts) {
    const auto mid = static_cast<std::ptrdiff_t>(res.ranked.size());
    res.ranked.insert(res.ranked.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    std::inplace_merge(res.ranked.begin(), res.ranked.begin() + mid, res.ranked.end(), ranked_before);
    if (keep && res.ranked.size() > keep) res.ranked.resize(keep);
  }
  if (!res.ranked.empty()) res.best = res.ranked.front();
  return res;
}

std::optional<CyclePath> optimal_pair(const MarketGraph& graph, const TabuList& tabu, double threshold) {
  const auto res = enumerate_cycles(graph, tabu, 0, 1);
  if (res.best && res.best->weight_sum <= threshold) return res.best;
  return std::nullopt;
}

namespace {

struct CoverSearch {
  const MarketGraph& graph;
  int nodes;
  std::vector<int> succ;
  std::vector<bool> has_pred;
  CycleCover best;

  // Assigns successors in node order; a node is either unused or gets a
  // successor not yet taken. Closing checks reject paths and 2-cycles.
  void assign(int v) {
    if (v == nodes) {
      finish();
      return;
    }
    succ[static_cast<std::size_t>(v)] = -1;
    assign(v + 1);
    for (int u = 0; u < nodes; ++u) {
      if (u == v || has_pred[static_cast<std::size_t>(u)]) continue;
      if (u < v && succ[static_cast<std::size_t>(u)] == v) continue;  // 2-cycle
      succ[static_cast<std::size_t>(v)] = u;
      has_pred[static_cast<std::size_t>(u)] = true;
      assign(v + 1);
      has_pred[static_cast<std::size_t>(u)] = false;
    }
    succ[static_cast<std::size_t>(v)] = -1;
  }

  void finish() {
    double w = 0.0;
    bool any = false;
    for (int v = 0; v < nodes; ++v) {
      const int s = succ[static_cast<std::size_t>(v)];
      if ((s >= 0) != has_pred[static_cast<std::size_t>(v)]) return;
      if (s >= 0) {
        w += graph(v, s);
        any = true;
      }
    }
    if (any && w < best.weight) {
      best.weight = w;
      best.succ = succ;
    }
  }
};

}  // namespace

bool CycleCover::single_dummy_cycle() const {
  if (succ.empty() || succ[0] < 0) return false;
  int len = 0;
  int v = 0;
  do {
    v = succ[static_cast<std::size_t>(v)];
    ++len;
  } while (v != 0);
  int used = 0;
  for (int s : succ) used += s >= 0 ? 1 : 0;
  return used == len;
}

CycleCover min_cycle_cover(const MarketGraph& graph) {
  const int n = graph.n_stocks();
  if (n > kOracleMaxStocks)
    throw Error(Errc::universe_too_large, std::to_string(n) + " stocks exceeds oracle limit");
  CoverSearch s{graph, n + 1, std::vector<int>(static_cast<std::size_t>(n + 1), -1),
                std::vector<bool>(static_cast<std::size_t>(n + 1), false), {}};
  s.best.weight = std::numeric_limits<double>::infinity();
  s.assign(0);
  return s.best;
}

}  // namespace sbpairs
