#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sbpairs/verify.hpp"

namespace sbpairs {

inline constexpr int kOracleMaxStocks = 10;

struct OracleResult {
  std::optional<CyclePath> best;
  std::vector<CyclePath> ranked;  // ascending (weight_sum, nodes)
  std::size_t count = 0;          // cycles enumerated, before any truncation
};

// Every cycle 0 -> v1 -> ... -> vk -> 0 over 2..max_len distinct stocks,
// skipping tabu pairs (v1 short, vk long). max_len <= 0 means N. `keep`
// truncates the ranked list (0 keeps everything). Throws UniverseTooLarge
// for N > 10.
OracleResult enumerate_cycles(const MarketGraph& graph, const TabuList& tabu, int max_len = 0,
                              std::size_t keep = 0);

// Minimum-weight cycle with weight_sum <= threshold, if any.
std::optional<CyclePath> optimal_pair(const MarketGraph& graph, const TabuList& tabu, double threshold);

// Minimum total weight over every non-empty set of vertex-disjoint directed
// cycles of length >= 3 through any nodes, plus cycles 0 -> a -> ... -> 0
// of length >= 3. These are exactly the zero-penalty assignments under an
// empty tabu list, so this is the QUBO ground-state cost. Ties keep the
// first cover found in successor order. Throws UniverseTooLarge for N > 10.
struct CycleCover {
  double weight = 0.0;
  std::vector<int> succ;  // succ[v] = next node, -1 if v is unused
  bool single_dummy_cycle() const;
};
CycleCover min_cycle_cover(const MarketGraph& graph);

}  // namespace sbpairs
