#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sbpairs/feed.hpp"
#include "sbpairs/qubo.hpp"

namespace sbpairs {

// Cycle 0 -> v1 -> ... -> vk -> 0; v1 is the short leg, vk the long leg.
struct CyclePath {
  std::vector<int> nodes;  // starts and ends with 0
  double weight_sum = 0.0;

  Pair pair() const { return {nodes[1], nodes[nodes.size() - 2]}; }
  int interior_size() const { return static_cast<int>(nodes.size()) - 2; }
  bool is_direct() const { return interior_size() == 2; }

  bool operator==(const CyclePath&) const = default;
};

// `0>a>c>b>0` with stock codes (or indices when no universe is given).
std::string format_path(const CyclePath& path, const Universe* universe = nullptr);

enum class Reason {
  none,
  degree_violation,
  flow_imbalance,
  opposite_edge,
  no_dummy_cycle,
  split_cycles,
  empty,
  above_threshold,
  tabu_pair,
};
std::string_view to_string(Reason r);

struct DecodeResult {
  Reason reason = Reason::none;  // none iff path is valid
  CyclePath path;

  bool ok() const { return reason == Reason::none; }
};

// Succeeds iff the edges form exactly one simple directed cycle through 0.
// Weight sum is filled from `graph`.
DecodeResult decode(const EdgeVars& x, const MarketGraph& graph);
DecodeResult decode(const EdgeVars& x);

enum class Outcome { tradable, below_threshold, invalid };
std::string_view to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::invalid;
  Reason reason = Reason::none;
  double weight_sum = 0.0;
};

double path_weight(const CyclePath& path, const MarketGraph& graph);

// Tradable iff weight_sum <= threshold and the pair is not tabu.
Verdict evaluate(const CyclePath& path, const MarketGraph& graph, const TabuList& tabu, double threshold);
// Decode + evaluate in one go; invalid decodes yield an invalid verdict.
Verdict judge(const DecodeResult& decoded, const MarketGraph& graph, const TabuList& tabu, double threshold);

}  // namespace sbpairs
