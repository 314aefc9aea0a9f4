#include "sbpairs/verify.hpp"

namespace sbpairs {

std::string format_path(const CyclePath& path, const Universe* universe) {
  std::string out;
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    if (k) out += '>';
    const int node = path.nodes[k];
    if (node == 0 || universe == nullptr)
      out += std::to_string(node);
    else
      out += universe->at(node).code;
  }
  return out;
}

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::none: return "none";
    case Reason::degree_violation: return "degree-violation";
    case Reason::flow_imbalance: return "flow-imbalance";
    case Reason::opposite_edge: return "opposite-edge";
    case Reason::no_dummy_cycle: return "no-dummy-cycle";
    case Reason::split_cycles: return "split-cycles";
    case Reason::empty: return "empty";
    case Reason::above_threshold: return "above-threshold";
    case Reason::tabu_pair: return "tabu-pair";
  }
  return "unknown";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::tradable: return "valid-and-tradable";
    case Outcome::below_threshold: return "valid-below-threshold";
    case Outcome::invalid: return "invalid";
  }
  return "unknown";
}

DecodeResult decode(const EdgeVars& x) {
  const int n = x.n_stocks();
  const int nodes = n + 1;
  std::vector<int> out_deg(static_cast<std::size_t>(nodes), 0), in_deg(static_cast<std::size_t>(nodes), 0);
  std::vector<int> succ(static_cast<std::size_t>(nodes), -1);
  int edges = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j && x(i, j)) {
        ++out_deg[static_cast<std::size_t>(i)];
        ++in_deg[static_cast<std::size_t>(j)];
        succ[static_cast<std::size_t>(i)] = j;
        ++edges;
      }

  DecodeResult res;
  if (edges == 0) {
    res.reason = Reason::empty;
    return res;
  }
  for (int i = 0; i <= n; ++i)
    if (out_deg[static_cast<std::size_t>(i)] > 1 || in_deg[static_cast<std::size_t>(i)] > 1) {
      res.reason = Reason::degree_violation;
      return res;
    }
  for (int i = 0; i <= n; ++i)
    if (out_deg[static_cast<std::size_t>(i)] != in_deg[static_cast<std::size_t>(i)]) {
      res.reason = Reason::flow_imbalance;
      return res;
    }

  // Every active node now has exactly one successor: the edges are a union of
  // disjoint cycles.
  std::vector<bool> seen(static_cast<std::size_t>(nodes), false);
  int cycles = 0;
  bool dummy_in_cycle = out_deg[0] == 1;
  for (int start = 0; start <= n; ++start) {
    if (seen[static_cast<std::size_t>(start)] || out_deg[static_cast<std::size_t>(start)] == 0) continue;
    ++cycles;
    for (int v = start; !seen[static_cast<std::size_t>(v)]; v = succ[static_cast<std::size_t>(v)])
      seen[static_cast<std::size_t>(v)] = true;
  }
  if (cycles > 1) {
    res.reason = Reason::split_cycles;
    return res;
  }
  if (!dummy_in_cycle) {
    res.reason = Reason::no_dummy_cycle;
    return res;
  }
  if (x(0, succ[0]) && x(succ[0], 0)) {
    res.reason = Reason::opposite_edge;  // 0 -> a -> 0
    return res;
  }

  res.path.nodes.push_back(0);
  for (int v = succ[0]; v != 0; v = succ[static_cast<std::size_t>(v)]) res.path.nodes.push_back(v);
  res.path.nodes.push_back(0);
  return res;
}

DecodeResult decode(const EdgeVars& x, const MarketGraph& graph) {
  auto res = decode(x);
  if (res.ok()) res.path.weight_sum = path_weight(res.path, graph);
  return res;
}

double path_weight(const CyclePath& path, const MarketGraph& graph) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) sum += graph(path.nodes[k], path.nodes[k + 1]);
  return sum;
}

Verdict evaluate(const CyclePath& path, const MarketGraph& graph, const TabuList& tabu, double threshold) {
  Verdict v;
  v.weight_sum = path_weight(path, graph);
  if (tabu.contains(path.pair())) {
    v.outcome = Outcome::below_threshold;
    v.reason = Reason::tabu_pair;
  } else if (v.weight_sum <= threshold) {
    v.outcome = Outcome::tradable;
  } else {
    v.outcome = Outcome::below_threshold;
    v.reason = Reason::above_threshold;
  }
  return v;
}

Verdict judge(const DecodeResult& decoded, const MarketGraph& graph, const TabuList& tabu, double threshold) {
  if (!decoded.ok()) return Verdict{Outcome::invalid, decoded.reason, 0.0};
  return evaluate(decoded.path, graph, tabu, threshold);
}

}  // namespace sbpairs
