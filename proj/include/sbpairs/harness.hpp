#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "sbpairs/engine.hpp"
#include "sbpairs/marketgraph.hpp"

namespace sbpairs {

enum class InstanceKind {
  market,   // s * (ask_j - bid_i) from random non-crossed quotes
  uniform,  // s * u with u iid uniform in [-0.05, 0.05]
};

// Similarity from DTW over random-walk histories (3 days x 30 samples).
SimilarityMatrix random_similarity(int n_stocks, std::mt19937_64& rng);

// Market quotes: mid ~ U(0.98, 1.02), half spread ~ U(0, 0.005), so every
// ask_j - bid_i lies in [-0.05, 0.05].
MarketGraph random_instance(int n_stocks, InstanceKind kind, std::mt19937_64& rng);

struct BenchConfig {
  int instances = 100;
  int n_stocks = 5;
  int restarts = 100;
  std::uint64_t seed = 1;
  InstanceKind kind = InstanceKind::market;
  EngineConfig engine;  // penalty mode and SB parameters
};

struct BenchRow {
  int instance_id = 0;
  int restarts = 0;
  double best_energy = 0.0;
  double oracle_energy = 0.0;
  bool success = false;            // decoded best equals the oracle optimum
  bool top3 = false;               // decoded best is among the three best cycles
  bool ground_state_cycle = true;  // QUBO minimum is a single dummy cycle
};

std::vector<BenchRow> run_bench(const BenchConfig& cfg);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace sbpairs
