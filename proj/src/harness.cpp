#include "sbpairs/harness.hpp"

#include <ostream>

#include "sbpairs/csv.hpp"
#include "sbpairs/oracle.hpp"
#include "sbpairs/sbm.hpp"

namespace sbpairs {
namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
}

}  // namespace

SimilarityMatrix random_similarity(int n_stocks, std::mt19937_64& rng) {
  constexpr int kDays = 3;
  constexpr int kSamples = 30;
  std::vector<DailySequences> hist(static_cast<std::size_t>(n_stocks));
  for (auto& stock : hist) {
    const double drift = uniform(rng, -0.002, 0.002);
    for (int d = 0; d < kDays; ++d) {
      std::vector<double> seq(kSamples);
      double x = 1.0;
      for (auto& v : seq) {
        x += drift + uniform(rng, -0.003, 0.003);
        v = x;
      }
      stock.push_back(std::move(seq));
    }
  }
  return build_similarity(hist);
}

MarketGraph random_instance(int n_stocks, InstanceKind kind, std::mt19937_64& rng) {
  const auto sim = random_similarity(n_stocks, rng);
  MarketGraph g(n_stocks);
  if (kind == InstanceKind::market) {
    std::vector<double> bid(static_cast<std::size_t>(n_stocks + 1)), ask(bid.size());
    for (int i = 1; i <= n_stocks; ++i) {
      const double mid = uniform(rng, 0.98, 1.02);
      const double half = uniform(rng, 0.0, 0.005);
      bid[static_cast<std::size_t>(i)] = mid - half;
      ask[static_cast<std::size_t>(i)] = mid + half;
    }
    for (int i = 1; i <= n_stocks; ++i)
      for (int j = 1; j <= n_stocks; ++j)
        if (i != j) g.set(i, j, sim(i, j) * (ask[static_cast<std::size_t>(j)] - bid[static_cast<std::size_t>(i)]));
  } else {
    for (int i = 1; i <= n_stocks; ++i)
      for (int j = 1; j <= n_stocks; ++j)
        if (i != j) g.set(i, j, sim(i, j) * uniform(rng, -0.05, 0.05));
  }
  return g;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::mt19937_64 gen(cfg.seed);
  std::vector<BenchRow> rows;
  for (int id = 0; id < cfg.instances; ++id) {
    const MarketGraph g = random_instance(cfg.n_stocks, cfg.kind, gen);
    const TabuList tabu(cfg.n_stocks);
    QuboProblem q{g, tabu, cfg.engine.m_c, penalty_weight(cfg.engine, g)};
    XorshiftRng rng(static_cast<std::uint32_t>(gen() | 1u));
    const auto res = solve_best_of(q, cfg.engine.sb, rng, cfg.restarts);
    const auto oracle = enumerate_cycles(g, tabu, 0, 3);
    const auto cover = min_cycle_cover(g);

    BenchRow row;
    row.instance_id = id;
    row.restarts = cfg.restarts;
    row.best_energy = res.energy;
    row.oracle_energy = oracle.best ? cfg.engine.m_c * oracle.best->weight_sum : 0.0;
    const auto decoded = decode(res.best, g);
    if (decoded.ok() && oracle.best) {
      row.success = decoded.path.nodes == oracle.best->nodes;
      for (const auto& c : oracle.ranked) row.top3 = row.top3 || decoded.path.nodes == c.nodes;
    }
    row.ground_state_cycle = cover.weight >= 0.0 || cover.single_dummy_cycle();
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "instance_id,restarts,best_energy,oracle_energy,success\n";
  for (const auto& r : rows)
    out << r.instance_id << ',' << r.restarts << ',' << csv::format_double(r.best_energy) << ','
        << csv::format_double(r.oracle_energy) << ',' << (r.success ? 1 : 0) << '\n';
}

}  // namespace sbpairs
