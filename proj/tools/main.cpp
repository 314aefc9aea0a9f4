#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbpairs/backcast.hpp"
#include "sbpairs/config.hpp"
#include "sbpairs/csv.hpp"
#include "sbpairs/engine.hpp"
#include "sbpairs/error.hpp"
#include "sbpairs/gen_feed.hpp"
#include "sbpairs/harness.hpp"
#include "sbpairs/oracle.hpp"
#include "sbpairs/sbm.hpp"
#include "sbpairs/verify.hpp"

namespace fs = std::filesystem;
using namespace sbpairs;

namespace {

constexpr const char* kVersion = "sbpairs 0.1.0";

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return in;
}

// Similarity rows for stocks dropped from the universe are skipped.
SimilarityMatrix project_similarity(const SimilarityMatrix& full, const Universe& full_u, const Universe& kept) {
  SimilarityMatrix out(kept.size());
  for (int i = 1; i <= kept.size(); ++i)
    for (int j = i + 1; j <= kept.size(); ++j)
      out.set(i, j, full(full_u.index_of(kept.at(i).code), full_u.index_of(kept.at(j).code)));
  return out;
}

Config gather_config(const std::string& path, const std::vector<std::string>& sets) {
  Config cfg = path.empty() ? Config{} : Config::load(path);
  for (const auto& s : sets) cfg.set_assignment(s);
  std::set<std::string, std::less<>> known = engine_config_keys();
  for (const auto& k : sim_config_keys()) known.insert(k);
  cfg.require_known(known);
  return cfg;
}

struct BackcastArgs {
  std::string feed, universe, sim, config, out, latency_out;
  std::vector<std::string> sets;
  std::optional<std::uint32_t> seed;
  bool clamp_lots = false;
};

int run_backcast_cmd(const BackcastArgs& a) {
  Config cfg = gather_config(a.config, a.sets);
  if (a.seed) {
    cfg.set("seed", std::to_string(*a.seed));
    cfg.set("sim_seed", std::to_string(*a.seed));
  }
  if (a.clamp_lots) cfg.set("clamp_lots", "true");
  const auto ecfg = EngineConfig::from(cfg);
  const auto scfg = SimConfig::from(cfg);

  const Universe full = Universe::load(a.universe);
  std::vector<std::string> warnings;
  const Universe universe = exclude_zero_lot(full, ecfg.a_trans, ecfg.clamp_lots, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (universe.size() < 2) throw Error(Errc::invalid_config, "fewer than two tradable stocks");
  const SimilarityMatrix sim = project_similarity(SimilarityMatrix::load(a.sim, full), full, universe);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  auto feed = open_in(a.feed);
  auto decisions = open_out(dir / "decisions.csv");
  BackcastSinks sinks{&decisions, !a.latency_out.empty()};
  const auto result = run_backcast(feed, universe, sim, ecfg, scfg, sinks);

  {
    auto out = open_out(dir / "daily.csv");
    write_daily_reports(out, result.days);
  }
  {
    auto out = open_out(dir / "ledger.csv");
    write_ledger(out, result.ledger, universe);
  }
  {
    auto out = open_out(dir / "summary.json");
    write_summary_json(out, result);
  }
  {
    nlohmann::ordered_json m;
    m["command"] = "backcast";
    m["version"] = kVersion;
    m["feed"] = a.feed;
    m["universe"] = a.universe;
    m["similarity"] = a.sim;
    m["config"] = a.config;
    m["seed"] = ecfg.seed;
    m["output_dir"] = a.out;
    nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.entries()) resolved[k] = v;
    m["settings"] = resolved;
    auto out = open_out(dir / "manifest.json");
    out << m.dump(2) << '\n';
  }
  if (!a.latency_out.empty()) {
    auto out = open_out(a.latency_out);
    result.latency.write(out);
    std::cerr << "latency: events=" << result.latency.count() << " mean_ns=" << std::llround(result.latency.mean())
              << " p50<=" << result.latency.quantile_bound(0.5) << " p99<=" << result.latency.quantile_bound(0.99)
              << " max=" << result.latency.max() << '\n';
  }
  Decimal pnl;
  for (const auto& d : result.days) pnl += d.realized_pnl;
  std::cout << "events " << result.events << ", sb runs " << result.sb_runs << ", round trips "
            << result.ledger.size() << ", realized pnl " << pnl.str() << '\n';
  return 0;
}

struct SolveArgs {
  std::string graph, tabu;
  int restarts = 100;
  std::uint32_t seed = 1;
  double threshold = -0.002;
  int steps = 50;
  float dt = 0.65f;
  float c0_gain = 3.0f;
  std::optional<double> penalty_ratio;
};

QuboProblem load_with_tabu(const std::string& graph, const std::string& tabu) {
  QuboProblem q = load_problem(graph);
  if (!tabu.empty()) {
    auto in = open_in(tabu);
    q.tabu = read_tabu(in, q.n_stocks());
  }
  return q;
}

int run_solve_cmd(const SolveArgs& a) {
  QuboProblem q = load_with_tabu(a.graph, a.tabu);
  if (a.penalty_ratio) {
    EngineConfig e;
    e.penalty_ratio = *a.penalty_ratio;
    q.m_p = penalty_weight(e, q.graph);
  }
  SbParams p;
  p.n_steps = a.steps;
  p.dt = a.dt;
  p.c0_gain = a.c0_gain;
  XorshiftRng rng(a.seed);
  const auto res = solve_best_of(q, p, rng, a.restarts);
  const auto decoded = decode(res.best, q.graph);
  const auto verdict = judge(decoded, q.graph, q.tabu, a.threshold);
  std::cout << "path,weight_sum,energy,verdict,reason\n";
  std::cout << (decoded.ok() ? format_path(decoded.path) : "") << ',' << csv::format_double(verdict.weight_sum) << ','
            << csv::format_double(res.energy) << ',' << to_string(verdict.outcome) << ',' << to_string(verdict.reason)
            << '\n';
  return 0;
}

int run_oracle_cmd(const std::string& graph, const std::string& tabu, double threshold, int top, int max_len) {
  const QuboProblem q = load_with_tabu(graph, tabu);
  const auto res = enumerate_cycles(q.graph, q.tabu, max_len, top > 0 ? static_cast<std::size_t>(top) : 0);
  std::cout << "rank,path,short,long,weight_sum,tradable\n";
  int rank = 1;
  for (const auto& c : res.ranked) {
    const auto pair = c.pair();
    std::cout << rank++ << ',' << format_path(c) << ',' << pair.short_leg << ',' << pair.long_leg << ','
              << csv::format_double(c.weight_sum) << ',' << (c.weight_sum <= threshold ? 1 : 0) << '\n';
  }
  std::cerr << res.count << " cycles enumerated\n";
  return 0;
}

int run_gen_feed_cmd(const std::string& spec_path, const std::string& out, const std::string& universe_out,
                     std::optional<std::uint64_t> seed) {
  const auto spec = FeedSpec::load(spec_path);
  {
    auto f = open_out(out);
    generate_feed(spec, seed ? *seed : spec.seed, f);
  }
  if (!universe_out.empty()) {
    auto f = open_out(universe_out);
    spec_universe(spec).write(f);
  }
  return 0;
}

int run_build_sim_cmd(const std::string& feed, const std::string& universe_path, const std::string& out,
                      double interval_sec) {
  const auto universe = Universe::load(universe_path);
  auto in = open_in(feed);
  const auto hist = sample_daily_mids(in, universe, static_cast<std::int64_t>(interval_sec * 1e9));
  const auto sim = build_similarity(hist);
  auto f = open_out(out);
  sim.write(f, universe);
  return 0;
}

struct BenchArgs {
  BenchConfig cfg;
  std::string out, kind = "market", penalty = "relative";
  double penalty_ratio = 1.0;
  float c0_gain = 3.0f;
  int steps = 50;
  float dt = 0.65f;
};

int run_bench_cmd(BenchArgs a) {
  if (a.kind == "uniform")
    a.cfg.kind = InstanceKind::uniform;
  else if (a.kind != "market")
    throw Error(Errc::invalid_config, "kind must be market or uniform");
  Config c;
  c.set("penalty", a.penalty);
  c.set("penalty_ratio", csv::format_double(a.penalty_ratio));
  c.set("sb_c0_gain", csv::format_double(a.c0_gain));
  c.set("sb_steps", std::to_string(a.steps));
  c.set("sb_dt", csv::format_double(a.dt));
  a.cfg.engine = EngineConfig::from(c);
  const auto rows = run_bench(a.cfg);
  if (a.out.empty()) {
    write_bench_csv(std::cout, rows);
  } else {
    auto f = open_out(a.out);
    write_bench_csv(f, rows);
  }
  int ok = 0, top3 = 0, gs = 0;
  for (const auto& r : rows) {
    ok += r.success;
    top3 += r.top3;
    gs += r.ground_state_cycle;
  }
  std::cerr << "optimal " << ok << '/' << rows.size() << ", top-3 " << top3 << '/' << rows.size()
            << ", QUBO minimum is a single dummy cycle in " << gs << '/' << rows.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairs trading on a market graph with a simulated-bifurcation path search"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  BackcastArgs bc;
  auto* backcast = app.add_subcommand("backcast", "Replay a feed through the engine and report P&L");
  backcast->add_option("--feed", bc.feed, "Feed CSV")->required();
  backcast->add_option("--universe", bc.universe, "Universe CSV")->required();
  backcast->add_option("--sim", bc.sim, "Similarity CSV")->required();
  backcast->add_option("--config", bc.config, "key = value config file");
  backcast->add_option("--out", bc.out, "Output directory")->required();
  backcast->add_option("--seed", bc.seed, "Engine and fill-model seed");
  backcast->add_option("--set", bc.sets, "Override a config key (key=value)");
  backcast->add_option("--latency-out", bc.latency_out, "Write a per-event latency histogram CSV");
  backcast->add_flag("--clamp-lots", bc.clamp_lots, "Trade zero-lot stocks at one lot instead of excluding them");

  SolveArgs sv;
  auto* solve = app.add_subcommand("solve", "Run the SB solver on a graph dump");
  solve->add_option("--graph", sv.graph, "Graph dump CSV")->required();
  solve->add_option("--tabu", sv.tabu, "Tabu CSV");
  solve->add_option("--restarts", sv.restarts)->check(CLI::PositiveNumber);
  solve->add_option("--seed", sv.seed)->check(CLI::Range(1u, 0xffffffffu));
  solve->add_option("--threshold", sv.threshold);
  solve->add_option("--steps", sv.steps)->check(CLI::PositiveNumber);
  solve->add_option("--dt", sv.dt)->check(CLI::PositiveNumber);
  solve->add_option("--c0-gain", sv.c0_gain)->check(CLI::PositiveNumber);
  solve->add_option("--penalty-ratio", sv.penalty_ratio, "Use m_p = ratio * max|w| instead of the dump's m_p");

  std::string og, ot;
  double othr = -0.002;
  int otop = 0, omax = 0;
  auto* oracle = app.add_subcommand("oracle", "Enumerate every cycle through the dummy node");
  oracle->add_option("--graph", og, "Graph dump CSV")->required();
  oracle->add_option("--tabu", ot, "Tabu CSV");
  oracle->add_option("--threshold", othr);
  oracle->add_option("--top", otop, "Keep only the best K cycles");
  oracle->add_option("--max-len", omax, "Longest interior length (0 = N)");

  std::string gs, gout, guni;
  std::optional<std::uint64_t> gseed;
  auto* gen = app.add_subcommand("gen-feed", "Generate a synthetic feed from a JSON spec");
  gen->add_option("--spec", gs, "Market spec JSON")->required();
  gen->add_option("--out", gout, "Feed CSV to write")->required();
  gen->add_option("--universe-out", guni, "Also write the universe CSV");
  gen->add_option("--seed", gseed, "Overrides the spec's seed");

  std::string sf, su, so;
  double sint = 60.0;
  auto* build = app.add_subcommand("build-sim", "Build the DTW similarity matrix from a historical feed");
  build->add_option("--feed", sf, "Feed CSV")->required();
  build->add_option("--universe", su, "Universe CSV")->required();
  build->add_option("--out", so, "Similarity CSV to write")->required();
  build->add_option("--interval-sec", sint, "Sampling interval")->check(CLI::PositiveNumber);

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "SB-vs-oracle success rate on random instances");
  bench->add_option("--instances", bn.cfg.instances)->check(CLI::PositiveNumber);
  bench->add_option("--stocks", bn.cfg.n_stocks)->check(CLI::Range(2, kOracleMaxStocks));
  bench->add_option("--restarts", bn.cfg.restarts)->check(CLI::PositiveNumber);
  bench->add_option("--seed", bn.cfg.seed);
  bench->add_option("--kind", bn.kind, "market or uniform");
  bench->add_option("--penalty", bn.penalty, "relative, dominant or fixed");
  bench->add_option("--penalty-ratio", bn.penalty_ratio);
  bench->add_option("--c0-gain", bn.c0_gain);
  bench->add_option("--steps", bn.steps);
  bench->add_option("--dt", bn.dt);
  bench->add_option("--out", bn.out, "CSV to write (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*backcast) return run_backcast_cmd(bc);
    if (*solve) return run_solve_cmd(sv);
    if (*oracle) return run_oracle_cmd(og, ot, othr, otop, omax);
    if (*gen) return run_gen_feed_cmd(gs, gout, guni, gseed);
    if (*build) return run_build_sim_cmd(sf, su, so, sint);
    if (*bench) return run_bench_cmd(bn);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
