#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbpairs/config.hpp"
#include "sbpairs/decimal.hpp"
#include "sbpairs/feed.hpp"
#include "sbpairs/marketgraph.hpp"
#include "sbpairs/qubo.hpp"
#include "sbpairs/sbm.hpp"
#include "sbpairs/verify.hpp"

namespace sbpairs {

inline constexpr std::int64_t kNsPerDay = 86'400'000'000'000;

// Nanoseconds since midnight of the timestamp's (UTC) day.
inline std::int64_t time_of_day(std::int64_t ts) { return ((ts % kNsPerDay) + kNsPerDay) % kNsPerDay; }
inline std::int64_t day_start(std::int64_t ts) { return ts - time_of_day(ts); }

struct TradingWindow {
  std::int64_t open = 9LL * 3600 * 1'000'000'000;
  std::int64_t close = 15LL * 3600 * 1'000'000'000;
  std::int64_t last_open = (14LL * 3600 + 30 * 60) * 1'000'000'000;  // no new opens from here
  std::int64_t unwind = (14LL * 3600 + 55 * 60) * 1'000'000'000;     // forced closes from here

  bool contains(std::int64_t ts) const {
    const auto t = time_of_day(ts);
    return t >= open && t < close;
  }
  bool allows_open(std::int64_t ts) const {
    const auto t = time_of_day(ts);
    return t >= open && t < last_open;
  }
  bool must_unwind(std::int64_t ts) const { return time_of_day(ts) >= unwind; }
};

enum class PenaltyMode {
  dominant,  // 1 + sum |w|
  relative,  // ratio * max |w|
  fixed,
};

struct EngineConfig {
  int p_max = 16;
  Decimal a_trans = Decimal::from_int(1'500'000);
  double threshold = -0.002;
  int restarts_per_event = 1;
  int max_runs_per_event = 32;
  TradingWindow window;
  bool kill_switch = false;
  bool clamp_lots = false;
  std::uint32_t seed = 1;
  double m_c = 1.0;
  PenaltyMode penalty = PenaltyMode::relative;
  double penalty_ratio = 1.0;
  double penalty_weight = 1.0;  // used with PenaltyMode::fixed
  SbParams sb = default_sb();

  static SbParams default_sb() {
    SbParams p;
    p.c0_gain = 3.0f;
    return p;
  }

  // Reads the engine keys listed in engine_config_keys(); missing keys keep
  // their defaults. Throws InvalidConfig.
  static EngineConfig from(const Config& cfg);
  void validate() const;
};

const std::set<std::string, std::less<>>& engine_config_keys();

// m_p for a graph under the configured penalty mode.
double penalty_weight(const EngineConfig& cfg, const MarketGraph& graph);

// round(a_trans / (min_lot_shares * base_price)), ties away from zero.
std::int64_t lot_size(const StockRef& stock, Decimal a_trans, Decimal base_price);
inline std::int64_t lot_size(const StockRef& stock, Decimal a_trans) {
  return lot_size(stock, a_trans, stock.base_price);
}

// Drops stocks that size to zero lots (or keeps them at one lot with
// `clamp`), appending one warning line per affected stock.
Universe exclude_zero_lot(const Universe& universe, Decimal a_trans, bool clamp, std::vector<std::string>* warnings);

struct OrderLeg {
  int stock = 0;
  std::int64_t lots = 0;
  std::int64_t shares = 0;
  Decimal price;  // limit
};

struct OrderIntent {
  std::int64_t timestamp_ns = 0;
  Pair pair;
  CyclePath path;
  OrderLeg sell;  // short leg at its bid
  OrderLeg buy;   // long leg at its ask
};

struct OpenEntry {
  Pair pair;
  std::int64_t opened_ns = 0;
};

class OpenList {
 public:
  bool contains(Pair p) const;
  std::size_t size() const { return entries_.size(); }
  void add(Pair p, std::int64_t ts);
  void remove(Pair p);  // throws UnknownPair
  const std::vector<OpenEntry>& entries() const { return entries_; }
  TabuList to_tabu(int n_stocks) const;

 private:
  std::vector<OpenEntry> entries_;
};

// One row of the decision log.
struct DecisionRecord {
  std::int64_t timestamp_ns = 0;
  int event = 0;
  Pair pair;  // {0,0} when no pair is involved
  std::string path;
  double weight_sum = 0.0;
  std::string verdict;
  std::string action;
};

void write_decision_header(std::ostream& out);
void write_decision(std::ostream& out, const DecisionRecord& rec, const Universe& universe);

// Returns the chosen assignment for one SB execution.
using SolverFn = std::function<EdgeVars(const QuboProblem&, XorshiftRng&)>;

// Event-driven decision pipeline: feed -> graph -> repeated SB runs ->
// verification -> judgment -> order intents. Single-threaded.
class Engine {
 public:
  Engine(const Universe& universe, const SimilarityMatrix& sim, EngineConfig cfg);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Applies the feed event and, for quotes inside the window with a complete
  // book, runs the consecutive loop.
  std::vector<OrderIntent> on_feed(const FeedEvent& ev);
  std::vector<OrderIntent> on_feed(int index, const FeedEvent& ev);

  // A pair position has been fully closed; the next SB execution starts by
  // copying the open list into the tabu list.
  void on_close_confirmed(Pair pair, std::int64_t ts);

  void set_solver(SolverFn solver) { solver_ = std::move(solver); }
  void set_decision_sink(std::function<void(const DecisionRecord&)> sink) { sink_ = std::move(sink); }
  void set_kill_switch(bool on) { cfg_.kill_switch = on; }

  const Universe& universe() const { return *universe_; }
  const PriceBook& book() const { return book_; }
  const MarketGraph& graph() const { return graph_; }
  const TabuList& tabu() const { return tabu_; }
  const OpenList& open_list() const { return open_; }
  bool refresh_pending() const { return refresh_pending_; }
  const EngineConfig& config() const { return cfg_; }
  std::uint64_t sb_runs() const { return sb_runs_; }

  // Lots for a stock under the current day's base price; 0 if untradable.
  std::int64_t lots_for(int stock) const;

 private:
  std::vector<OrderIntent> consecutive_loop(std::int64_t ts);
  std::optional<std::string> judgment(Pair pair, std::int64_t ts) const;
  void emit(DecisionRecord rec);

  const Universe* universe_;
  const SimilarityMatrix* sim_;
  EngineConfig cfg_;
  PriceBook book_;
  MarketGraph graph_;
  TabuList tabu_;
  OpenList open_;
  bool refresh_pending_ = false;
  XorshiftRng rng_;
  SolverFn solver_;
  std::function<void(const DecisionRecord&)> sink_;
  std::uint64_t sb_runs_ = 0;
};

}  // namespace sbpairs
