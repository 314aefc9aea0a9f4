#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbpairs/decimal.hpp"
#include "sbpairs/feed.hpp"
#include "sbpairs/marketgraph.hpp"

namespace sbpairs {

struct StockSpec {
  std::string code;
  std::int64_t min_lot = 100;
  Decimal price;                  // first day's base price
  Decimal tick = Decimal::from_int(1);
  std::int64_t spread_ticks = 1;  // ask - bid
  double vol = 0.0;               // idiosyncratic, log units per sqrt(minute)
  std::string block;              // empty = no common factor
  double beta = 1.0;
};

struct BlockSpec {
  std::string name;
  double vol = 0.0;  // common factor, log units per sqrt(minute)
};

struct ShockSpec {
  int day = 0;
  std::int64_t time = 0;  // ns after midnight
  std::string stock;
  double magnitude = 0.0;          // log jump
  double half_life_minutes = 0.0;  // 0 = permanent
};

// Synthetic market description, read from JSON.
struct FeedSpec {
  std::string start_date = "2024-01-04";  // weekends are skipped
  int days = 1;
  std::int64_t session_open = 9LL * 3600 * 1'000'000'000;
  std::int64_t session_close = 15LL * 3600 * 1'000'000'000;
  std::int64_t events_per_day = 10'000;
  double ou_theta = 0.05;  // idiosyncratic mean reversion per minute
  std::uint64_t seed = 1;
  std::vector<BlockSpec> blocks;
  std::vector<StockSpec> stocks;
  std::vector<ShockSpec> shocks;

  // Throws InvalidSpec.
  static FeedSpec parse_json(std::istream& in);
  static FeedSpec load(const std::string& path);
  void validate() const;
};

Universe spec_universe(const FeedSpec& spec);

// Correlated random-walk mids (block factor + OU idiosyncratic term +
// scheduled shocks), quoted on the tick grid. One O record per stock at the
// open, events_per_day quotes round-robin over the stocks, one C record per
// stock at the close. Deterministic per seed.
void generate_feed(const FeedSpec& spec, std::uint64_t seed, std::ostream& out);

// Normalized mid (mid / base price) of every stock sampled every `interval`
// from each session's open to its close, last value carried forward.
// Result[stock-1][day] is one day's sequence.
std::vector<DailySequences> sample_daily_mids(std::istream& feed, const Universe& universe,
                                              std::int64_t interval_ns = 60'000'000'000);

}  // namespace sbpairs
