#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbpairs/config.hpp"
#include "sbpairs/decimal.hpp"
#include "sbpairs/engine.hpp"
#include "sbpairs/positions.hpp"

namespace sbpairs {

enum class FillModel { intended, lapse };

struct SimConfig {
  Decimal commission_rate = Decimal::parse("0.0005").value();
  Decimal close_margin;
  FillModel fill_model = FillModel::intended;
  double lapse_probability = 0.0;
  std::uint32_t seed = 1;
  int trading_days_per_year = 245;
  std::optional<Decimal> capital;  // default a_trans * p_max

  static SimConfig from(const Config& cfg);
  void validate() const;
};

const std::set<std::string, std::less<>>& sim_config_keys();

struct LegFill {
  Decimal price;
  std::int64_t shares = 0;
};

struct RoundTrip {
  std::optional<LegFill> open_short;   // sell
  std::optional<LegFill> open_long;    // buy
  std::optional<LegFill> close_short;  // buy back
  std::optional<LegFill> close_long;   // sell
};

// (open_bid_s - close_ask_s) * shares_s + (close_bid_l - open_ask_l) * shares_l
// - rate * (sum of the four transaction amounts). Throws IncompleteRoundTrip.
Decimal pnl_round_trip(const RoundTrip& trip, Decimal commission_rate);

enum class SharpeFlag { ok, undefined, positive_infinite, negative_infinite };
std::string_view to_string(SharpeFlag f);

struct PerformanceStats {
  double mean_daily_return = 0.0;
  double std_daily_return = 0.0;  // sample (n - 1)
  double annualized_return = 0.0;
  double risk = 0.0;
  double sharpe = 0.0;
  SharpeFlag flag = SharpeFlag::ok;
  int days = 0;
};

// Daily return = pnl / capital; annualized by days_per_year and its square
// root. Throws InsufficientData for fewer than two days.
PerformanceStats performance_stats(std::span<const double> daily_pnl, double capital, int days_per_year = 245);

struct DailyReport {
  std::string date;  // YYYY-MM-DD (UTC)
  Decimal transaction_amount;
  Decimal realized_pnl;
  int opens = 0;
  int closes = 0;
  Decimal cumulative_amount;
  Decimal cumulative_pnl;
};

std::string format_date(std::int64_t ts);

// Per-event wall-clock processing time in power-of-two nanosecond buckets.
class LatencyHistogram {
 public:
  static constexpr int kBuckets = 40;

  void add(std::int64_t ns);
  std::uint64_t count() const { return count_; }
  std::int64_t max() const { return max_; }
  // Upper edge of the bucket holding the q-quantile.
  std::int64_t quantile_bound(double q) const;
  double mean() const { return count_ ? static_cast<double>(total_) / static_cast<double>(count_) : 0.0; }
  void write(std::ostream& out) const;

 private:
  std::array<std::uint64_t, kBuckets> counts_{};
  std::uint64_t count_ = 0;
  std::int64_t total_ = 0;
  std::int64_t max_ = 0;
};

struct BackcastResult {
  std::vector<DailyReport> days;
  std::vector<LedgerRow> ledger;
  std::uint64_t events = 0;
  std::uint64_t sb_runs = 0;
  std::uint64_t intents = 0;
  std::uint64_t orders = 0;
  std::uint64_t fills = 0;
  std::uint64_t lapses = 0;
  std::size_t open_at_end = 0;
  Decimal capital;
  std::optional<PerformanceStats> stats;
  LatencyHistogram latency;
};

struct BackcastSinks {
  std::ostream* decisions = nullptr;  // decision log CSV
  bool measure_latency = false;
};

BackcastResult run_backcast(std::istream& feed, const Universe& universe, const SimilarityMatrix& sim,
                            const EngineConfig& engine_cfg, const SimConfig& sim_cfg, const BackcastSinks& sinks = {});

void write_daily_reports(std::ostream& out, const std::vector<DailyReport>& days);
void write_ledger(std::ostream& out, const std::vector<LedgerRow>& ledger, const Universe& universe);
void write_summary_json(std::ostream& out, const BackcastResult& result);

}  // namespace sbpairs
