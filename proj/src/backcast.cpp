#include "sbpairs/backcast.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "sbpairs/error.hpp"

namespace sbpairs {

const std::set<std::string, std::less<>>& sim_config_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "commission_rate", "close_margin", "fill_model", "lapse_probability", "sim_seed", "trading_days", "capital",
  };
  return keys;
}

SimConfig SimConfig::from(const Config& cfg) {
  SimConfig c;
  c.commission_rate = cfg.get_decimal("commission_rate", c.commission_rate);
  c.close_margin = cfg.get_decimal("close_margin", c.close_margin);
  const auto model = cfg.get_string("fill_model", "intended");
  if (model == "intended")
    c.fill_model = FillModel::intended;
  else if (model == "lapse")
    c.fill_model = FillModel::lapse;
  else
    throw Error(Errc::invalid_config, "fill_model must be intended or lapse");
  c.lapse_probability = cfg.get_double("lapse_probability", c.lapse_probability);
  const auto seed = cfg.get_int("sim_seed", c.seed);
  if (seed <= 0 || seed > 0xffffffffLL) throw Error(Errc::invalid_config, "sim_seed must be in 1..2^32-1");
  c.seed = static_cast<std::uint32_t>(seed);
  c.trading_days_per_year = static_cast<int>(cfg.get_int("trading_days", c.trading_days_per_year));
  if (cfg.has("capital")) c.capital = cfg.get_decimal("capital", Decimal{});
  c.validate();
  return c;
}

void SimConfig::validate() const {
  if (commission_rate < Decimal{} || commission_rate >= Decimal::from_int(1))
    throw Error(Errc::invalid_config, "commission_rate must be in [0, 1)");
  if (!(lapse_probability >= 0.0 && lapse_probability <= 1.0))
    throw Error(Errc::invalid_config, "lapse_probability must be in [0, 1]");
  if (trading_days_per_year < 1) throw Error(Errc::invalid_config, "trading_days must be >= 1");
  if (capital && *capital <= Decimal{}) throw Error(Errc::invalid_config, "capital must be > 0");
}

Decimal pnl_round_trip(const RoundTrip& t, Decimal commission_rate) {
  if (!t.open_short || !t.open_long || !t.close_short || !t.close_long)
    throw Error(Errc::incomplete_round_trip, "round trip needs all four legs");
  const Decimal gross = (t.open_short->price - t.close_short->price) * t.open_short->shares +
                        (t.close_long->price - t.open_long->price) * t.open_long->shares;
  const Decimal amount = t.open_short->price * t.open_short->shares + t.open_long->price * t.open_long->shares +
                         t.close_short->price * t.close_short->shares + t.close_long->price * t.close_long->shares;
  return gross - commission_rate.mul(amount);
}

std::string_view to_string(SharpeFlag f) {
  switch (f) {
    case SharpeFlag::ok: return "ok";
    case SharpeFlag::undefined: return "undefined";
    case SharpeFlag::positive_infinite: return "+inf";
    case SharpeFlag::negative_infinite: return "-inf";
  }
  return "unknown";
}

PerformanceStats performance_stats(std::span<const double> daily_pnl, double capital, int days_per_year) {
  if (daily_pnl.size() < 2) throw Error(Errc::insufficient_data, "need at least two daily returns");
  if (!(capital > 0.0)) throw Error(Errc::invalid_config, "capital must be > 0");
  PerformanceStats s;
  s.days = static_cast<int>(daily_pnl.size());
  const double n = static_cast<double>(daily_pnl.size());
  double sum = 0.0;
  for (double p : daily_pnl) sum += p / capital;
  s.mean_daily_return = sum / n;
  double ss = 0.0;
  for (double p : daily_pnl) {
    const double d = p / capital - s.mean_daily_return;
    ss += d * d;
  }
  s.std_daily_return = std::sqrt(ss / (n - 1.0));
  s.annualized_return = s.mean_daily_return * days_per_year;
  s.risk = s.std_daily_return * std::sqrt(static_cast<double>(days_per_year));
  if (s.risk > 0.0) {
    s.sharpe = s.annualized_return / s.risk;
  } else if (s.annualized_return > 0.0) {
    s.flag = SharpeFlag::positive_infinite;
    s.sharpe = std::numeric_limits<double>::infinity();
  } else if (s.annualized_return < 0.0) {
    s.flag = SharpeFlag::negative_infinite;
    s.sharpe = -std::numeric_limits<double>::infinity();
  } else {
    s.flag = SharpeFlag::undefined;
  }
  return s;
}

std::string format_date(std::int64_t ts) {
  using namespace std::chrono;
  const sys_days day = floor<days>(sys_time<nanoseconds>(nanoseconds(ts)));
  const year_month_day ymd(day);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

void LatencyHistogram::add(std::int64_t ns) {
  if (ns < 1) ns = 1;
  const int b = std::min(kBuckets - 1, static_cast<int>(std::bit_width(static_cast<std::uint64_t>(ns))) - 1);
  ++counts_[static_cast<std::size_t>(b)];
  ++count_;
  total_ += ns;
  max_ = std::max(max_, ns);
}

std::int64_t LatencyHistogram::quantile_bound(double q) const {
  if (count_ == 0) return 0;
  const auto target = static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(count_)));
  std::uint64_t seen = 0;
  for (int b = 0; b < kBuckets; ++b) {
    seen += counts_[static_cast<std::size_t>(b)];
    if (seen >= target && seen > 0) return std::int64_t{1} << (b + 1);
  }
  return max_;
}

void LatencyHistogram::write(std::ostream& out) const {
  out << "bucket_lo_ns,bucket_hi_ns,count\n";
  for (int b = 0; b < kBuckets; ++b) {
    if (counts_[static_cast<std::size_t>(b)] == 0) continue;
    out << (std::int64_t{1} << b) << ',' << (std::int64_t{1} << (b + 1)) << ',' << counts_[static_cast<std::size_t>(b)]
        << '\n';
  }
}

namespace {

class Simulator {
 public:
  Simulator(const Universe& universe, const SimilarityMatrix& sim, const EngineConfig& ecfg, const SimConfig& scfg,
            const BackcastSinks& sinks)
      : universe_(universe),
        scfg_(scfg),
        engine_(universe, sim, ecfg),
        positions_(PositionConfig{scfg.commission_rate, scfg.close_margin, ecfg.window}),
        rng_(scfg.seed) {
    if (sinks.decisions) {
      std::ostream* out = sinks.decisions;
      write_decision_header(*out);
      engine_.set_decision_sink([out, &universe](const DecisionRecord& r) { write_decision(*out, r, universe); });
    }
    measure_ = sinks.measure_latency;
  }

  BackcastResult run(std::istream& feed) {
    FeedReader reader(feed);
    std::int64_t last_ts = 0;
    while (auto ev = reader.next()) {
      const auto t0 = measure_ ? std::chrono::steady_clock::now() : std::chrono::steady_clock::time_point{};
      step(*ev);
      if (measure_)
        result_.latency.add(std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
                                .count());
      last_ts = ev->timestamp_ns;
      ++result_.events;
    }
    // A feed that stops mid-session still ends flat.
    if (positions_.active() > 0) flatten(last_ts);
    finish();
    return std::move(result_);
  }

 private:
  DailyReport& today(std::int64_t ts) {
    const auto start = day_start(ts);
    if (result_.days.empty() || start != current_day_) {
      current_day_ = start;
      DailyReport d;
      d.date = format_date(ts);
      result_.days.push_back(d);
    }
    return result_.days.back();
  }

  ExecutionReport execute(const Order& o, std::int64_t ts, bool force) {
    ExecutionReport r{o.id, o.role, true, o.limit, ts};
    if (!force && scfg_.fill_model == FillModel::lapse && rng_.uniform(0.0f, 1.0f) < scfg_.lapse_probability)
      r.filled = false;
    return r;
  }

  // One attempt per order; re-issued close orders wait for the next event.
  void route(std::vector<Order> orders, std::int64_t ts, bool force) {
    std::deque<Order> queue(orders.begin(), orders.end());
    while (!queue.empty()) {
      const Order o = queue.front();
      queue.pop_front();
      const auto before = positions_.fills().size();
      auto next = positions_.on_execution(execute(o, ts, force), engine_.book());
      if (positions_.fills().size() > before) today(ts).transaction_amount += positions_.fills().back().amount();
      for (auto& n : next) {
        if (force || !o.closing)
          queue.push_back(n);  // unwinding an unintended open goes out at once
        else
          deferred_.push_back(n);
      }
    }
  }

  void confirm(std::int64_t ts) {
    for (const Pair p : positions_.take_confirmations()) engine_.on_close_confirmed(p, ts);
    while (ledger_seen_ < positions_.ledger().size()) {
      const auto& row = positions_.ledger()[ledger_seen_++];
      auto& d = today(row.close_ts);
      d.realized_pnl += row.realized_pnl;
      ++d.closes;
    }
  }

  void flatten(std::int64_t ts) {
    std::vector<Order> pending;
    pending.swap(deferred_);
    route(std::move(pending), ts, true);
    route(positions_.unwind_all(engine_.book(), ts), ts, true);
    confirm(ts);
  }

  void step(const FeedEvent& ev) {
    const int index = universe_.index_of(ev.code);
    today(ev.timestamp_ns);
    auto intents = engine_.on_feed(index, ev);
    const std::int64_t ts = ev.timestamp_ns;

    if (!deferred_.empty()) {
      std::vector<Order> pending;
      pending.swap(deferred_);
      route(std::move(pending), ts, false);
    }
    for (const auto& intent : intents) {
      ++result_.intents;
      ++today(ts).opens;
      route(positions_.open(intent), ts, false);
    }
    if (ev.kind == FeedKind::quote) route(positions_.check_close(engine_.book(), ts), ts, false);
    confirm(ts);
    if (ev.kind == FeedKind::session_close) flatten(ts);
  }

  void finish() {
    Decimal amount, pnl;
    for (auto& d : result_.days) {
      amount += d.transaction_amount;
      pnl += d.realized_pnl;
      d.cumulative_amount = amount;
      d.cumulative_pnl = pnl;
    }
    result_.ledger = positions_.ledger();
    result_.sb_runs = engine_.sb_runs();
    result_.orders = positions_.orders_sent();
    result_.fills = positions_.fills().size();
    result_.lapses = positions_.lapses();
    result_.open_at_end = positions_.active();
    const auto& ecfg = engine_.config();
    result_.capital = scfg_.capital ? *scfg_.capital : ecfg.a_trans * ecfg.p_max;
    if (result_.days.size() >= 2) {
      std::vector<double> daily;
      for (const auto& d : result_.days) daily.push_back(d.realized_pnl.to_double());
      result_.stats = performance_stats(daily, result_.capital.to_double(), scfg_.trading_days_per_year);
    }
  }

  const Universe& universe_;
  SimConfig scfg_;
  Engine engine_;
  PositionManager positions_;
  XorshiftRng rng_;
  bool measure_ = false;
  std::vector<Order> deferred_;
  std::size_t ledger_seen_ = 0;
  std::int64_t current_day_ = 0;
  BackcastResult result_;
};

}  // namespace

BackcastResult run_backcast(std::istream& feed, const Universe& universe, const SimilarityMatrix& sim,
                            const EngineConfig& engine_cfg, const SimConfig& sim_cfg, const BackcastSinks& sinks) {
  sim_cfg.validate();
  Simulator s(universe, sim, engine_cfg, sim_cfg, sinks);
  return s.run(feed);
}

void write_daily_reports(std::ostream& out, const std::vector<DailyReport>& days) {
  out << "date,transaction_amount,realized_pnl,opens,closes,cumulative_amount,cumulative_pnl\n";
  for (const auto& d : days)
    out << d.date << ',' << d.transaction_amount.str() << ',' << d.realized_pnl.str() << ',' << d.opens << ','
        << d.closes << ',' << d.cumulative_amount.str() << ',' << d.cumulative_pnl.str() << '\n';
}

void write_ledger(std::ostream& out, const std::vector<LedgerRow>& ledger, const Universe& universe) {
  write_ledger_header(out);
  for (const auto& row : ledger) write_ledger_row(out, row, universe);
}

void write_summary_json(std::ostream& out, const BackcastResult& r) {
  nlohmann::ordered_json j;
  Decimal pnl, amount;
  for (const auto& d : r.days) {
    pnl += d.realized_pnl;
    amount += d.transaction_amount;
  }
  j["days"] = r.days.size();
  j["events"] = r.events;
  j["sb_runs"] = r.sb_runs;
  j["round_trips"] = r.ledger.size();
  j["transaction_amount"] = amount.str();
  j["realized_pnl"] = pnl.str();
  j["capital"] = r.capital.str();
  j["orders"] = r.orders;
  j["fills"] = r.fills;
  j["lapses"] = r.lapses;
  j["fill_rate"] = r.orders ? static_cast<double>(r.fills) / static_cast<double>(r.orders) : 0.0;
  j["open_at_end"] = r.open_at_end;
  if (r.stats) {
    j["annualized_return"] = r.stats->annualized_return;
    j["risk"] = r.stats->risk;
    j["sharpe"] = std::isfinite(r.stats->sharpe) ? r.stats->sharpe : 0.0;
    j["sharpe_flag"] = std::string(to_string(r.stats->flag));
  } else {
    j["annualized_return"] = nullptr;
    j["risk"] = nullptr;
    j["sharpe"] = nullptr;
    j["sharpe_flag"] = "insufficient-data";
  }
  out << j.dump(2) << '\n';
}

}  // namespace sbpairs
