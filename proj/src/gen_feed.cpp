#include "sbpairs/gen_feed.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include "json.hpp"
#include "sbpairs/config.hpp"
#include "sbpairs/engine.hpp"
#include "sbpairs/error.hpp"

namespace sbpairs {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::invalid_spec, what); }

Decimal decimal_field(const nlohmann::json& j, const char* key, Decimal fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  std::optional<Decimal> d;
  if (v.is_string())
    d = Decimal::parse(v.get<std::string>());
  else if (v.is_number_integer())
    d = Decimal::from_int(v.get<std::int64_t>());
  else if (v.is_number())
    d = Decimal::from_double(v.get<double>());
  if (!d) invalid(std::string("field '") + key + "' is not a decimal");
  return *d;
}

std::int64_t time_field(const nlohmann::json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return parse_time_of_day(j.at(key).get<std::string>());
  } catch (const std::exception& e) {
    invalid(std::string("field '") + key + "': " + e.what());
  }
}

std::chrono::sys_days parse_date(const std::string& text) {
  using namespace std::chrono;
  int y = 0;
  unsigned m = 0, d = 0;
  if (std::sscanf(text.c_str(), "%d-%u-%u", &y, &m, &d) != 3) invalid("bad date '" + text + "'");
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) invalid("bad date '" + text + "'");
  return sys_days{ymd};
}

// Uniform in (0, 1) from the top 53 bits; std::*_distribution output is not
// specified bit-for-bit across library implementations.
double unit_open(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53; }

class Normal {
 public:
  double operator()(std::mt19937_64& rng) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(unit_open(rng)));
    const double t = 2.0 * std::numbers::pi * unit_open(rng);
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

FeedSpec FeedSpec::parse_json(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("spec is not valid JSON: ") + e.what());
  }
  FeedSpec s;
  try {
    s.start_date = j.value("start_date", s.start_date);
    s.days = j.value("days", s.days);
    s.session_open = time_field(j, "session_open", s.session_open);
    s.session_close = time_field(j, "session_close", s.session_close);
    s.events_per_day = j.value("events_per_day", s.events_per_day);
    s.ou_theta = j.value("ou_theta", s.ou_theta);
    s.seed = j.value("seed", s.seed);
    for (const auto& b : j.value("blocks", nlohmann::json::array()))
      s.blocks.push_back({b.at("name").get<std::string>(), b.value("vol", 0.0)});
    for (const auto& st : j.at("stocks")) {
      StockSpec x;
      x.code = st.at("code").get<std::string>();
      x.min_lot = st.value("min_lot", x.min_lot);
      x.price = decimal_field(st, "price", Decimal{});
      x.tick = decimal_field(st, "tick", x.tick);
      x.spread_ticks = st.value("spread_ticks", x.spread_ticks);
      x.vol = st.value("vol", x.vol);
      x.block = st.value("block", std::string());
      x.beta = st.value("beta", x.beta);
      s.stocks.push_back(std::move(x));
    }
    for (const auto& sh : j.value("shocks", nlohmann::json::array())) {
      ShockSpec x;
      x.day = sh.value("day", 0);
      x.time = time_field(sh, "time", s.session_open);
      x.stock = sh.at("stock").get<std::string>();
      x.magnitude = sh.at("magnitude").get<double>();
      x.half_life_minutes = sh.value("half_life_minutes", 0.0);
      s.shocks.push_back(std::move(x));
    }
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("spec field error: ") + e.what());
  }
  s.validate();
  return s;
}

FeedSpec FeedSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open spec " + path);
  return parse_json(in);
}

void FeedSpec::validate() const {
  parse_date(start_date);
  if (days < 1) invalid("days must be >= 1");
  if (!(session_open < session_close) || session_close > kNsPerDay) invalid("session_open must precede session_close");
  if (events_per_day < 0) invalid("events_per_day must be >= 0");
  if (ou_theta < 0.0) invalid("ou_theta must be >= 0");
  if (stocks.empty()) invalid("no stocks");
  std::map<std::string, int> codes;
  for (const auto& st : stocks) {
    if (st.code.empty() || st.code.find(',') != std::string::npos) invalid("bad stock code '" + st.code + "'");
    if (!codes.emplace(st.code, 0).second) invalid("duplicate stock " + st.code);
    if (st.price <= Decimal{}) invalid(st.code + ": price must be > 0");
    if (st.tick <= Decimal{}) invalid(st.code + ": tick must be > 0");
    if (st.spread_ticks < 1) invalid(st.code + ": spread_ticks must be >= 1");
    if (st.min_lot < 1) invalid(st.code + ": min_lot must be >= 1");
    if (st.vol < 0.0) invalid(st.code + ": vol must be >= 0");
    if (!st.block.empty()) {
      bool found = false;
      for (const auto& b : blocks) found = found || b.name == st.block;
      if (!found) invalid(st.code + ": unknown block " + st.block);
    }
  }
  for (const auto& b : blocks)
    if (b.vol < 0.0) invalid("block " + b.name + ": vol must be >= 0");
  for (const auto& sh : shocks) {
    if (!codes.contains(sh.stock)) invalid("shock on unknown stock " + sh.stock);
    if (sh.day < 0 || sh.day >= days) invalid("shock day out of range");
    if (sh.half_life_minutes < 0.0) invalid("shock half_life_minutes must be >= 0");
  }
}

Universe spec_universe(const FeedSpec& spec) {
  std::vector<StockRef> stocks;
  for (const auto& s : spec.stocks) stocks.push_back(StockRef{0, s.code, s.min_lot, s.price});
  return Universe(std::move(stocks));
}

void generate_feed(const FeedSpec& spec, std::uint64_t seed, std::ostream& out) {
  spec.validate();
  using namespace std::chrono;
  std::mt19937_64 rng(seed);
  Normal normal;
  const std::size_t n = spec.stocks.size();

  std::vector<int> block_of(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = 0; b < spec.blocks.size(); ++b)
      if (spec.blocks[b].name == spec.stocks[i].block) block_of[i] = static_cast<int>(b);

  std::vector<Decimal> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = spec.stocks[i].price;
  std::vector<double> last_mid(n);

  const std::int64_t span = spec.session_close - spec.session_open;
  const double step_minutes =
      static_cast<double>(span) / static_cast<double>(spec.events_per_day + 1) / 60'000'000'000.0;
  const double decay = std::exp(-spec.ou_theta * step_minutes);
  const double ou_scale = spec.ou_theta > 0.0
                              ? std::sqrt((1.0 - decay * decay) / (2.0 * spec.ou_theta))
                              : std::sqrt(step_minutes);
  const double walk_scale = std::sqrt(step_minutes);

  out << "timestamp_ns,stock_code,bid,ask,kind\n";
  sys_days day = parse_date(spec.start_date);
  for (int d = 0; d < spec.days; ++d, day += days{1}) {
    while (weekday(day) == Saturday || weekday(day) == Sunday) day += days{1};
    const std::int64_t midnight = duration_cast<nanoseconds>(day.time_since_epoch()).count();
    const std::int64_t open_ts = midnight + spec.session_open;
    const std::int64_t close_ts = midnight + spec.session_close;

    for (std::size_t i = 0; i < n; ++i) {
      last_mid[i] = base[i].to_double();
      out << format_feed({open_ts, spec.stocks[i].code, base[i], base[i], FeedKind::session_open}) << '\n';
    }

    std::vector<std::vector<const ShockSpec*>> shocks(n);
    for (const auto& sh : spec.shocks)
      if (sh.day == d)
        for (std::size_t i = 0; i < n; ++i)
          if (spec.stocks[i].code == sh.stock) shocks[i].push_back(&sh);

    std::vector<double> factor(spec.blocks.size(), 0.0), idio(n, 0.0);
    for (std::int64_t k = 0; k < spec.events_per_day; ++k) {
      const std::int64_t ts = open_ts + static_cast<std::int64_t>(
                                            static_cast<__int128>(span) * (k + 1) / (spec.events_per_day + 1));
      for (std::size_t b = 0; b < factor.size(); ++b) factor[b] += spec.blocks[b].vol * walk_scale * normal(rng);
      for (std::size_t i = 0; i < n; ++i) idio[i] = idio[i] * decay + spec.stocks[i].vol * ou_scale * normal(rng);

      const std::size_t i = static_cast<std::size_t>(k) % n;
      const auto& st = spec.stocks[i];
      double x = idio[i];
      if (block_of[i] >= 0) x += st.beta * factor[static_cast<std::size_t>(block_of[i])];
      const std::int64_t tod = ts - midnight;
      for (const ShockSpec* sh : shocks[i]) {
        if (tod < sh->time) continue;
        const double minutes = static_cast<double>(tod - sh->time) / 60'000'000'000.0;
        x += sh->half_life_minutes > 0.0 ? sh->magnitude * std::exp2(-minutes / sh->half_life_minutes)
                                         : sh->magnitude;
      }
      const double mid = base[i].to_double() * std::exp(x);
      last_mid[i] = mid;
      const double tick = st.tick.to_double();
      auto bid_ticks = static_cast<std::int64_t>(
          std::floor(mid / tick - static_cast<double>(st.spread_ticks) / 2.0 + 1e-9));
      if (bid_ticks < 1) bid_ticks = 1;
      const Decimal bid = st.tick * bid_ticks;
      const Decimal ask = st.tick * (bid_ticks + st.spread_ticks);
      out << format_feed({ts, st.code, bid, ask, FeedKind::quote}) << '\n';
    }

    for (std::size_t i = 0; i < n; ++i) {
      out << format_feed({close_ts, spec.stocks[i].code, Decimal{}, Decimal{}, FeedKind::session_close}) << '\n';
      // Next day's base: closing mid on the tick grid.
      const double tick = spec.stocks[i].tick.to_double();
      auto ticks = static_cast<std::int64_t>(std::llround(last_mid[i] / tick));
      if (ticks < 1) ticks = 1;
      base[i] = spec.stocks[i].tick * ticks;
    }
  }
}

std::vector<DailySequences> sample_daily_mids(std::istream& feed, const Universe& universe,
                                              std::int64_t interval_ns) {
  if (interval_ns <= 0) throw Error(Errc::invalid_config, "sampling interval must be > 0");
  const auto n = static_cast<std::size_t>(universe.size());
  std::vector<DailySequences> out(n);
  std::vector<double> norm(n, 1.0);
  std::vector<Decimal> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = universe.stocks()[i].base_price;

  bool started = false;
  bool in_day = false;
  std::int64_t day = 0;
  std::int64_t next_sample = 0;

  auto flush_until = [&](std::int64_t ts, bool inclusive) {
    while (in_day && (inclusive ? next_sample <= ts : next_sample < ts)) {
      for (std::size_t i = 0; i < n; ++i) out[i].back().push_back(norm[i]);
      next_sample += interval_ns;
    }
  };
  auto start_day = [&](std::int64_t ts) {
    in_day = true;
    day = day_start(ts);
    next_sample = ts;
    std::fill(norm.begin(), norm.end(), 1.0);
    for (auto& seqs : out) seqs.emplace_back();
  };

  FeedReader reader(feed);
  while (auto ev = reader.next()) {
    const auto idx = universe.find(ev->code);
    if (!idx) continue;
    const auto i = static_cast<std::size_t>(*idx - 1);
    if (!started || day_start(ev->timestamp_ns) != day) {
      if (in_day) flush_until(next_sample, true);  // close a day without a C record
      started = true;
      start_day(ev->timestamp_ns);
    } else if (!in_day) {
      continue;  // after this day's close
    }
    switch (ev->kind) {
      case FeedKind::session_open:
        base[i] = ev->bid;
        norm[i] = 1.0;
        break;
      case FeedKind::quote:
        flush_until(ev->timestamp_ns, false);
        norm[i] = (ev->bid.to_double() + ev->ask.to_double()) / 2.0 / base[i].to_double();
        break;
      case FeedKind::session_close:
        flush_until(ev->timestamp_ns, true);
        in_day = false;
        break;
    }
  }
  if (in_day) flush_until(next_sample, true);
  return out;
}

}  // namespace sbpairs
