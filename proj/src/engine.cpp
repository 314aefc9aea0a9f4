#include "sbpairs/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sbpairs/csv.hpp"
#include "sbpairs/error.hpp"

namespace sbpairs {

const std::set<std::string, std::less<>>& engine_config_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "p_max",          "a_trans",       "threshold",      "restarts_per_event", "max_runs_per_event",
      "session_open",   "session_close", "last_open",      "unwind",             "kill_switch",
      "clamp_lots",     "seed",          "m_c",            "penalty",            "penalty_ratio",
      "penalty_weight", "sb_steps",      "sb_dt",          "sb_a0",              "sb_c0",
      "sb_c0_gain",     "sb_machine_size",
  };
  return keys;
}

EngineConfig EngineConfig::from(const Config& cfg) {
  EngineConfig c;
  c.p_max = static_cast<int>(cfg.get_int("p_max", c.p_max));
  c.a_trans = cfg.get_decimal("a_trans", c.a_trans);
  c.threshold = cfg.get_double("threshold", c.threshold);
  c.restarts_per_event = static_cast<int>(cfg.get_int("restarts_per_event", c.restarts_per_event));
  c.max_runs_per_event = static_cast<int>(cfg.get_int("max_runs_per_event", c.max_runs_per_event));
  if (auto v = cfg.get("session_open")) c.window.open = parse_time_of_day(*v);
  if (auto v = cfg.get("session_close")) c.window.close = parse_time_of_day(*v);
  if (auto v = cfg.get("last_open")) c.window.last_open = parse_time_of_day(*v);
  if (auto v = cfg.get("unwind")) c.window.unwind = parse_time_of_day(*v);
  c.kill_switch = cfg.get_bool("kill_switch", c.kill_switch);
  c.clamp_lots = cfg.get_bool("clamp_lots", c.clamp_lots);
  const auto seed = cfg.get_int("seed", c.seed);
  if (seed <= 0 || seed > 0xffffffffLL) throw Error(Errc::invalid_config, "seed must be in 1..2^32-1");
  c.seed = static_cast<std::uint32_t>(seed);
  c.m_c = cfg.get_double("m_c", c.m_c);

  const auto mode = cfg.get_string("penalty", "relative");
  if (mode == "dominant")
    c.penalty = PenaltyMode::dominant;
  else if (mode == "relative")
    c.penalty = PenaltyMode::relative;
  else if (mode == "fixed")
    c.penalty = PenaltyMode::fixed;
  else
    throw Error(Errc::invalid_config, "penalty must be dominant, relative or fixed");
  c.penalty_ratio = cfg.get_double("penalty_ratio", c.penalty_ratio);
  c.penalty_weight = cfg.get_double("penalty_weight", c.penalty_weight);

  c.sb.n_steps = static_cast<int>(cfg.get_int("sb_steps", c.sb.n_steps));
  c.sb.dt = static_cast<float>(cfg.get_double("sb_dt", c.sb.dt));
  c.sb.a0 = static_cast<float>(cfg.get_double("sb_a0", c.sb.a0));
  const auto c0 = cfg.get_string("sb_c0", "auto");
  if (c0 != "auto") c.sb.c0 = static_cast<float>(cfg.get_double("sb_c0", 0.0));
  c.sb.c0_gain = static_cast<float>(cfg.get_double("sb_c0_gain", c.sb.c0_gain));
  c.sb.machine_size = static_cast<int>(cfg.get_int("sb_machine_size", c.sb.machine_size));
  c.validate();
  return c;
}

void EngineConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::invalid_config, what); };
  if (p_max < 1) fail("p_max must be >= 1");
  if (a_trans <= Decimal{}) fail("a_trans must be > 0");
  if (restarts_per_event < 1) fail("restarts_per_event must be >= 1");
  if (max_runs_per_event < 1) fail("max_runs_per_event must be >= 1");
  if (!(window.open < window.close)) fail("session_open must precede session_close");
  if (!(m_c > 0.0)) fail("m_c must be > 0");
  if (!(penalty_ratio > 0.0) || !(penalty_weight > 0.0)) fail("penalty weights must be > 0");
  if (sb.n_steps < 1 || !(sb.dt > 0.0f) || !(sb.a0 > 0.0f)) fail("sb_steps, sb_dt and sb_a0 must be > 0");
  if (sb.c0 && !(*sb.c0 > 0.0f)) fail("sb_c0 must be > 0");
  if (!(sb.c0_gain > 0.0f)) fail("sb_c0_gain must be > 0");
}

double penalty_weight(const EngineConfig& cfg, const MarketGraph& graph) {
  switch (cfg.penalty) {
    case PenaltyMode::dominant:
      return default_penalty_weight(graph);
    case PenaltyMode::fixed:
      return cfg.penalty_weight;
    case PenaltyMode::relative:
      break;
  }
  double max_abs = 0.0;
  for (double w : graph.data()) max_abs = std::max(max_abs, std::abs(w));
  return max_abs > 0.0 ? cfg.penalty_ratio * max_abs : default_penalty_weight(graph);
}

std::int64_t lot_size(const StockRef& stock, Decimal a_trans, Decimal base_price) {
  if (base_price <= Decimal{} || stock.min_lot_shares < 1)
    throw Error(Errc::invalid_config, "cannot size lots for " + stock.code);
  const __int128 num = a_trans.raw();
  const __int128 den = static_cast<__int128>(stock.min_lot_shares) * base_price.raw();
  const __int128 mag = (2 * (num < 0 ? -num : num) + den) / (2 * den);
  return static_cast<std::int64_t>(num < 0 ? -mag : mag);
}

Universe exclude_zero_lot(const Universe& universe, Decimal a_trans, bool clamp, std::vector<std::string>* warnings) {
  std::vector<StockRef> kept;
  for (const auto& s : universe.stocks()) {
    if (lot_size(s, a_trans) > 0) {
      kept.push_back(s);
      continue;
    }
    if (clamp) {
      if (warnings) warnings->push_back(s.code + ": zero lots at base price " + s.base_price.str() + ", clamped to 1");
      kept.push_back(s);
    } else if (warnings) {
      warnings->push_back(s.code + ": zero lots at base price " + s.base_price.str() + ", excluded");
    }
  }
  return Universe(std::move(kept));
}

bool OpenList::contains(Pair p) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const OpenEntry& e) { return e.pair == p; });
}

void OpenList::add(Pair p, std::int64_t ts) {
  if (contains(p)) throw Error(Errc::invalid_config, "pair already open");
  entries_.push_back({p, ts});
}

void OpenList::remove(Pair p) {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const OpenEntry& e) { return e.pair == p; });
  if (it == entries_.end())
    throw Error(Errc::unknown_pair,
                "pair (" + std::to_string(p.short_leg) + "," + std::to_string(p.long_leg) + ") is not open");
  entries_.erase(it);
}

TabuList OpenList::to_tabu(int n_stocks) const {
  TabuList t(n_stocks);
  for (const auto& e : entries_) t.add(e.pair);
  return t;
}

void write_decision_header(std::ostream& out) {
  out << "timestamp_ns,event,short_code,long_code,path,weight_sum,verdict,action\n";
}

void write_decision(std::ostream& out, const DecisionRecord& rec, const Universe& universe) {
  auto code = [&](int idx) { return idx > 0 ? universe.at(idx).code : std::string(); };
  out << rec.timestamp_ns << ',' << rec.event << ',' << code(rec.pair.short_leg) << ','
      << code(rec.pair.long_leg) << ',' << rec.path << ',' << csv::format_double(rec.weight_sum) << ','
      << rec.verdict << ',' << rec.action << '\n';
}

Engine::Engine(const Universe& universe, const SimilarityMatrix& sim, EngineConfig cfg)
    : universe_(&universe),
      sim_(&sim),
      cfg_(std::move(cfg)),
      book_(universe),
      graph_(universe.size()),
      tabu_(universe.size()),
      rng_(cfg_.seed) {
  cfg_.validate();
  if (sim.n_stocks() != universe.size())
    throw Error(Errc::dimension_mismatch, "similarity covers " + std::to_string(sim.n_stocks()) + " stocks, universe " +
                                              std::to_string(universe.size()));
  solver_ = [this](const QuboProblem& q, XorshiftRng& rng) {
    return solve_best_of(q, cfg_.sb, rng, cfg_.restarts_per_event).best;
  };
}

std::int64_t Engine::lots_for(int stock) const {
  const auto& ref = universe_->at(stock);
  const auto lots = lot_size(ref, cfg_.a_trans, book_.base_price(stock));
  if (lots > 0) return lots;
  return cfg_.clamp_lots ? 1 : 0;
}

void Engine::emit(DecisionRecord rec) {
  if (sink_) sink_(rec);
}

std::vector<OrderIntent> Engine::on_feed(const FeedEvent& ev) {
  return on_feed(universe_->index_of(ev.code), ev);
}

std::vector<OrderIntent> Engine::on_feed(int index, const FeedEvent& ev) {
  book_.apply(index, ev);
  if (ev.kind != FeedKind::quote) return {};
  if (!cfg_.window.contains(ev.timestamp_ns)) {
    emit({ev.timestamp_ns, 1, {}, "", 0.0, "", "ignored:out-of-window"});
    return {};
  }
  if (!book_.complete()) return {};
  build_graph_into(book_, *sim_, graph_);
  return consecutive_loop(ev.timestamp_ns);
}

std::optional<std::string> Engine::judgment(Pair pair, std::int64_t ts) const {
  if (cfg_.kill_switch) return "reject:kill-switch";
  if (!cfg_.window.allows_open(ts)) return "reject:cutoff";
  if (open_.size() >= static_cast<std::size_t>(cfg_.p_max)) return "reject:open-list-full";
  if (open_.contains(pair)) return "reject:duplicate";
  if (lots_for(pair.short_leg) == 0 || lots_for(pair.long_leg) == 0) return "reject:zero-lot";
  return std::nullopt;
}

std::vector<OrderIntent> Engine::consecutive_loop(std::int64_t ts) {
  std::vector<OrderIntent> intents;
  const int n = universe_->size();
  for (int run = 0; run < cfg_.max_runs_per_event; ++run) {
    if (refresh_pending_) {
      tabu_ = open_.to_tabu(n);
      refresh_pending_ = false;
      emit({ts, 8, {}, "", 0.0, "", "tabu-refresh:" + std::to_string(tabu_.count())});
    }

    QuboProblem problem{graph_, tabu_, cfg_.m_c, penalty_weight(cfg_, graph_)};
    const EdgeVars x = solver_(problem, rng_);
    ++sb_runs_;
    const auto decoded = decode(x, graph_);
    const auto verdict = judge(decoded, graph_, tabu_, cfg_.threshold);

    if (verdict.outcome != Outcome::tradable) {
      // Ineffective run: tabu and open list stay as they are.
      DecisionRecord rec{ts, 4, {}, "", verdict.weight_sum, std::string(to_string(verdict.outcome)), "none"};
      if (decoded.ok()) {
        rec.pair = decoded.path.pair();
        rec.path = format_path(decoded.path, universe_);
      }
      if (verdict.reason != Reason::none) rec.verdict += "(" + std::string(to_string(verdict.reason)) + ")";
      emit(std::move(rec));
      break;
    }

    const Pair pair = decoded.path.pair();
    tabu_.add(pair);
    DecisionRecord rec{ts, 0, pair, format_path(decoded.path, universe_), verdict.weight_sum,
                       std::string(to_string(verdict.outcome)), ""};
    if (auto rejected = judgment(pair, ts)) {
      rec.event = 5;
      rec.action = *rejected;
      emit(std::move(rec));
    } else {
      rec.event = intents.empty() ? 2 : 3;
      rec.action = "open";
      emit(std::move(rec));
      open_.add(pair, ts);
      OrderIntent intent;
      intent.timestamp_ns = ts;
      intent.pair = pair;
      intent.path = decoded.path;
      const auto sl = lots_for(pair.short_leg);
      const auto ll = lots_for(pair.long_leg);
      intent.sell = {pair.short_leg, sl, sl * universe_->at(pair.short_leg).min_lot_shares,
                     book_.quote(pair.short_leg).bid};
      intent.buy = {pair.long_leg, ll, ll * universe_->at(pair.long_leg).min_lot_shares,
                    book_.quote(pair.long_leg).ask};
      intents.push_back(std::move(intent));
    }
    if (open_.size() >= static_cast<std::size_t>(cfg_.p_max)) break;
  }
  return intents;
}

void Engine::on_close_confirmed(Pair pair, std::int64_t ts) {
  open_.remove(pair);
  refresh_pending_ = true;
  emit({ts, 7, pair, "", 0.0, "", "close-confirmed"});
}

}  // namespace sbpairs
