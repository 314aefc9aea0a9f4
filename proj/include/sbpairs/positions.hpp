#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbpairs/decimal.hpp"
#include "sbpairs/engine.hpp"
#include "sbpairs/feed.hpp"
#include "sbpairs/qubo.hpp"

namespace sbpairs {

enum class PositionState { closed, opening, opened, closing };
std::string_view to_string(PositionState s);

enum class Side { sell, buy };
enum class LegRole { short_leg, long_leg };

struct Order {
  std::uint64_t id = 0;
  Pair pair;
  LegRole role = LegRole::short_leg;
  Side side = Side::sell;
  int stock = 0;
  std::int64_t shares = 0;
  Decimal limit;
  bool closing = false;
  std::int64_t timestamp_ns = 0;
};

struct ExecutionReport {
  std::uint64_t order_id = 0;
  LegRole role = LegRole::short_leg;
  bool filled = false;  // false = lapse
  Decimal price;
  std::int64_t timestamp_ns = 0;
};

struct Fill {
  std::uint64_t order_id = 0;
  Side side = Side::sell;
  int stock = 0;
  std::int64_t shares = 0;
  Decimal price;
  std::int64_t timestamp_ns = 0;

  Decimal amount() const { return price * shares; }
};

enum class LegStatus { none, pending, filled, unintended };

struct PairPosition {
  Pair pair;
  PositionState state = PositionState::closed;
  std::int64_t short_shares = 0;  // intended size per leg
  std::int64_t long_shares = 0;
  Decimal intended_sell;  // open limit on the short leg
  Decimal intended_buy;   // open limit on the long leg
  LegStatus short_status = LegStatus::none;
  LegStatus long_status = LegStatus::none;
  std::int64_t short_inventory = 0;  // signed shares held
  std::int64_t long_inventory = 0;
  Decimal open_sell_price;  // actual open fills
  Decimal open_buy_price;
  std::int64_t open_ts = 0;
  std::vector<Fill> fills;  // current round trip
  std::vector<int> transitions;
};

struct LedgerRow {
  Pair pair;
  std::int64_t open_ts = 0;
  std::int64_t close_ts = 0;
  Decimal open_profit_basis;  // short proceeds - long cost at open
  Decimal realized_pnl;       // net of commission
  Decimal commission;
  Decimal transaction_amount;
  bool opened = false;  // reached the opened state
};

struct PositionConfig {
  Decimal commission_rate = Decimal::parse("0.0005").value();
  Decimal close_margin;
  TradingWindow window;
};

// Mark-to-market profit of an opened position at the given book.
Decimal mark_to_market(const PairPosition& pos, const PriceBook& book);

// Owns one state machine per pair; orders are returned to the caller, which
// routes them and feeds the execution reports back.
class PositionManager {
 public:
  explicit PositionManager(PositionConfig cfg) : cfg_(cfg) {}

  // Orders for both open legs; the pair's machine must be closed.
  std::vector<Order> open(const OrderIntent& intent);

  // T1-T4 while opening, T6/T7 while closing. Throws OrphanReport.
  std::vector<Order> on_execution(const ExecutionReport& report, const PriceBook& book);

  // T5 for opened pairs whose profit reached the threshold, or every opened
  // pair once `now` is past the unwind time.
  std::vector<Order> check_close(const PriceBook& book, std::int64_t now);
  // T5 for every opened pair regardless of profit.
  std::vector<Order> unwind_all(const PriceBook& book, std::int64_t now);

  // Close confirmations (T7) since the last call.
  std::vector<Pair> take_confirmations();

  const PairPosition* find(Pair p) const;
  const std::vector<LedgerRow>& ledger() const { return ledger_; }
  const std::vector<Fill>& fills() const { return all_fills_; }
  std::size_t outstanding() const { return orders_.size(); }
  std::size_t active() const;
  std::uint64_t orders_sent() const { return next_id_ - 1; }
  std::uint64_t lapses() const { return lapses_; }
  const PositionConfig& config() const { return cfg_; }

  // commission_rate * sum of transaction amounts, rounded once.
  Decimal commission(Decimal amount) const { return cfg_.commission_rate.mul(amount); }

 private:
  Order make_order(PairPosition& pos, LegRole role, Side side, std::int64_t shares, Decimal limit, bool closing,
                   std::int64_t ts);
  std::vector<Order> close_orders(PairPosition& pos, const PriceBook& book, std::int64_t ts);
  void settle(PairPosition& pos, std::int64_t ts);
  bool has_outstanding(Pair p) const;

  PositionConfig cfg_;
  std::map<Pair, PairPosition> positions_;
  std::map<std::uint64_t, Order> orders_;
  std::vector<LedgerRow> ledger_;
  std::vector<Fill> all_fills_;
  std::vector<Pair> confirmations_;
  std::uint64_t next_id_ = 1;
  std::uint64_t lapses_ = 0;
};

void write_ledger_header(std::ostream& out);
void write_ledger_row(std::ostream& out, const LedgerRow& row, const Universe& universe);

}  // namespace sbpairs
