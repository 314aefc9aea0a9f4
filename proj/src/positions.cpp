#include "sbpairs/positions.hpp"

#include <ostream>

#include "sbpairs/error.hpp"

namespace sbpairs {

std::string_view to_string(PositionState s) {
  switch (s) {
    case PositionState::closed: return "closed";
    case PositionState::opening: return "opening";
    case PositionState::opened: return "opened";
    case PositionState::closing: return "closing";
  }
  return "unknown";
}

Decimal mark_to_market(const PairPosition& pos, const PriceBook& book) {
  const auto& s = book.quote(pos.pair.short_leg);
  const auto& l = book.quote(pos.pair.long_leg);
  return (pos.open_sell_price - s.ask) * pos.short_shares + (l.bid - pos.open_buy_price) * pos.long_shares;
}

Order PositionManager::make_order(PairPosition& pos, LegRole role, Side side, std::int64_t shares, Decimal limit,
                                  bool closing, std::int64_t ts) {
  Order o;
  o.id = next_id_++;
  o.pair = pos.pair;
  o.role = role;
  o.side = side;
  o.stock = role == LegRole::short_leg ? pos.pair.short_leg : pos.pair.long_leg;
  o.shares = shares;
  o.limit = limit;
  o.closing = closing;
  o.timestamp_ns = ts;
  orders_.emplace(o.id, o);
  return o;
}

std::vector<Order> PositionManager::open(const OrderIntent& intent) {
  auto& pos = positions_[intent.pair];
  if (pos.state != PositionState::closed || has_outstanding(intent.pair))
    throw Error(Errc::invalid_config, "pair position is not closed");
  const auto transitions = std::move(pos.transitions);
  pos = PairPosition{};
  pos.transitions = transitions;
  pos.pair = intent.pair;
  pos.short_shares = intent.sell.shares;
  pos.long_shares = intent.buy.shares;
  pos.intended_sell = intent.sell.price;
  pos.intended_buy = intent.buy.price;
  pos.short_status = LegStatus::pending;
  pos.long_status = LegStatus::pending;
  pos.open_ts = intent.timestamp_ns;
  return {make_order(pos, LegRole::short_leg, Side::sell, pos.short_shares, pos.intended_sell, false,
                     intent.timestamp_ns),
          make_order(pos, LegRole::long_leg, Side::buy, pos.long_shares, pos.intended_buy, false,
                     intent.timestamp_ns)};
}

bool PositionManager::has_outstanding(Pair p) const {
  for (const auto& [id, o] : orders_)
    if (o.pair == p) return true;
  return false;
}

std::vector<Order> PositionManager::close_orders(PairPosition& pos, const PriceBook& book, std::int64_t ts) {
  std::vector<Order> out;
  if (pos.short_inventory < 0)
    out.push_back(make_order(pos, LegRole::short_leg, Side::buy, -pos.short_inventory,
                             book.quote(pos.pair.short_leg).ask, true, ts));
  if (pos.short_inventory > 0)
    out.push_back(make_order(pos, LegRole::short_leg, Side::sell, pos.short_inventory,
                             book.quote(pos.pair.short_leg).bid, true, ts));
  if (pos.long_inventory > 0)
    out.push_back(make_order(pos, LegRole::long_leg, Side::sell, pos.long_inventory,
                             book.quote(pos.pair.long_leg).bid, true, ts));
  if (pos.long_inventory < 0)
    out.push_back(make_order(pos, LegRole::long_leg, Side::buy, -pos.long_inventory,
                             book.quote(pos.pair.long_leg).ask, true, ts));
  return out;
}

void PositionManager::settle(PairPosition& pos, std::int64_t ts) {
  LedgerRow row;
  row.pair = pos.pair;
  row.open_ts = pos.open_ts;
  row.close_ts = ts;
  row.opened = pos.short_status == LegStatus::filled && pos.long_status == LegStatus::filled;
  Decimal cash;
  for (const auto& f : pos.fills) {
    row.transaction_amount += f.amount();
    cash += f.side == Side::sell ? f.amount() : -f.amount();
  }
  row.open_profit_basis = pos.open_sell_price * pos.short_shares - pos.open_buy_price * pos.long_shares;
  row.commission = commission(row.transaction_amount);
  row.realized_pnl = cash - row.commission;
  ledger_.push_back(row);
  pos.state = PositionState::closed;
  pos.transitions.push_back(7);
  confirmations_.push_back(pos.pair);
}

std::vector<Order> PositionManager::on_execution(const ExecutionReport& report, const PriceBook& book) {
  const auto it = orders_.find(report.order_id);
  if (it == orders_.end())
    throw Error(Errc::orphan_report, "no outstanding order " + std::to_string(report.order_id));
  const Order order = it->second;
  orders_.erase(it);
  auto& pos = positions_.at(order.pair);
  const std::int64_t ts = report.timestamp_ns;

  bool intended = false;
  if (report.filled) {
    Fill f{order.id, order.side, order.stock, order.shares, report.price, ts};
    pos.fills.push_back(f);
    all_fills_.push_back(f);
    const std::int64_t signed_shares = order.side == Side::buy ? order.shares : -order.shares;
    (order.role == LegRole::short_leg ? pos.short_inventory : pos.long_inventory) += signed_shares;
    intended = report.price == order.limit;
  } else {
    ++lapses_;
  }

  std::vector<Order> out;
  if (!order.closing) {
    if (pos.state == PositionState::closed) {
      pos.state = PositionState::opening;
      pos.transitions.push_back(1);
    }
    LegStatus& status = order.role == LegRole::short_leg ? pos.short_status : pos.long_status;
    status = intended ? LegStatus::filled : LegStatus::unintended;
    if (report.filled) {
      (order.role == LegRole::short_leg ? pos.open_sell_price : pos.open_buy_price) = report.price;
    }
    if (pos.short_status == LegStatus::pending || pos.long_status == LegStatus::pending) {
      pos.transitions.push_back(2);
      return out;
    }
    if (pos.short_status == LegStatus::filled && pos.long_status == LegStatus::filled) {
      pos.state = PositionState::opened;
      pos.transitions.push_back(3);
      return out;
    }
    pos.state = PositionState::closing;
    pos.transitions.push_back(4);
    out = close_orders(pos, book, ts);
    if (out.empty()) settle(pos, ts);  // nothing was filled
    return out;
  }

  // Closing leg result.
  if (pos.state != PositionState::closing) throw Error(Errc::orphan_report, "close report for a non-closing pair");
  if (!report.filled) {
    // Re-issue the lapsed leg at the current price on its side.
    const auto& q = book.quote(order.stock);
    out.push_back(make_order(pos, order.role, order.side, order.shares, order.side == Side::buy ? q.ask : q.bid, true,
                             ts));
  }
  if (pos.short_inventory == 0 && pos.long_inventory == 0 && !has_outstanding(pos.pair)) {
    settle(pos, ts);
  } else {
    pos.transitions.push_back(6);
  }
  return out;
}

std::vector<Order> PositionManager::check_close(const PriceBook& book, std::int64_t now) {
  std::vector<Order> out;
  const bool unwind = cfg_.window.must_unwind(now);
  for (auto& [pair, pos] : positions_) {
    if (pos.state != PositionState::opened) continue;
    bool close = unwind;
    if (!close) {
      const auto& s = book.quote(pair.short_leg);
      const auto& l = book.quote(pair.long_leg);
      const Decimal profit = mark_to_market(pos, book);
      // Breakeven after commission on all four legs, plus the margin.
      const Decimal amount = pos.open_sell_price * pos.short_shares + pos.open_buy_price * pos.long_shares +
                             s.ask * pos.short_shares + l.bid * pos.long_shares;
      close = profit >= commission(amount) + cfg_.close_margin;
    }
    if (!close) continue;
    pos.state = PositionState::closing;
    pos.transitions.push_back(5);
    auto orders = close_orders(pos, book, now);
    out.insert(out.end(), orders.begin(), orders.end());
  }
  return out;
}

std::vector<Order> PositionManager::unwind_all(const PriceBook& book, std::int64_t now) {
  std::vector<Order> out;
  for (auto& [pair, pos] : positions_) {
    if (pos.state != PositionState::opened) continue;
    pos.state = PositionState::closing;
    pos.transitions.push_back(5);
    auto orders = close_orders(pos, book, now);
    out.insert(out.end(), orders.begin(), orders.end());
  }
  return out;
}

std::vector<Pair> PositionManager::take_confirmations() {
  std::vector<Pair> out;
  out.swap(confirmations_);
  return out;
}

const PairPosition* PositionManager::find(Pair p) const {
  const auto it = positions_.find(p);
  return it == positions_.end() ? nullptr : &it->second;
}

std::size_t PositionManager::active() const {
  std::size_t n = 0;
  for (const auto& [pair, pos] : positions_) n += pos.state != PositionState::closed ? 1 : 0;
  return n;
}

void write_ledger_header(std::ostream& out) {
  out << "pair,open_ts,close_ts,open_profit_basis,realized_pnl,commission\n";
}

void write_ledger_row(std::ostream& out, const LedgerRow& row, const Universe& universe) {
  out << universe.at(row.pair.short_leg).code << '/' << universe.at(row.pair.long_leg).code << ',' << row.open_ts
      << ',' << row.close_ts << ',' << row.open_profit_basis.str() << ',' << row.realized_pnl.str() << ','
      << row.commission.str() << '\n';
}

}  // namespace sbpairs
