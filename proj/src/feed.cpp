#include "sbpairs/feed.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "sbpairs/csv.hpp"
#include "sbpairs/error.hpp"

namespace sbpairs {

Universe::Universe(std::vector<StockRef> stocks) : stocks_(std::move(stocks)) {
  for (std::size_t i = 0; i < stocks_.size(); ++i) {
    auto& s = stocks_[i];
    s.index = static_cast<int>(i) + 1;
    if (s.min_lot_shares < 1)
      throw Error(Errc::invalid_config, "min_lot_shares must be >= 1 for " + s.code);
    if (s.base_price <= Decimal{})
      throw Error(Errc::invalid_config, "base_price must be > 0 for " + s.code);
    if (!by_code_.emplace(s.code, s.index).second)
      throw Error(Errc::invalid_config, "duplicate stock code " + s.code);
  }
}

Universe Universe::parse(std::istream& in) {
  std::vector<StockRef> stocks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = csv::split(trimmed);
    if (fields.size() != 3)
      throw Error(Errc::malformed_record, "universe line " + std::to_string(line_no));
    const auto lot = csv::to_int<std::int64_t>(fields[1]);
    const auto base = Decimal::parse(fields[2]);
    if (!lot || !base) {
      if (line_no == 1 && stocks.empty()) continue;  // header
      throw Error(Errc::malformed_record, "universe line " + std::to_string(line_no));
    }
    stocks.push_back(StockRef{0, std::string(fields[0]), *lot, *base});
  }
  return Universe(std::move(stocks));
}

Universe Universe::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open universe file " + path);
  return parse(in);
}

void Universe::write(std::ostream& out) const {
  out << "stock_code,min_lot_shares,base_price\n";
  for (const auto& s : stocks_) out << s.code << ',' << s.min_lot_shares << ',' << s.base_price.str() << '\n';
}

std::optional<int> Universe::find(std::string_view code) const {
  const auto it = by_code_.find(std::string(code));
  if (it == by_code_.end()) return std::nullopt;
  return it->second;
}

int Universe::index_of(std::string_view code) const {
  const auto idx = find(code);
  if (!idx) throw Error(Errc::unknown_stock, std::string(code));
  return *idx;
}

FeedEvent parse_feed(std::string_view line) {
  const auto fields = csv::split(csv::trim(line));
  if (fields.size() != 5) throw Error(Errc::malformed_record, "expected 5 fields: " + std::string(line));
  FeedEvent ev;
  const auto ts = csv::to_int<std::int64_t>(fields[0]);
  const auto bid = Decimal::parse(fields[2]);
  const auto ask = Decimal::parse(fields[3]);
  if (!ts) throw Error(Errc::malformed_record, "bad timestamp: " + std::string(line));
  if (fields[1].empty()) throw Error(Errc::malformed_record, "empty stock code: " + std::string(line));
  if (!bid || !ask) throw Error(Errc::malformed_record, "non-numeric price: " + std::string(line));
  if (*bid < Decimal{} || *ask < Decimal{})
    throw Error(Errc::malformed_record, "negative price: " + std::string(line));
  ev.timestamp_ns = *ts;
  ev.code = std::string(fields[1]);
  ev.bid = *bid;
  ev.ask = *ask;
  if (fields[4] == "Q") {
    ev.kind = FeedKind::quote;
  } else if (fields[4] == "O") {
    ev.kind = FeedKind::session_open;
    if (ev.bid.is_zero()) throw Error(Errc::malformed_record, "zero base price: " + std::string(line));
  } else if (fields[4] == "C") {
    ev.kind = FeedKind::session_close;
  } else {
    throw Error(Errc::malformed_record, "unknown kind: " + std::string(line));
  }
  return ev;
}

std::string format_feed(const FeedEvent& ev) {
  const char kind = ev.kind == FeedKind::quote ? 'Q' : ev.kind == FeedKind::session_open ? 'O' : 'C';
  std::string out = std::to_string(ev.timestamp_ns);
  out += ',';
  out += ev.code;
  out += ',';
  out += ev.bid.str();
  out += ',';
  out += ev.ask.str();
  out += ',';
  out += kind;
  return out;
}

std::optional<FeedEvent> FeedReader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    const auto trimmed = csv::trim(line_);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (line_no_ == 1 && trimmed.starts_with("timestamp")) continue;
    FeedEvent ev = parse_feed(trimmed);
    if (ev.timestamp_ns < last_ts_)
      throw Error(Errc::malformed_record, "timestamp decreases at line " + std::to_string(line_no_));
    last_ts_ = ev.timestamp_ns;
    return ev;
  }
  return std::nullopt;
}

PriceBook::PriceBook(const Universe& universe)
    : universe_(&universe),
      quotes_(static_cast<std::size_t>(universe.size()) + 1),
      base_(static_cast<std::size_t>(universe.size()) + 1) {
  for (const auto& s : universe.stocks()) base_[static_cast<std::size_t>(s.index)] = s.base_price;
}

bool PriceBook::apply(const FeedEvent& ev) {
  if (universe_ == nullptr) throw Error(Errc::unknown_stock, ev.code);
  return apply(universe_->index_of(ev.code), ev);
}

bool PriceBook::apply(int index, const FeedEvent& ev) {
  if (index < 1 || index > size()) throw Error(Errc::unknown_stock, ev.code);
  const auto slot = static_cast<std::size_t>(index);
  switch (ev.kind) {
    case FeedKind::session_open: {
      if (base_[slot] == ev.bid) return false;
      set_base_price(index, ev.bid);
      return true;
    }
    case FeedKind::session_close:
      return false;
    case FeedKind::quote:
      break;
  }
  Quote& q = quotes_[slot];
  if (q.valid && q.bid == ev.bid && q.ask == ev.ask) return false;
  if (!q.valid) ++quoted_;
  q.bid = ev.bid;
  q.ask = ev.ask;
  q.valid = true;
  renormalize(index);
  return true;
}

void PriceBook::set_base_price(int index, Decimal base) {
  if (base <= Decimal{}) throw Error(Errc::invalid_config, "base price must be positive");
  base_.at(static_cast<std::size_t>(index)) = base;
  renormalize(index);
}

void PriceBook::renormalize(int index) {
  const auto slot = static_cast<std::size_t>(index);
  Quote& q = quotes_[slot];
  // Both raws share one scale (and stay below 2^53), so this is the correctly
  // rounded quotient of the two decimals.
  const auto base = static_cast<double>(base_[slot].raw());
  q.norm_bid = static_cast<double>(q.bid.raw()) / base;
  q.norm_ask = static_cast<double>(q.ask.raw()) / base;
}

int PriceBook::crossed_count() const {
  int n = 0;
  for (std::size_t i = 1; i < quotes_.size(); ++i) n += quotes_[i].crossed() ? 1 : 0;
  return n;
}

}  // namespace sbpairs
