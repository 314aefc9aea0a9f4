#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sbpairs/decimal.hpp"

namespace sbpairs {

// One tradable stock. Indices run 1..N; 0 is reserved for the dummy node.
struct StockRef {
  int index = 0;
  std::string code;
  std::int64_t min_lot_shares = 1;
  Decimal base_price;
};

class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<StockRef> stocks);

  // CSV `stock_code,min_lot_shares,base_price`, optional header row.
  static Universe parse(std::istream& in);
  static Universe load(const std::string& path);
  void write(std::ostream& out) const;

  int size() const { return static_cast<int>(stocks_.size()); }
  const StockRef& at(int index) const { return stocks_.at(static_cast<std::size_t>(index - 1)); }
  std::span<const StockRef> stocks() const { return stocks_; }

  std::optional<int> find(std::string_view code) const;
  int index_of(std::string_view code) const;  // throws UnknownStock

 private:
  std::vector<StockRef> stocks_;
  std::unordered_map<std::string, int> by_code_;
};

enum class FeedKind { quote, session_open, session_close };

struct FeedEvent {
  std::int64_t timestamp_ns = 0;
  std::string code;
  Decimal bid;
  Decimal ask;
  FeedKind kind = FeedKind::quote;
};

// `timestamp_ns,stock_code,bid,ask,kind` with kind in {Q,O,C}.
// For an O record the bid field carries the day's base price.
FeedEvent parse_feed(std::string_view line);
std::string format_feed(const FeedEvent& ev);

// Streams events from a feed file, skipping blank lines and an optional
// header. Throws MalformedRecord on bad records or decreasing timestamps.
class FeedReader {
 public:
  explicit FeedReader(std::istream& in) : in_(in) {}
  std::optional<FeedEvent> next();
  std::size_t line_number() const { return line_no_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::int64_t last_ts_ = INT64_MIN;
};

struct Quote {
  Decimal bid;
  Decimal ask;
  double norm_bid = 0.0;
  double norm_ask = 0.0;
  bool valid = false;

  // bid >= ask; accepted into the book but reported.
  bool crossed() const { return valid && bid >= ask; }
};

// Latest best bid/ask per stock, raw and normalized by the day's base price.
// Single writer; copies are immutable snapshots.
class PriceBook {
 public:
  PriceBook() = default;
  explicit PriceBook(const Universe& universe);

  // Returns true when the event changed the stored bid, ask or base price.
  bool apply(const FeedEvent& ev);
  bool apply(int index, const FeedEvent& ev);

  void set_base_price(int index, Decimal base);

  int size() const { return static_cast<int>(quotes_.size()) - 1; }
  const Quote& quote(int index) const { return quotes_.at(static_cast<std::size_t>(index)); }
  Decimal base_price(int index) const { return base_.at(static_cast<std::size_t>(index)); }
  bool complete() const { return quoted_ == size(); }
  int crossed_count() const;

 private:
  void renormalize(int index);

  const Universe* universe_ = nullptr;
  std::vector<Quote> quotes_;  // slot 0 unused
  std::vector<Decimal> base_;
  int quoted_ = 0;
};

}  // namespace sbpairs
