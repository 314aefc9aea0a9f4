#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sbpairs/decimal.hpp"
#include "sbpairs/engine.hpp"
#include "sbpairs/feed.hpp"
#include "sbpairs/marketgraph.hpp"
#include "sbpairs/qubo.hpp"

namespace fixtures {

using sbpairs::Decimal;

inline Decimal dec(const char* s) { return Decimal::parse(s).value(); }

// 2024-01-04 00:00 UTC, a Thursday.
inline constexpr std::int64_t kDay0 = 19726LL * sbpairs::kNsPerDay;

inline std::int64_t at(int hour, int minute, int second = 0, int day = 0) {
  return kDay0 + day * sbpairs::kNsPerDay + ((hour * 60LL + minute) * 60 + second) * 1'000'000'000LL;
}

inline sbpairs::Universe universe(const std::vector<std::string>& codes, const char* base = "1000",
                                  std::int64_t min_lot = 100) {
  std::vector<sbpairs::StockRef> stocks;
  for (std::size_t i = 0; i < codes.size(); ++i)
    stocks.push_back({static_cast<int>(i + 1), codes[i], min_lot, dec(base)});
  return sbpairs::Universe(std::move(stocks));
}

inline sbpairs::FeedEvent quote(std::int64_t ts, const std::string& code, const char* bid, const char* ask) {
  return {ts, code, dec(bid), dec(ask), sbpairs::FeedKind::quote};
}

inline sbpairs::FeedEvent session_open(std::int64_t ts, const std::string& code, const char* base) {
  return {ts, code, dec(base), dec(base), sbpairs::FeedKind::session_open};
}

inline sbpairs::FeedEvent session_close(std::int64_t ts, const std::string& code) {
  return {ts, code, Decimal{}, Decimal{}, sbpairs::FeedKind::session_close};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Graph with every off-diagonal weight uniform in [lo, hi].
inline sbpairs::MarketGraph random_graph(int n, std::mt19937_64& rng, double lo = -0.05, double hi = 0.05) {
  sbpairs::MarketGraph g(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) g.set(i, j, uniform(rng, lo, hi));
  return g;
}

inline sbpairs::EdgeVars cycle_vars(int n, const std::vector<int>& nodes) {
  sbpairs::EdgeVars x(n);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) x.set(nodes[k], nodes[k + 1]);
  return x;
}

}  // namespace fixtures
