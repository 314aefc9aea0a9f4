#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "sbpairs/error.hpp"
#include "sbpairs/feed.hpp"

using namespace sbpairs;
using fixtures::dec;

namespace {

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::io;
}

}  // namespace

TEST(Decimal, ParseAndFormat) {
  EXPECT_EQ(dec("735").raw(), 735'000'000);
  EXPECT_EQ(dec("735.5").str(), "735.5");
  EXPECT_EQ(dec("-0.016").str(), "-0.016");
  EXPECT_EQ(dec("0.000001").raw(), 1);
  EXPECT_EQ(dec("1.5000000").raw(), 1'500'000);
  EXPECT_FALSE(Decimal::parse("1.0000001"));
  EXPECT_FALSE(Decimal::parse("abc"));
  EXPECT_FALSE(Decimal::parse(""));
}

TEST(Decimal, MulRoundsHalfAwayFromZero) {
  EXPECT_EQ(dec("0.0005").mul(dec("0.001")).raw(), 1);   // 5e-7 -> 1e-6
  EXPECT_EQ(dec("-0.0005").mul(dec("0.001")).raw(), -1);
  EXPECT_EQ(dec("0.0004").mul(dec("0.001")).raw(), 0);
  EXPECT_EQ(dec("0.001").mul(Decimal::from_int(40'000)), Decimal::from_int(40));
}

TEST(Decimal, IntegerArithmeticIsExact) {
  Decimal sum;
  for (int i = 0; i < 10; ++i) sum += dec("0.1");
  EXPECT_EQ(sum, Decimal::from_int(1));
  EXPECT_EQ(dec("735.5") * 300, dec("220650"));
}

TEST(Feed, ParsesQuote) {
  const auto ev = parse_feed("1000,8355,735.0,736.0,Q");
  EXPECT_EQ(ev.timestamp_ns, 1000);
  EXPECT_EQ(ev.code, "8355");
  EXPECT_EQ(ev.bid, dec("735"));
  EXPECT_EQ(ev.ask, dec("736"));
  EXPECT_EQ(ev.kind, FeedKind::quote);
  EXPECT_EQ(parse_feed(format_feed(ev)).bid, ev.bid);
}

TEST(Feed, RejectsMalformedRecords) {
  EXPECT_EQ(error_code([] { parse_feed("1000,8355,735.0"); }), Errc::malformed_record);
  EXPECT_EQ(error_code([] { parse_feed("1000,8355,-1,736.0,Q"); }), Errc::malformed_record);
  EXPECT_EQ(error_code([] { parse_feed("x,8355,1,2,Q"); }), Errc::malformed_record);
  EXPECT_EQ(error_code([] { parse_feed("1000,8355,1,2,Z"); }), Errc::malformed_record);
}

TEST(Feed, ReaderSkipsHeaderAndRejectsDecreasingTime) {
  std::istringstream ok("timestamp_ns,stock_code,bid,ask,kind\n1,A,1,2,Q\n\n2,A,1,2,Q\n");
  FeedReader r(ok);
  EXPECT_EQ(r.next()->timestamp_ns, 1);
  EXPECT_EQ(r.next()->timestamp_ns, 2);
  EXPECT_FALSE(r.next());

  std::istringstream bad("5,A,1,2,Q\n4,A,1,2,Q\n");
  FeedReader r2(bad);
  r2.next();
  EXPECT_EQ(error_code([&] { r2.next(); }), Errc::malformed_record);
}

TEST(Universe, ParseAndLookup) {
  std::istringstream in("stock_code,min_lot_shares,base_price\n8355,100,735\n8308,100,501.5\n");
  const auto u = Universe::parse(in);
  ASSERT_EQ(u.size(), 2);
  EXPECT_EQ(u.index_of("8308"), 2);
  EXPECT_EQ(u.at(2).base_price, dec("501.5"));
  EXPECT_FALSE(u.find("9999"));
  EXPECT_EQ(error_code([&] { u.index_of("9999"); }), Errc::unknown_stock);
}

TEST(PriceBook, ApplyNormalizesAndReportsChanges) {
  const auto u = fixtures::universe({"A", "B"});
  PriceBook book(u);
  EXPECT_FALSE(book.complete());
  EXPECT_TRUE(book.apply(fixtures::quote(1, "A", "990", "1010")));
  EXPECT_FALSE(book.apply(fixtures::quote(2, "A", "990", "1010")));
  EXPECT_DOUBLE_EQ(book.quote(1).norm_bid, 0.99);
  EXPECT_DOUBLE_EQ(book.quote(1).norm_ask, 1.01);
  book.apply(fixtures::quote(3, "B", "5", "6"));
  EXPECT_TRUE(book.complete());
  EXPECT_EQ(error_code([&] { book.apply(fixtures::quote(4, "C", "1", "2")); }), Errc::unknown_stock);
}

TEST(PriceBook, SessionOpenResetsBase) {
  const auto u = fixtures::universe({"A"});
  PriceBook book(u);
  book.apply(fixtures::quote(1, "A", "990", "1010"));
  book.apply(fixtures::session_open(2, "A", "500"));
  EXPECT_EQ(book.base_price(1), dec("500"));
  book.apply(fixtures::quote(3, "A", "495", "505"));
  EXPECT_DOUBLE_EQ(book.quote(1).norm_bid, 0.99);
}

TEST(PriceBook, CrossedQuoteAcceptedAndCounted) {
  const auto u = fixtures::universe({"A"});
  PriceBook book(u);
  book.apply(fixtures::quote(1, "A", "1001", "1000"));
  EXPECT_TRUE(book.quote(1).crossed());
  EXPECT_EQ(book.crossed_count(), 1);
}
