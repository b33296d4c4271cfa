#include "dealbid/bidders.hpp"

#include <cmath>

#include "doctest.h"

using namespace dealbid;

namespace {

const WinModel kUniform = WinModel::uniform(0.0, 0.04, 4);

StrategySpec spec(StrategyKind k) {
  StrategySpec s;
  s.kind = k;
  return s;
}

}  // namespace

TEST_CASE("strategy names") {
  CHECK(parse_strategy_kind("rt") == StrategyKind::real_time);
  CHECK(parse_strategy_kind("real_time") == StrategyKind::real_time);
  CHECK(parse_strategy_kind("static") == StrategyKind::static_optimal);
  CHECK(parse_strategy_kind("static_optimal") == StrategyKind::static_optimal);
  CHECK(parse_strategy_kind("adaptive") == StrategyKind::adaptive);
  CHECK(parse_strategy_kind("random") == StrategyKind::random);
  CHECK_THROWS_AS(parse_strategy_kind("greedy"), std::invalid_argument);
  StrategySpec s = spec(StrategyKind::adaptive);
  CHECK(s.label() == "adaptive");
  s.name = "adaptive-2";
  CHECK(s.label() == "adaptive-2");
}

TEST_CASE("static bidder bids the same every time") {
  const Deal deal{10, 1000, 10.0, 0.002};
  DealBidder b(spec(StrategyKind::static_optimal), deal, kUniform);
  DealState st;
  const double first = b.bid(st);
  CHECK(first == doctest::Approx(0.015).epsilon(1e-6));
  for (int i = 0; i < 10; ++i) {
    st.record(false, false, 0.0);
    CHECK(b.bid(st) == first);
  }
}

TEST_CASE("adaptive bid formula") {
  const Deal deal{10, 1000, 10.0, 0.002};
  DealState st;
  st.visits = 500;
  st.clicks = 4;
  // static + r/u - mu = 0.015 + 6/500 - 0.002
  CHECK(adaptive_bid(0.015, deal, st) == doctest::Approx(0.025));
  st.clicks = 9;
  CHECK(adaptive_bid(0.0, deal, st) == doctest::Approx(0.0));  // floored
}

TEST_CASE("random bidder stays in its range") {
  const Deal deal{10, 1000, 10.0, 0.002};
  StrategySpec s = spec(StrategyKind::random);
  s.random_lo = 0.01;
  s.random_hi = 0.02;
  DealBidder b(s, deal, kUniform, PaymentModel::first_price(), 5);
  DealState st;
  for (int i = 0; i < 200; ++i) {
    const double x = b.bid(st);
    CHECK(x >= 0.01);
    CHECK(x <= 0.02);
    st.record(false, false, 0.0);
  }
  s.random_lo = 0.03;
  CHECK_THROWS_AS(DealBidder(s, deal, kUniform), std::invalid_argument);
}

TEST_CASE("every strategy switches to the static bid once tipped") {
  const Deal deal{2, 1000, 10.0, 0.002};
  for (auto k : {StrategyKind::real_time, StrategyKind::adaptive, StrategyKind::random}) {
    DealBidder b(spec(k), deal, kUniform, PaymentModel::first_price(), 3);
    DealState st;
    st.clicks = 2;
    st.visits = 100;
    CHECK(b.bid(st) == b.static_bid());
  }
}

TEST_CASE("real-time bidder reports its decisions") {
  const Deal deal{20, 1000, 10.0, 0.01};
  DealBidder b(spec(StrategyKind::real_time), deal, kUniform, PaymentModel::first_price(), 3);
  DealState st;
  b.bid(st);
  CHECK(b.last_decision().path == OptimizationPath::multi_start);
  CHECK(b.last_decision().evaluations > 0);
  st.visits = 1000;
  CHECK_THROWS_AS(b.bid(st), std::logic_error);
}

TEST_CASE("bidders are reproducible") {
  const Deal deal{20, 1000, 10.0, 0.01};
  for (auto k : {StrategyKind::real_time, StrategyKind::random}) {
    DealBidder a(spec(k), deal, kUniform, PaymentModel::first_price(), 77);
    DealBidder b(spec(k), deal, kUniform, PaymentModel::first_price(), 77);
    DealState sa;
    DealState sb;
    for (int i = 0; i < 60; ++i) {
      CHECK(a.bid(sa) == b.bid(sb));
      sa.record(i % 7 == 0, i % 14 == 0, 0.01);
      sb.record(i % 7 == 0, i % 14 == 0, 0.01);
    }
  }
}

TEST_CASE("invalid deal rejected") {
  CHECK_THROWS_AS(DealBidder(spec(StrategyKind::static_optimal), Deal{-1, 10, 1.0, 0.1}, kUniform),
                  std::invalid_argument);
}
