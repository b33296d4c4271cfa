#include "dealbid/simulator.hpp"

#include <cmath>
#include <set>

#include "doctest.h"

using namespace dealbid;

namespace {

StrategySpec spec(StrategyKind k) {
  StrategySpec s;
  s.kind = k;
  return s;
}

AdLog ad_with_clicks(const std::string& id, int n, int every) {
  AdLog ad{id, std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
  for (int i = 0; i < n; i += every) ad.clicks[static_cast<std::size_t>(i)] = 1;
  return ad;
}

}  // namespace

TEST_CASE("bidding above every competitor wins everything") {
  // Competitors bid in [0, 0.01]; the random bidder bids in [0.02, 0.03].
  const auto competitors = WinModel::uniform(0.0, 0.01, 3);
  MarketModels models = MarketModels::matching(competitors);
  StrategySpec s = spec(StrategyKind::random);
  s.random_lo = 0.02;
  s.random_hi = 0.03;
  const AdLog ad = ad_with_clicks("a", 500, 10);  // 50 clicks
  const Deal deal{50, 500, 10.0, 0.1};
  ReplayOptions opts;
  opts.keep_trace = true;
  const auto rep = replay_ad(ad, deal, s, models, 1, opts);
  CHECK(rep.wins == 500);
  CHECK(rep.clicks_won == 50);
  CHECK(rep.tipped);
  CHECK(rep.tip_impression == 490);
  double spend = 0.0;
  for (const auto& o : rep.trace) spend += o.payment;
  CHECK(rep.spend == doctest::Approx(spend));
  CHECK(rep.realized_profit == doctest::Approx(10.0 * 50 - rep.spend));
  CHECK(rep.trace.size() == 500);
}

TEST_CASE("a deal that never tips loses its spend") {
  const MarketModels models = MarketModels::matching(WinModel::uniform(0.0, 0.04, 4));
  const AdLog ad = ad_with_clicks("a", 1000, 100);  // 10 clicks
  const Deal deal{20, 1000, 10.0, 0.01};
  const auto rep = replay_ad(ad, deal, spec(StrategyKind::static_optimal), models, 3);
  CHECK_FALSE(rep.tipped);
  CHECK(rep.tip_impression == -1);
  CHECK(rep.realized_profit == doctest::Approx(-rep.spend));
  CHECK(rep.pre_tip_profit == rep.realized_profit);
}

TEST_CASE("conservation") {
  const MarketModels models = MarketModels::matching(WinModel::uniform(0.0, 0.04, 4));
  const ClickLog log = generate_synthetic_log({10, 500, 2000, 0.005, 0.05, 4});
  for (const auto& ad : log) {
    for (auto k : {StrategyKind::real_time, StrategyKind::static_optimal, StrategyKind::adaptive,
                   StrategyKind::random}) {
      DealTemplate t;
      const auto rep = replay_ad(ad, t.make_deal(ad, 5), spec(k), models, 9);
      CHECK(rep.wins <= rep.impressions);
      CHECK(rep.clicks_won <= rep.wins);
      CHECK(rep.clicks_won <= ad.total_clicks());
      CHECK(rep.spend >= 0.0);
      if (rep.tipped) {
        CHECK(rep.realized_profit == doctest::Approx(10.0 * rep.clicks_won - rep.spend));
        CHECK(rep.tip_impression >= 0);
        CHECK(rep.pre_tip_profit <= 10.0 * 5 + 1e-9);  // rho * m minus spend so far
      } else {
        CHECK(rep.realized_profit == doctest::Approx(-rep.spend));
      }
    }
  }
}

TEST_CASE("replay is deterministic and competition is shared") {
  const MarketModels models = MarketModels::matching(WinModel::uniform(0.0, 0.04, 4));
  const AdLog ad = ad_with_clicks("ad7", 3000, 60);
  const Deal deal{30, 3000, 10.0, ad.empirical_ctr()};
  ReplayOptions opts;
  opts.keep_trace = true;
  const auto a = replay_ad(ad, deal, spec(StrategyKind::real_time), models, 42, opts);
  const auto b = replay_ad(ad, deal, spec(StrategyKind::real_time), models, 42, opts);
  CHECK(a.realized_profit == b.realized_profit);
  CHECK(a.wins == b.wins);
  const auto s = replay_ad(ad, deal, spec(StrategyKind::static_optimal), models, 42, opts);
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    REQUIRE(a.trace[i].competitor_max == s.trace[i].competitor_max);
  }
  const auto c = replay_ad(ad, deal, spec(StrategyKind::real_time), models, 43, opts);
  CHECK(c.trace[0].competitor_max != a.trace[0].competitor_max);
}

TEST_CASE("pre-drawn competition is used") {
  const MarketModels models = MarketModels::matching(WinModel::uniform(0.0, 0.04, 4));
  const AdLog ad = ad_with_clicks("a", 100, 10);
  const Deal deal{0, 100, 10.0, 0.1};
  std::vector<CompetitorField::Draw> never(100, CompetitorField::Draw{1.0, 1, 0.5});
  ReplayOptions opts;
  opts.competition = &never;
  const auto rep = replay_ad(ad, deal, spec(StrategyKind::static_optimal), models, 1, opts);
  CHECK(rep.wins == 0);
  CHECK(rep.tipped);  // m = 0 tips immediately
  CHECK(rep.realized_profit == 0.0);
  std::vector<CompetitorField::Draw> short_draws(10);
  opts.competition = &short_draws;
  CHECK_THROWS_AS(replay_ad(ad, deal, spec(StrategyKind::static_optimal), models, 1, opts),
                  std::invalid_argument);
}

TEST_CASE("replay input checks") {
  const MarketModels models;
  CHECK_THROWS_AS(replay_ad(AdLog{"e", {}}, Deal{0, 1, 1.0, 0.1}, spec(StrategyKind::static_optimal), models, 1),
                  std::invalid_argument);
  const AdLog ad = ad_with_clicks("a", 10, 2);
  CHECK_THROWS_AS(replay_ad(ad, Deal{0, 11, 1.0, 0.1}, spec(StrategyKind::static_optimal), models, 1),
                  std::invalid_argument);
}

TEST_CASE("deal template") {
  const AdLog ad = ad_with_clicks("a", 200, 20);
  DealTemplate t;
  Deal d = t.make_deal(ad, 7);
  CHECK(d.required_clicks == 7);
  CHECK(d.expiry == 200);
  CHECK(d.ctr == doctest::Approx(0.05));
  t.ctr_override = 0.2;
  t.expiry = 50;
  d = t.make_deal(ad, 7);
  CHECK(d.ctr == 0.2);
  CHECK(d.expiry == 50);
}

TEST_CASE("synthetic log") {
  const auto a = generate_synthetic_log({3, 100, 200, 0.01, 0.02, 5});
  const auto b = generate_synthetic_log({3, 100, 200, 0.01, 0.02, 5});
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].clicks == b[i].clicks);
  CHECK(a[0].ad_id == "ad0000");
  for (const auto& ad : a) {
    CHECK(ad.impressions() >= 100);
    CHECK(ad.impressions() <= 200);
  }
  CHECK(generate_synthetic_log({0, 10, 10, 0.1, 0.1, 1}).empty());

  // pooled over 20 ads of 10^5 impressions each
  const auto big = generate_synthetic_log({20, 100000, 100000, 0.01, 0.01, 2});
  long long clicks = 0;
  for (const auto& ad : big) clicks += ad.total_clicks();
  const double rate = clicks / 2e6;
  CHECK(std::fabs(rate - 0.01) <= 4 * std::sqrt(0.01 * 0.99 / 2e6));

  CHECK_THROWS_AS(generate_synthetic_log({1, 0, 10, 0.1, 0.1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic_log({1, 10, 10, 0.2, 0.1, 1}), std::invalid_argument);
}

TEST_CASE("timing stats") {
  const auto t = TimingStats::from({1.0, 2.0, 3.0, 4.0});
  CHECK(t.samples == 4);
  CHECK(t.mean_seconds == doctest::Approx(2.5));
  CHECK(t.p99_seconds == 4.0);
  CHECK(t.stderr_seconds == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(TimingStats::from({}).samples == 0);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](int i) {
                    if (i == 5) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
