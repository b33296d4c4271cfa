#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dealbid/bidders.hpp"
#include "dealbid/click_log.hpp"
#include "dealbid/win_model.hpp"

namespace dealbid {

/// What strategies assume versus who actually shows up at the auction.
struct MarketModels {
  WinModel assumed = WinModel::uniform(0.0, 0.04, 4);
  CompetitorField competitors = CompetitorField::matching(WinModel::uniform(0.0, 0.04, 4));
  PaymentModel payment = PaymentModel::first_price();

  static MarketModels matching(const WinModel& assumed) {
    return {assumed, CompetitorField::matching(assumed), PaymentModel::first_price()};
  }
};

/// Competitor draws for `n` consecutive auctions from a stream seeded by
/// `seed` alone. Every strategy replaying the same ad with the same seed faces
/// exactly these bids.
std::vector<CompetitorField::Draw> draw_competition(const CompetitorField& field, int n,
                                                    std::uint64_t seed);

/// Deal construction from an ad's log: expiry defaults to the log length and
/// the CTR to the ad's empirical click rate.
struct DealTemplate {
  double pay_per_click = 10.0;
  std::optional<double> ctr_override;
  std::optional<int> expiry;

  Deal make_deal(const AdLog& ad, int required_clicks) const;
};

struct TimingStats {
  int samples = 0;
  double mean_seconds = 0.0;
  double p99_seconds = 0.0;
  double stderr_seconds = 0.0;

  static TimingStats from(std::vector<double> samples);
};

struct ImpressionOutcome {
  double bid = 0.0;
  double competitor_max = 0.0;
  bool won = false;
  bool clicked = false;
  double payment = 0.0;
};

/// Result of replaying one ad under one strategy.
///
/// realized_profit is the final profit: rho * clicks_won - spend when the deal
/// tipped, -spend otherwise. pre_tip_profit stops the books at the moment of
/// tipping (rho * m - spend so far) and equals realized_profit for deals that
/// never tip.
struct ReplayReport {
  std::string ad_id;
  std::string strategy;
  int required_clicks = 0;
  int impressions = 0;
  int wins = 0;
  int clicks_won = 0;
  double spend = 0.0;
  bool tipped = false;
  int tip_impression = -1;  // index of the impression that tipped the deal
  double realized_profit = 0.0;
  double pre_tip_profit = 0.0;
  double mean_bid = 0.0;
  int optimizations = 0;         // non-cached real-time decisions
  long long evaluations = 0;     // objective evaluations across the replay
  TimingStats optimizer_time;    // only filled when ReplayOptions::measure_time
  std::vector<ImpressionOutcome> trace;  // only filled when ReplayOptions::keep_trace
};

struct ReplayOptions {
  bool keep_trace = false;
  bool measure_time = false;
  // Supply pre-drawn competition (length >= deal.expiry) to pair strategies;
  // otherwise drawn from mix_seed(seed, hash(ad_id)).
  const std::vector<CompetitorField::Draw>* competition = nullptr;
};

/// Seed for the competition stream of an ad.
std::uint64_t competition_seed(std::uint64_t seed, const std::string& ad_id);
/// Seed for the strategy's own randomness (optimizer starts, random bids).
std::uint64_t bidder_seed(std::uint64_t seed, const std::string& ad_id, const std::string& strategy);

/// Replays the first deal.expiry impressions of `ad` through first-price
/// auctions. Throws std::invalid_argument for an empty log or an expiry longer
/// than the log.
ReplayReport replay_ad(const AdLog& ad, const Deal& deal, const StrategySpec& strategy,
                       const MarketModels& models, std::uint64_t seed,
                       const ReplayOptions& options = {});

struct SyntheticLogSpec {
  int n_ads = 0;
  int impressions_min = 1000;
  int impressions_max = 1000;
  double ctr_lo = 0.01;
  double ctr_hi = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per ad: a CTR uniform in [ctr_lo, ctr_hi], a length uniform in
/// [impressions_min, impressions_max], then Bernoulli(CTR) click flags.
ClickLog generate_synthetic_log(const SyntheticLogSpec& spec);

/// Runs fn(0..n-1) on up to `threads` workers. Results must be written by index.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace dealbid
