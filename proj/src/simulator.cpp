#include "dealbid/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace dealbid {

std::vector<CompetitorField::Draw> draw_competition(const CompetitorField& field, int n,
                                                    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CompetitorField::Draw> draws(static_cast<std::size_t>(std::max(n, 0)));
  for (auto& d : draws) d = field.draw(rng);
  return draws;
}

Deal DealTemplate::make_deal(const AdLog& ad, int required_clicks) const {
  Deal d;
  d.required_clicks = required_clicks;
  d.expiry = expiry.value_or(ad.impressions());
  d.pay_per_click = pay_per_click;
  d.ctr = ctr_override.value_or(ad.empirical_ctr());
  return d;
}

TimingStats TimingStats::from(std::vector<double> samples) {
  TimingStats t;
  t.samples = static_cast<int>(samples.size());
  if (samples.empty()) return t;
  double sum = 0.0;
  for (double s : samples) sum += s;
  t.mean_seconds = sum / t.samples;
  double ss = 0.0;
  for (double s : samples) ss += (s - t.mean_seconds) * (s - t.mean_seconds);
  t.stderr_seconds = t.samples > 1 ? std::sqrt(ss / (t.samples - 1) / t.samples) : 0.0;
  const auto k = static_cast<std::size_t>(std::ceil(0.99 * t.samples)) - 1;
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k), samples.end());
  t.p99_seconds = samples[k];
  return t;
}

std::uint64_t competition_seed(std::uint64_t seed, const std::string& ad_id) {
  return mix_seed(seed, hash_label(ad_id));
}

std::uint64_t bidder_seed(std::uint64_t seed, const std::string& ad_id, const std::string& strategy) {
  return mix_seed(mix_seed(seed, hash_label(ad_id)), hash_label(strategy) ^ 0x5bd1e995ULL);
}

ReplayReport replay_ad(const AdLog& ad, const Deal& deal, const StrategySpec& strategy,
                       const MarketModels& models, std::uint64_t seed,
                       const ReplayOptions& options) {
  if (ad.clicks.empty()) throw std::invalid_argument("replay_ad: ad '" + ad.ad_id + "' has no records");
  deal.validate();
  if (deal.expiry > ad.impressions()) {
    throw std::invalid_argument("replay_ad: expiry exceeds the ad's log length");
  }
  if (deal.ctr == 0.0 && deal.required_clicks > 0) {
    std::cerr << "warning: ad '" << ad.ad_id << "' has zero CTR; the deal cannot tip\n";
  }

  std::vector<CompetitorField::Draw> own;
  const std::vector<CompetitorField::Draw>* competition = options.competition;
  if (competition == nullptr) {
    own = draw_competition(models.competitors, deal.expiry, competition_seed(seed, ad.ad_id));
    competition = &own;
  } else if (static_cast<int>(competition->size()) < deal.expiry) {
    throw std::invalid_argument("replay_ad: pre-drawn competition shorter than expiry");
  }

  ReplayReport rep;
  rep.ad_id = ad.ad_id;
  rep.strategy = strategy.label();
  rep.required_clicks = deal.required_clicks;
  rep.impressions = deal.expiry;

  DealBidder bidder(strategy, deal, models.assumed, models.payment,
                    bidder_seed(seed, ad.ad_id, rep.strategy));
  DealState state;
  double pre_tip_spend = 0.0;
  double bid_sum = 0.0;
  std::vector<double> timings;
  if (options.keep_trace) rep.trace.reserve(static_cast<std::size_t>(deal.expiry));

  for (int i = 0; i < deal.expiry; ++i) {
    double bid = 0.0;
    if (options.measure_time) {
      const auto t0 = std::chrono::steady_clock::now();
      bid = bidder.bid(state);
      const auto t1 = std::chrono::steady_clock::now();
      if (bidder.last_decision().path != OptimizationPath::cached) {
        timings.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
    } else {
      bid = bidder.bid(state);
    }
    const auto& decision = bidder.last_decision();
    if (decision.path != OptimizationPath::cached) ++rep.optimizations;
    rep.evaluations += decision.evaluations;
    bid_sum += bid;

    const auto& draw = (*competition)[static_cast<std::size_t>(i)];
    const bool won = wins_auction(bid, draw);
    const bool clicked = won && ad.clicks[static_cast<std::size_t>(i)] != 0;
    const double payment = won ? models.payment.payment(bid) : 0.0;
    const bool was_tipped = state.tipped(deal);
    state.record(won, clicked, payment);
    if (won) ++rep.wins;
    if (!was_tipped && state.tipped(deal)) {
      rep.tip_impression = i;
      pre_tip_spend = state.spend;
    }
    if (options.keep_trace) rep.trace.push_back({bid, draw.max_bid, won, clicked, payment});
  }

  rep.clicks_won = state.clicks;
  rep.spend = state.spend;
  rep.tipped = state.tipped(deal);
  rep.mean_bid = bid_sum / deal.expiry;
  const double rho = deal.pay_per_click;
  rep.realized_profit = rep.tipped ? rho * rep.clicks_won - rep.spend : -rep.spend;
  rep.pre_tip_profit = rep.tipped ? rho * deal.required_clicks - pre_tip_spend : -rep.spend;
  if (options.measure_time) rep.optimizer_time = TimingStats::from(std::move(timings));
  return rep;
}

void SyntheticLogSpec::validate() const {
  if (n_ads < 0) throw std::invalid_argument("n_ads must be >= 0");
  if (impressions_min < 1 || impressions_max < impressions_min) {
    throw std::invalid_argument("need 1 <= impressions_min <= impressions_max");
  }
  if (!(ctr_lo >= 0.0 && ctr_hi <= 1.0 && ctr_lo <= ctr_hi)) {
    throw std::invalid_argument("ctr range must satisfy 0 <= lo <= hi <= 1");
  }
}

ClickLog generate_synthetic_log(const SyntheticLogSpec& spec) {
  spec.validate();
  ClickLog log;
  log.reserve(static_cast<std::size_t>(spec.n_ads));
  const int width = std::max(4, static_cast<int>(std::to_string(std::max(spec.n_ads - 1, 0)).size()));
  for (int a = 0; a < spec.n_ads; ++a) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(a)));
    const double ctr = rng.uniform(spec.ctr_lo, spec.ctr_hi);
    const int n = rng.uniform_int(spec.impressions_min, spec.impressions_max);
    const std::string num = std::to_string(a);
    AdLog ad;
    ad.ad_id = "ad" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;
    ad.clicks.resize(static_cast<std::size_t>(n));
    for (auto& c : ad.clicks) c = rng.bernoulli(ctr) ? 1 : 0;
    log.push_back(std::move(ad));
  }
  return log;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dealbid
