#include "dealbid/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dealbid {

// ---------------------------------------------------------------------------
// Sweep

SweepRow summarize(int m, const std::string& strategy, std::span<const ReplayReport> reps) {
  SweepRow row;
  row.required_clicks = m;
  row.strategy = strategy;
  row.ads = static_cast<int>(reps.size());
  if (reps.empty()) return row;
  for (const auto& r : reps) {
    row.mean_profit += r.realized_profit;
    row.mean_pre_tip_profit += r.pre_tip_profit;
    row.tipped_fraction += r.tipped ? 1.0 : 0.0;
    row.mean_spend += r.spend;
    row.mean_wins += r.wins;
    row.mean_clicks += r.clicks_won;
  }
  const double n = static_cast<double>(reps.size());
  row.mean_profit /= n;
  row.mean_pre_tip_profit /= n;
  row.tipped_fraction /= n;
  row.mean_spend /= n;
  row.mean_wins /= n;
  row.mean_clicks /= n;
  return row;
}

SweepResult run_sweep(const ClickLog& log, const DealTemplate& tmpl, std::span<const int> m_values,
                      std::span<const StrategySpec> strategies, const MarketModels& models,
                      std::uint64_t seed, int threads) {
  if (log.empty()) throw std::invalid_argument("sweep needs a non-empty click log");
  if (m_values.empty()) throw std::invalid_argument("sweep needs at least one required-clicks value");
  if (strategies.empty()) throw std::invalid_argument("sweep needs at least one strategy");

  const std::size_t n_ads = log.size();
  const std::size_t n_m = m_values.size();
  const std::size_t n_s = strategies.size();
  SweepResult out;
  out.replays.resize(n_ads * n_m * n_s);
  auto slot = [&](std::size_t mi, std::size_t si, std::size_t ai) {
    return (mi * n_s + si) * n_ads + ai;
  };

  parallel_for(static_cast<int>(n_ads), threads, [&](int a) {
    const AdLog& ad = log[static_cast<std::size_t>(a)];
    const Deal probe = tmpl.make_deal(ad, 0);
    const auto competition =
        draw_competition(models.competitors, probe.expiry, competition_seed(seed, ad.ad_id));
    ReplayOptions opts;
    opts.competition = &competition;
    for (std::size_t mi = 0; mi < n_m; ++mi) {
      const Deal deal = tmpl.make_deal(ad, m_values[mi]);
      for (std::size_t si = 0; si < n_s; ++si) {
        out.replays[slot(mi, si, static_cast<std::size_t>(a))] =
            replay_ad(ad, deal, strategies[si], models, seed, opts);
      }
    }
  });

  for (std::size_t mi = 0; mi < n_m; ++mi) {
    for (std::size_t si = 0; si < n_s; ++si) {
      const std::span<const ReplayReport> reps(&out.replays[slot(mi, si, 0)], n_ads);
      out.rows.push_back(summarize(m_values[mi], strategies[si].label(), reps));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Selection

std::string_view to_string(Selector s) {
  return s == Selector::real_time ? "rt_selection" : "static_selection";
}

std::vector<std::vector<int>> form_groups(const ClickLog& log, const SelectionSettings& settings,
                                          std::uint64_t seed) {
  if (settings.group_size < 1) throw std::invalid_argument("group_size must be >= 1");
  std::vector<int> pool;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (settings.max_ctr && log[i].empirical_ctr() > *settings.max_ctr) continue;
    pool.push_back(static_cast<int>(i));
  }
  Rng rng(mix_seed(seed, 0x67726f7570ULL));
  for (int i = static_cast<int>(pool.size()) - 1; i > 0; --i) {
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(rng.uniform_int(0, i))]);
  }
  std::vector<std::vector<int>> groups;
  const auto k = static_cast<std::size_t>(settings.group_size);
  for (std::size_t start = 0; start + k <= pool.size(); start += k) {
    groups.emplace_back(pool.begin() + static_cast<std::ptrdiff_t>(start),
                        pool.begin() + static_cast<std::ptrdiff_t>(start + k));
  }
  return groups;
}

GroupOutcome run_selection_group(const ClickLog& log, std::span<const int> group,
                                 std::span<const int> required_clicks, Selector selector,
                                 const OptimizerConfig& cfg, const MarketModels& models,
                                 const SelectionSettings& settings, std::uint64_t seed) {
  if (group.size() != required_clicks.size()) {
    throw std::invalid_argument("run_selection_group: one required-clicks value per deal");
  }
  if (settings.total_visits < 1) throw std::invalid_argument("total_visits must be >= 1");

  StrategySpec rt;
  rt.kind = StrategyKind::real_time;
  rt.optimizer = cfg;

  const std::size_t n = group.size();
  std::vector<Deal> deals;
  std::vector<DealBidder> bidders;
  std::vector<DealState> states(n);
  int horizon = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const AdLog& ad = log.at(static_cast<std::size_t>(group[i]));
    Deal d;
    d.required_clicks = required_clicks[i];
    d.expiry = std::min(settings.total_visits, ad.impressions());
    d.pay_per_click = settings.pay_per_click;
    d.ctr = ad.empirical_ctr();
    deals.push_back(d);
    bidders.emplace_back(rt, d, models.assumed, models.payment, mix_seed(seed, 0x1000 + i));
    horizon = std::max(horizon, d.expiry);
  }
  const auto competition = draw_competition(models.competitors, horizon, mix_seed(seed, 0xa0c7));

  GroupOutcome out;
  out.required_clicks.assign(required_clicks.begin(), required_clicks.end());
  out.selected.assign(n, 0);
  for (int t = 0; t < horizon; ++t) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    double best_bid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (states[i].expired(deals[i])) continue;
      const double bid = bidders[i].bid(states[i]);
      const Deal& d = deals[i];
      const double score = selector == Selector::real_time
                               ? marginal_value(d, states[i].position(d), bid, models.assumed, cfg.tail) - bid
                               : d.ctr * d.pay_per_click - bid;
      if (best < 0 || score > best_score) {
        best = static_cast<int>(i);
        best_score = score;
        best_bid = bid;
      }
    }
    if (best < 0) break;

    const auto& ad = log[static_cast<std::size_t>(group[static_cast<std::size_t>(best)])];
    const bool won = wins_auction(best_bid, competition[static_cast<std::size_t>(t)]);
    const bool clicked = won && ad.clicks[static_cast<std::size_t>(t)] != 0;
    const double payment = won ? models.payment.payment(best_bid) : 0.0;
    ++out.selected[static_cast<std::size_t>(best)];
    for (std::size_t i = 0; i < n; ++i) {
      if (states[i].expired(deals[i])) continue;
      const bool chosen = static_cast<int>(i) == best;
      states[i].record(chosen && won, chosen && clicked, chosen ? payment : 0.0);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const bool tipped = states[i].tipped(deals[i]);
    const double profit =
        tipped ? deals[i].pay_per_click * states[i].clicks - states[i].spend : -states[i].spend;
    out.profits.push_back(profit);
    out.tipped.push_back(tipped);
    out.total_profit += profit;
  }
  return out;
}

std::vector<SelectionRow> run_selection(const ClickLog& log, std::span<const int> max_required_clicks,
                                        const OptimizerConfig& cfg, const MarketModels& models,
                                        const SelectionSettings& settings, std::uint64_t seed,
                                        int threads) {
  const auto groups = form_groups(log, settings, seed);
  constexpr Selector kSelectors[] = {Selector::real_time, Selector::static_value};
  std::vector<SelectionRow> rows;
  for (int m_max : max_required_clicks) {
    if (m_max < 0) throw std::invalid_argument("max required clicks must be >= 0");
    std::vector<GroupOutcome> outcomes(groups.size() * 2);
    parallel_for(static_cast<int>(groups.size()), threads, [&](int g) {
      const std::uint64_t group_seed = mix_seed(seed, static_cast<std::uint64_t>(g));
      Rng m_rng(mix_seed(group_seed, static_cast<std::uint64_t>(m_max)));
      std::vector<int> ms(groups[static_cast<std::size_t>(g)].size());
      for (auto& m : ms) m = m_rng.uniform_int(0, m_max);
      for (std::size_t s = 0; s < 2; ++s) {
        outcomes[static_cast<std::size_t>(g) * 2 + s] = run_selection_group(
            log, groups[static_cast<std::size_t>(g)], ms, kSelectors[s], cfg, models, settings, group_seed);
      }
    });
    for (std::size_t s = 0; s < 2; ++s) {
      SelectionRow row;
      row.max_required_clicks = m_max;
      row.selector = std::string(to_string(kSelectors[s]));
      row.groups = static_cast<int>(groups.size());
      int deals = 0;
      int tipped = 0;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& o = outcomes[g * 2 + s];
        row.mean_group_profit += o.total_profit;
        deals += static_cast<int>(o.profits.size());
        tipped += static_cast<int>(std::count(o.tipped.begin(), o.tipped.end(), true));
      }
      if (!groups.empty()) {
        row.mean_deal_profit = row.mean_group_profit / deals;
        row.mean_group_profit /= static_cast<double>(groups.size());
        row.tipped_fraction = static_cast<double>(tipped) / deals;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Admission

AdmissionResult run_admission(const ClickLog& log, const DealTemplate& tmpl,
                              std::span<const int> m_values, std::span<const StrategySpec> strategies,
                              const MarketModels& models, const OptimizerConfig& admission_cfg,
                              double threshold, std::uint64_t seed, int threads) {
  if (std::isnan(threshold)) throw std::invalid_argument("admission threshold must not be NaN");
  admission_cfg.validate();
  const auto sweep = run_sweep(log, tmpl, m_values, strategies, models, seed, threads);

  const std::size_t n_ads = log.size();
  AdmissionResult out;
  out.decisions.resize(m_values.size() * n_ads);
  parallel_for(static_cast<int>(n_ads), threads, [&](int a) {
    const AdLog& ad = log[static_cast<std::size_t>(a)];
    for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
      const Deal deal = tmpl.make_deal(ad, m_values[mi]);
      Rng rng(mix_seed(mix_seed(seed, hash_label(ad.ad_id)), 0xad00 + static_cast<std::uint64_t>(m_values[mi])));
      out.decisions[mi * n_ads + static_cast<std::size_t>(a)] = assess_admission(
          deal, deal.expiry, models.assumed, models.payment, admission_cfg, threshold, rng);
    }
  });

  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    for (std::size_t si = 0; si < strategies.size(); ++si) {
      AdmissionRow row;
      row.required_clicks = m_values[mi];
      row.strategy = strategies[si].label();
      row.deals = static_cast<int>(n_ads);
      for (std::size_t a = 0; a < n_ads; ++a) {
        const double profit = sweep.replays[(mi * strategies.size() + si) * n_ads + a].realized_profit;
        row.total_profit_all += profit;
        if (out.decisions[mi * n_ads + a].admitted) {
          ++row.admitted;
          row.total_profit_admitted += profit;
        }
      }
      row.mean_profit_all = row.total_profit_all / static_cast<double>(n_ads);
      row.mean_profit_admitted = row.admitted > 0 ? row.total_profit_admitted / row.admitted
                                                  : std::numeric_limits<double>::quiet_NaN();
      out.rows.push_back(row);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bench

std::vector<BenchRow> run_bench(const BenchSettings& settings, const WinModel& win,
                                const PaymentModel& pay, const OptimizerConfig& cfg,
                                std::uint64_t seed) {
  if (settings.repetitions < 1) throw std::invalid_argument("bench needs repetitions >= 1");
  if (settings.remaining_visits < 1) throw std::invalid_argument("bench needs remaining_visits >= 1");
  struct Cell {
    Deal deal;
    OptimizerConfig cfg;
    BenchRow row;
    std::vector<double> samples;
    long long evaluations = 0;
  };
  std::vector<Cell> cells;
  for (int m : settings.required_clicks) {
    for (TailMode mode : settings.modes) {
      Cell cell;
      cell.deal = Deal{m, settings.remaining_visits, settings.pay_per_click, settings.ctr};
      cell.deal.validate();
      cell.cfg = cfg;
      cell.cfg.tail.mode = mode;
      cell.row.required_clicks = m;
      cell.row.mode = mode;
      cell.row.repetitions = settings.repetitions;
      cell.samples.reserve(static_cast<std::size_t>(settings.repetitions));
      cells.push_back(std::move(cell));
    }
  }

  // Repetitions run round-robin over the cells so slow drift in machine speed
  // lands on every cell alike. The first three rounds are warm-up.
  for (int rep = -3; rep < settings.repetitions; ++rep) {
    const std::uint64_t rep_seed = mix_seed(seed, static_cast<std::uint64_t>(rep + 3));
    for (Cell& cell : cells) {
      DealState state;
      state.clicks = settings.clicks;
      Rng rng(rep_seed);
      const auto t0 = std::chrono::steady_clock::now();
      const BidDecision d = next_bid(cell.deal, state, win, pay, cell.cfg, rng);
      const auto t1 = std::chrono::steady_clock::now();
      if (rep < 0) continue;
      cell.samples.push_back(std::chrono::duration<double>(t1 - t0).count());
      cell.evaluations += d.evaluations;
      if (rep == 0) {
        cell.row.bid = d.bid;
        cell.row.objective = d.objective;
      }
    }
  }

  std::vector<BenchRow> rows;
  for (Cell& cell : cells) {
    cell.row.mean_evaluations = static_cast<double>(cell.evaluations) / settings.repetitions;
    cell.row.time = TimingStats::from(std::move(cell.samples));
    rows.push_back(cell.row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Curve

std::vector<CurveRow> objective_curve(const CurveSpec& spec, const WinModel& win,
                                      const PaymentModel& pay) {
  if (spec.points < 1) throw std::invalid_argument("objective curve needs points >= 1");
  if (spec.hi < spec.lo) throw std::invalid_argument("objective curve needs lo <= hi");
  const int n = spec.hi == spec.lo ? 1 : spec.points;
  TailSettings exact{TailMode::exact};
  TailSettings tail{TailMode::tail};
  TailSettings normal{TailMode::normal};
  TailSettings printed{TailMode::normal};
  printed.printed_theta_form = true;

  std::vector<CurveRow> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double b = n == 1 ? spec.lo : spec.lo + (spec.hi - spec.lo) * i / (n - 1);
    CurveRow row;
    row.bid = b;
    row.exact = expected_profit(spec.deal, spec.pos, b, win, pay, exact);
    row.tail = expected_profit(spec.deal, spec.pos, b, win, pay, tail);
    row.normal = expected_profit(spec.deal, spec.pos, b, win, pay, normal);
    row.normal_printed = expected_profit(spec.deal, spec.pos, b, win, pay, printed);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::size_t> strict_local_maxima(std::span<const double> v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool left = i == 0 || v[i] > v[i - 1];
    const bool right = i + 1 == v.size() || v[i] > v[i + 1];
    if (left && right) out.push_back(i);
  }
  return out;
}

}  // namespace dealbid
