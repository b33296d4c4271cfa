#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dealbid/simulator.hpp"

namespace dealbid {

// ---------------------------------------------------------------------------
// Required-clicks sweep

struct SweepRow {
  int required_clicks = 0;
  std::string strategy;
  int ads = 0;
  double mean_profit = 0.0;
  double mean_pre_tip_profit = 0.0;
  double tipped_fraction = 0.0;
  double mean_spend = 0.0;
  double mean_wins = 0.0;
  double mean_clicks = 0.0;
};

struct SweepResult {
  std::vector<ReplayReport> replays;  // ordered by (m, strategy, ad)
  std::vector<SweepRow> rows;         // one per (m, strategy)
};

/// Replays every ad for every m and strategy. Each ad's competition is drawn
/// once and shared by all (m, strategy) pairs, so comparisons are paired.
SweepResult run_sweep(const ClickLog& log, const DealTemplate& tmpl, std::span<const int> m_values,
                      std::span<const StrategySpec> strategies, const MarketModels& models,
                      std::uint64_t seed, int threads = 1);

SweepRow summarize(int m, const std::string& strategy, std::span<const ReplayReport> reps);

// ---------------------------------------------------------------------------
// Deal selection

enum class Selector { real_time, static_value };
std::string_view to_string(Selector s);

struct SelectionSettings {
  int group_size = 4;
  int total_visits = 15000;
  double pay_per_click = 20.0;
  std::optional<double> max_ctr = 0.02;  // ads above are dropped; nullopt keeps all
};

/// Shuffles the ads that pass the CTR filter and cuts them into groups of
/// group_size; a short final group is dropped. Entries index into `log`.
std::vector<std::vector<int>> form_groups(const ClickLog& log, const SelectionSettings& settings,
                                          std::uint64_t seed);

struct GroupOutcome {
  std::vector<int> required_clicks;  // per deal
  std::vector<double> profits;       // realized, per deal
  std::vector<bool> tipped;
  std::vector<int> selected;         // opportunities each deal was picked for
  double total_profit = 0.0;
};

/// One group, one selector. Every visit is offered to all live deals; each
/// gets a real-time bid, the selector picks one, and only that deal enters
/// the auction. Every live deal's clock advances. Deal i's click outcome at
/// visit t is the ad's logged click at index t.
///   real_time:    argmax of marginal_value - bid
///   static_value: argmax of ctr * rho - bid
/// Ties go to the lower index.
GroupOutcome run_selection_group(const ClickLog& log, std::span<const int> group,
                                 std::span<const int> required_clicks, Selector selector,
                                 const OptimizerConfig& cfg, const MarketModels& models,
                                 const SelectionSettings& settings, std::uint64_t seed);

struct SelectionRow {
  int max_required_clicks = 0;
  std::string selector;
  int groups = 0;
  double mean_group_profit = 0.0;
  double mean_deal_profit = 0.0;
  double tipped_fraction = 0.0;
};

/// For every m_max: per group, each deal's m is drawn uniformly from
/// [0, m_max] (same draw for both selectors), then both selectors run with
/// the real-time bidder against the same competition.
std::vector<SelectionRow> run_selection(const ClickLog& log, std::span<const int> max_required_clicks,
                                        const OptimizerConfig& cfg, const MarketModels& models,
                                        const SelectionSettings& settings, std::uint64_t seed,
                                        int threads = 1);

// ---------------------------------------------------------------------------
// Admission control

struct AdmissionRow {
  int required_clicks = 0;
  std::string strategy;
  int deals = 0;
  int admitted = 0;
  double mean_profit_all = 0.0;
  double mean_profit_admitted = 0.0;  // NaN when nothing was admitted
  double total_profit_all = 0.0;
  double total_profit_admitted = 0.0;
};

struct AdmissionResult {
  std::vector<AdmissionRow> rows;              // one per (m, strategy)
  std::vector<AdmissionDecision> decisions;    // ordered by (m, ad)
};

/// Scores every fresh deal with assess_admission, replays all of them, and
/// reports aggregates over all deals and over admitted deals only.
AdmissionResult run_admission(const ClickLog& log, const DealTemplate& tmpl,
                              std::span<const int> m_values, std::span<const StrategySpec> strategies,
                              const MarketModels& models, const OptimizerConfig& admission_cfg,
                              double threshold, std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Optimizer timing

struct BenchSettings {
  std::vector<int> required_clicks = {1, 50, 100, 200, 300, 400};
  std::vector<TailMode> modes = {TailMode::automatic};
  int repetitions = 1000;
  int remaining_visits = 10000;
  int clicks = 0;
  double ctr = 0.01;
  double pay_per_click = 10.0;
};

struct BenchRow {
  int required_clicks = 0;
  TailMode mode = TailMode::automatic;
  int repetitions = 0;
  double mean_evaluations = 0.0;
  double bid = 0.0;        // first repetition's bid
  double objective = 0.0;  // and its objective value
  TimingStats time;
};

/// Times next_bid's full multi-start path on a fresh deal, `repetitions`
/// times per (m, mode), each with its own random starts.
std::vector<BenchRow> run_bench(const BenchSettings& settings, const WinModel& win,
                                const PaymentModel& pay, const OptimizerConfig& cfg,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Objective curve

struct CurveSpec {
  Deal deal;     // pay_per_click and ctr are used
  Position pos;
  double lo = 0.0;
  double hi = 0.1;
  int points = 1000;
};

struct CurveRow {
  double bid = 0.0;
  double exact = 0.0;
  double tail = 0.0;
  double normal = 0.0;
  double normal_printed = 0.0;  // Theta without the upper-tail factor
};

/// expected_profit on an evenly spaced grid over [lo, hi]; one row when
/// lo == hi or points == 1.
std::vector<CurveRow> objective_curve(const CurveSpec& spec, const WinModel& win,
                                      const PaymentModel& pay);

/// Grid indices that are strict local maxima (endpoints compare to their one
/// neighbour).
std::vector<std::size_t> strict_local_maxima(std::span<const double> values);

}  // namespace dealbid
