// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance            all criteria
//   acceptance 3 7        a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "dealbid/experiments.hpp"
#include "oracles.hpp"

using namespace dealbid;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

int hardware_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

Outcome mode_equivalence() {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<int> r_dist(0, 60);
  std::uniform_int_distribution<int> u_dist(1, 2000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_phi = 0.0;
  double worst_theta = 0.0;  // scaled by max(1, u p)
  const auto t0 = Clock::now();
  const int cases = 1000;
  for (int i = 0; i < cases; ++i) {
    const int r = r_dist(gen);
    const int u = u_dist(gen);
    // half the cases with small, ad-like p; half anywhere in [0, 1]
    const double p = i % 2 == 0 ? std::pow(10.0, -4.0 + 3.0 * unit(gen)) : unit(gen);
    worst_phi = std::max(worst_phi, std::fabs(phi(r, u, p, TailMode::exact) - phi(r, u, p, TailMode::tail)));
    const double dt = std::fabs(theta(r, u, p, TailMode::exact) - theta(r, u, p, TailMode::tail));
    worst_theta = std::max(worst_theta, dt / std::max(1.0, u * p));
  }
  const double elapsed = seconds_since(t0);
  return {worst_phi <= 1e-10 && worst_theta <= 1e-10 && elapsed < 60.0,
          std::to_string(cases) + " triples, max |dphi| " + fmt(worst_phi) + ", max scaled |dtheta| " +
              fmt(worst_theta) + ", " + fmt(elapsed, 3) + " s"};
}

Outcome normal_accuracy() {
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<int> u_dist(1, 20000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_phi = 0.0;
  double worst_theta = 0.0;  // divided by u p
  double worst_var = 0.0;
  int cases = 0;
  // Separate tally for the variance threshold the automatic mode uses.
  double worst_phi_auto = 0.0;
  int cases_auto = 0;
  while (cases < 600) {
    const int u = u_dist(gen);
    const double p = unit(gen);
    const double var = u * p * (1.0 - p);
    if (var < 10.0) continue;
    const double mean = u * p;
    const int r_hi = std::min(u, static_cast<int>(std::ceil(mean + 5.0 * std::sqrt(var))));
    const int r = std::uniform_int_distribution<int>(0, r_hi)(gen);
    const double e_phi = std::fabs(phi(r, u, p, TailMode::normal) - phi(r, u, p, TailMode::exact));
    const double e_theta = std::fabs(theta(r, u, p, TailMode::normal) - theta(r, u, p, TailMode::exact)) / mean;
    if (e_phi > worst_phi) {
      worst_phi = e_phi;
      worst_var = var;
    }
    worst_theta = std::max(worst_theta, e_theta);
    if (var >= kDefaultNormalMinVariance) {
      worst_phi_auto = std::max(worst_phi_auto, e_phi);
      ++cases_auto;
    }
    ++cases;
  }
  return {worst_phi <= 0.01 && worst_theta <= 0.01,
          std::to_string(cases) + " cases with u p (1-p) >= 10, max |dphi| " + fmt(worst_phi) + " (at variance " +
              fmt(worst_var, 3) + "), max |dtheta|/(u p) " + fmt(worst_theta) + "; variance >= " +
              fmt(kDefaultNormalMinVariance, 3) + " subset (" + std::to_string(cases_auto) + " cases) max |dphi| " +
              fmt(worst_phi_auto)};
}

Outcome oracles() {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PaymentModel pay = PaymentModel::first_price();
  const TailSettings exact{TailMode::exact};

  int sets = 0;
  int agree = 0;
  double worst_z = 0.0;
  for (int i = 0; i < 24; ++i) {
    const auto win = i % 3 == 0 ? WinModel::gaussian(0.02, 0.01, 3) : WinModel::uniform(0.0, 0.04, 2 + i % 4);
    const int u = 50 + static_cast<int>(unit(gen) * 3000);
    const double ctr = 0.005 + unit(gen) * 0.05;
    const int c = static_cast<int>(unit(gen) * 10);
    const int r = static_cast<int>(unit(gen) * std::min(60.0, u * ctr * 1.5));
    const Deal deal{c + r, u + 10, 5.0 + unit(gen) * 15.0, ctr};
    const Position pos{c, r, u, unit(gen)};
    const double bid = win.bounds().lo + unit(gen) * win.bounds().width();
    const double model = expected_profit(deal, pos, bid, win, pay, exact);
    const auto mc = oracle::simulate_profit(deal, pos, bid, win, 1'000'000, 9000 + i);
    const double z = mc.stderr_ > 0 ? std::fabs(model - mc.mean) / mc.stderr_ : std::fabs(model - mc.mean) * 1e12;
    worst_z = std::max(worst_z, z);
    agree += z <= 4.0 ? 1 : 0;
    ++sets;
  }

  int states = 0;
  double worst_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto win = WinModel::uniform(0.0, 0.04, 2 + i % 5);
    const int u = 1 + static_cast<int>(unit(gen) * 1500);
    const double ctr = 0.001 + unit(gen) * 0.1;
    const int c = static_cast<int>(unit(gen) * 20);
    const int r = static_cast<int>(unit(gen) * 40);
    const Deal deal{c + r, u + 5, 1.0 + unit(gen) * 20.0, ctr};
    const Position pos{c, r, u, 0.0};
    const double bid = unit(gen) * 0.04;
    const double mv = marginal_value(deal, pos, bid, win, exact);
    const double ref = static_cast<double>(oracle::marginal_value(deal, pos, bid, win));
    worst_rel = std::max(worst_rel, mv == ref ? 0.0 : std::fabs(mv - ref) / std::fabs(ref));
    ++states;
  }
  return {agree == sets && sets >= 20 && worst_rel <= 1e-9,
          std::to_string(agree) + "/" + std::to_string(sets) + " Monte-Carlo sets within 4 SE (worst " +
              fmt(worst_z, 3) + " SE); marginal value over " + std::to_string(states) +
              " states, worst relative error " + fmt(worst_rel)};
}

Outcome non_convexity() {
  CurveSpec c;
  c.deal = Deal{25, 3020, 15.0, 0.002};
  c.pos = Position{20, 5, 3000, 0.0};
  c.lo = 0.0;
  c.hi = 0.1;
  c.points = 1000;
  const auto rows = objective_curve(c, WinModel::uniform(0.0, 0.1, 2), PaymentModel::first_price());
  std::vector<double> exact;
  for (const auto& r : rows) exact.push_back(r.exact);
  const auto peaks = strict_local_maxima(exact);
  std::string where;
  for (auto i : peaks) where += (where.empty() ? "" : ", ") + fmt(rows[i].bid, 4);
  return {peaks.size() >= 2, std::to_string(peaks.size()) + " strict local maxima on 1000 points, at bids " + where};
}

Outcome optimizer_quality() {
  std::mt19937_64 gen(505);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PaymentModel pay = PaymentModel::first_price();
  const OptimizerConfig cfg;
  int ok = 0;
  const int instances = 200;
  double worst_gap = 0.0;
  for (int i = 0; i < instances; ++i) {
    const int n = 2 + static_cast<int>(unit(gen) * 5);
    const WinModel win = i % 4 == 3 ? WinModel::gaussian(0.01 + unit(gen) * 0.03, 0.003 + unit(gen) * 0.01, n)
                                    : WinModel::uniform(0.0, 0.02 + unit(gen) * 0.08, n);
    const int u = 1 + static_cast<int>(unit(gen) * 5000);
    const double ctr = 0.002 + unit(gen) * 0.05;
    const int c = static_cast<int>(unit(gen) * 30);
    const int r = static_cast<int>(unit(gen) * 61);
    const Deal deal{c + r, u + 10, 5.0 + unit(gen) * 20.0, ctr};
    const Position pos{c, r, u, 0.0};
    Rng rng(mix_seed(505, static_cast<std::uint64_t>(i)));
    const auto best = optimize_bid(deal, pos, win, pay, cfg, rng);
    const auto b = win.bounds();
    const double grid = oracle::grid_max(
        [&](double x) { return future_profit(deal, pos, x, win, pay, cfg.tail); }, b.lo, b.hi, 10000);
    const double slack = std::max(1e-8, 1e-6 * std::fabs(grid));
    if (best.value >= grid - slack) {
      ++ok;
    } else {
      worst_gap = std::max(worst_gap, (grid - best.value) / std::max(1e-300, std::fabs(grid)));
    }
  }
  return {ok >= 198, std::to_string(ok) + "/" + std::to_string(instances) +
                         " instances reach the 10^4-point grid maximum (worst relative shortfall " +
                         fmt(worst_gap) + ")"};
}

Outcome zero_guarantee_reduction() {
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PaymentModel pay = PaymentModel::first_price();
  const OptimizerConfig cfg;
  int ok_rt = 0;
  int ok_closed = 0;
  int ok_bidder = 0;
  const int deals = 150;
  double worst = 0.0;
  for (int i = 0; i < deals; ++i) {
    const int n = 2 + static_cast<int>(unit(gen) * 6);
    const double hi = 0.01 + unit(gen) * 0.1;
    const WinModel win = WinModel::uniform(0.0, hi, n);
    const int u = 1 + static_cast<int>(unit(gen) * 10000);
    const Deal deal{0, u, 1.0 + unit(gen) * 20.0, 0.001 + unit(gen) * 0.05};
    const double tol = 1e-3 * hi;

    const double stat = static_optimal_bid(deal, win, pay);
    Rng rng(mix_seed(606, static_cast<std::uint64_t>(i)));
    const double rt = optimize_bid(deal, Position{0, 0, u, 0.0}, win, pay, cfg, rng).bid;
    worst = std::max(worst, std::fabs(rt - stat) / hi);
    ok_rt += std::fabs(rt - stat) <= tol ? 1 : 0;

    const double closed = std::clamp((n - 1.0) * deal.pay_per_click * deal.ctr / n, 0.0, hi);
    ok_closed += std::fabs(stat - closed) <= tol ? 1 : 0;

    StrategySpec spec;
    DealBidder bidder(spec, deal, win, pay, mix_seed(607, static_cast<std::uint64_t>(i)));
    DealState state;
    ok_bidder += std::fabs(bidder.bid(state) - stat) <= tol ? 1 : 0;
  }
  return {ok_rt == deals && ok_closed == deals && ok_bidder == deals,
          "optimizer at r=0 matches the static bid on " + std::to_string(ok_rt) + "/" + std::to_string(deals) +
              " (worst " + fmt(worst) + " of the range), closed form " + std::to_string(ok_closed) + "/" +
              std::to_string(deals) + ", real-time bidder " + std::to_string(ok_bidder) + "/" +
              std::to_string(deals)};
}

// Shared harness for the two profit-dominance criteria.
struct DominanceRun {
  std::vector<int> ms = {0, 25, 50, 100, 150};
  std::vector<double> rt;
  std::vector<double> stat;
  double seconds = 0.0;
};

DominanceRun dominance(const MarketModels& models, std::uint64_t seed) {
  const ClickLog log = generate_synthetic_log({200, 10000, 10000, 0.005, 0.02, seed});
  std::vector<StrategySpec> strategies(2);
  strategies[0].kind = StrategyKind::real_time;
  strategies[1].kind = StrategyKind::static_optimal;
  DealTemplate tmpl;
  tmpl.pay_per_click = 10.0;
  DominanceRun run;
  const auto t0 = Clock::now();
  const auto res = run_sweep(log, tmpl, run.ms, strategies, models, seed, 1);
  run.seconds = seconds_since(t0);
  for (const auto& row : res.rows) (row.strategy == "rt" ? run.rt : run.stat).push_back(row.mean_profit);
  return run;
}

std::string describe(const DominanceRun& run) {
  std::string s;
  for (std::size_t i = 0; i < run.ms.size(); ++i) {
    s += (i ? "; " : "") + std::string("m=") + std::to_string(run.ms[i]) + " rt " + fmt(run.rt[i]) + " static " +
         fmt(run.stat[i]);
  }
  return s + "; " + fmt(run.seconds, 3) + " s single-threaded";
}

Outcome profit_dominance() {
  const auto run = dominance(MarketModels::matching(WinModel::uniform(0.0, 0.04, 4)), 707);
  bool pass = run.seconds < 600.0;
  for (std::size_t i = 0; i < run.ms.size(); ++i) {
    pass = pass && run.rt[i] >= run.stat[i];
    if (run.ms[i] >= 50) pass = pass && run.rt[i] > run.stat[i];
  }
  return {pass, describe(run)};
}

Outcome robustness() {
  MarketModels models;
  models.assumed = WinModel::uniform(0.0, 0.04, 4);
  models.competitors = CompetitorField({WinModel::uniform(0.0, 0.04, 2), WinModel::gaussian(0.02, 0.01, 3)});
  const auto run = dominance(models, 808);
  bool pass = true;
  for (std::size_t i = 0; i < run.ms.size(); ++i) pass = pass && run.rt[i] >= run.stat[i];
  return {pass, describe(run)};
}

Outcome selection() {
  const ClickLog log = generate_synthetic_log({200, 10000, 10000, 0.005, 0.02, 909});
  const std::vector<int> mmax = {0, 100, 150, 200};
  const SelectionSettings settings;
  const auto rows = run_selection(log, mmax, OptimizerConfig{}, MarketModels::matching(WinModel::uniform(0.0, 0.04, 4)),
                                  settings, 909, hardware_threads());
  if (rows.size() != 2 * mmax.size()) return {false, "unexpected row count"};
  bool pass = true;
  std::string s;
  for (std::size_t i = 0; i < mmax.size(); ++i) {
    const auto& rt = rows[2 * i];
    const auto& st = rows[2 * i + 1];
    if (mmax[i] == 0) {
      pass = pass && rt.mean_group_profit == st.mean_group_profit;
    } else {
      pass = pass && rt.mean_group_profit > st.mean_group_profit;
    }
    s += (i ? "; " : "") + std::string("max m=") + std::to_string(mmax[i]) + " rt " + fmt(rt.mean_group_profit) +
         " static " + fmt(st.mean_group_profit);
  }
  return {pass, std::to_string(rows.empty() ? 0 : rows[0].groups) + " groups of " +
                    std::to_string(settings.group_size) + "; " + s};
}

Outcome admissibility() {
  const ClickLog log = generate_synthetic_log({200, 10000, 10000, 0.005, 0.02, 1010});
  const std::vector<int> ms = {0, 25, 50, 100, 150};
  std::vector<StrategySpec> strategies(1);
  DealTemplate tmpl;
  tmpl.pay_per_click = 10.0;
  const auto res = run_admission(log, tmpl, ms, strategies, MarketModels::matching(WinModel::uniform(0.0, 0.04, 4)),
                                 OptimizerConfig{}, 0.0, 1010, hardware_threads());
  double total_all = 0.0;
  double total_admitted = 0.0;
  bool means = true;
  std::string s;
  for (const auto& row : res.rows) {
    total_all += row.total_profit_all;
    total_admitted += row.total_profit_admitted;
    means = means && row.admitted > 0 && row.mean_profit_admitted >= row.mean_profit_all;
    s += "; m=" + std::to_string(row.required_clicks) + " admitted " + std::to_string(row.admitted) + "/" +
         std::to_string(row.deals) + " mean " + fmt(row.mean_profit_admitted) + " vs " + fmt(row.mean_profit_all);
  }
  const double rel = std::fabs(total_admitted - total_all) / std::fabs(total_all);
  return {rel <= 0.02 && means, "total with admission " + fmt(total_admitted, 7) + " vs without " +
                                    fmt(total_all, 7) + " (" + fmt(100.0 * rel, 3) + "%)" + s};
}

Outcome timing() {
  BenchSettings b;
  b.required_clicks = {1, 50, 100, 200, 300, 400};
  b.modes = {TailMode::automatic};
  b.repetitions = 1000;
  const auto rows = run_bench(b, WinModel::uniform(0.0, 0.04, 4), PaymentModel::first_price(), OptimizerConfig{}, 1111);
  bool fast = true;
  bool increasing = true;
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    fast = fast && rows[i].time.mean_seconds <= 1e-3;
    // Weakly increasing up to three combined standard errors, for every pair.
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double noise = 3.0 * std::hypot(rows[i].time.stderr_seconds, rows[j].time.stderr_seconds);
      increasing = increasing && rows[j].time.mean_seconds >= rows[i].time.mean_seconds - noise;
    }
    s += (i ? "; " : "") + std::string("m=") + std::to_string(rows[i].required_clicks) + " " +
         fmt(rows[i].time.mean_seconds * 1e6, 4) + " us (se " + fmt(rows[i].time.stderr_seconds * 1e6, 2) + ", " +
         fmt(rows[i].mean_evaluations, 4) + " evals)";
  }
  return {fast && increasing, std::string(fast ? "" : "over 1 ms; ") + (increasing ? "" : "not monotone; ") + s};
}

#ifdef DEALBID_CLI_PATH
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "dealbid_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "run.json") << R"({
    "seed": 17,
    "log": {"synthetic": {"n_ads": 12, "impressions_min": 1500, "impressions_max": 3000, "ctr_lo": 0.005, "ctr_hi": 0.02}},
    "deal": {"required_clicks": [0, 10, 25]},
    "selection": {"total_visits": 3000, "max_required_clicks": [0, 30]},
    "bench": {"required_clicks": [1, 50], "repetitions": 20},
    "curve": {"points": 200}
  })";
  const std::vector<std::string> commands = {"replay", "sweep", "select", "admit", "bench", "gen-log",
                                             "objective-curve"};
  int identical = 0;
  int compared = 0;
  std::string bad;
  for (const auto& cmd : commands) {
    std::vector<std::vector<std::pair<std::string, std::string>>> runs;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / ("run" + std::to_string(k));
      fs::create_directories(out);
      const std::string line = std::string("\"") + DEALBID_CLI_PATH + "\" " + cmd + " --config \"" +
                               (dir / "run.json").string() + "\" --seed 99 --threads " + (k == 0 ? "1" : "4") +
                               " --out \"" + (out / (cmd + ".csv")).string() + "\" > /dev/null";
      const int raw = std::system(line.c_str());
      if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) return {false, cmd + " exited abnormally"};
      std::vector<std::pair<std::string, std::string>> files;
      for (const auto& e : fs::directory_iterator(out)) {
        const std::string name = e.path().filename().string();
        if (name.rfind(cmd, 0) != 0 || name.find("_timing") != std::string::npos) continue;
        files.emplace_back(name, slurp(e.path()));
      }
      std::sort(files.begin(), files.end());
      runs.push_back(std::move(files));
    }
    ++compared;
    if (runs[0] == runs[1] && !runs[0].empty()) {
      ++identical;
    } else {
      bad += " " + cmd;
    }
  }
  fs::remove_all(dir);
  return {identical == compared,
          std::to_string(identical) + "/" + std::to_string(compared) +
              " commands byte-identical across two runs (1 vs 4 threads; wall-clock timing file excluded)" +
              (bad.empty() ? "" : "; differing:" + bad)};
}
#else
Outcome cli_determinism() { return {false, "command-line tool not built"}; }
#endif

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "tail-sum modes agree", mode_equivalence},
      {2, "normal approximation accuracy", normal_accuracy},
      {3, "profit and marginal-value oracles", oracles},
      {4, "objective is not quasi-concave", non_convexity},
      {5, "multi-start optimizer quality", optimizer_quality},
      {6, "zero guarantee gives the static bid", zero_guarantee_reduction},
      {7, "real-time profit dominance", profit_dominance},
      {8, "dominance under misspecified competitors", robustness},
      {9, "deal selection", selection},
      {10, "admission control", admissibility},
      {11, "optimizer timing", timing},
      {12, "command-line determinism", cli_determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
