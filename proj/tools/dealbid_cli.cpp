// dealbid: command-line front end for replay, sweep, selection, admission,
// timing, synthetic-log and objective-curve runs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dealbid/config.hpp"
#include "dealbid/report.hpp"

namespace fs = std::filesystem;
using namespace dealbid;

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 1;
  bool summary = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Run-config file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Override the config seed");
  cmd->add_option("--out", args.out, "Output file");
  cmd->add_option("--threads", args.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--summary", args.summary, "Print aggregates to standard output");
}

RunConfig load(const CommonArgs& args) {
  RunConfig cfg = args.config.empty() ? parse_run_config("{}") : load_run_config(args.config);
  if (args.seed) cfg.set_seed(*args.seed);
  return cfg;
}

// --out, then the config's output, then the command default. DEALBID_OUT_DIR
// replaces the directory part only.
fs::path output_path(const CommonArgs& args, const RunConfig& cfg, const char* fallback) {
  fs::path p = !args.out.empty() ? fs::path(args.out) : cfg.output.value_or(fs::path(fallback));
  if (const char* dir = std::getenv("DEALBID_OUT_DIR"); dir != nullptr && *dir != '\0') {
    p = fs::path(dir) / p.filename();
  }
  return p;
}

// Sibling file: results.csv -> results_aggregate.csv.
fs::path sibling(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix + p.extension().string());
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream buf;
  body(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << buf.str();
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

int cmd_replay(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const ClickLog log = cfg.load_log();
  const auto sweep = run_sweep(log, cfg.deal, cfg.required_clicks, cfg.strategies, cfg.models(), cfg.seed,
                               args.threads);
  const fs::path out = output_path(args, cfg, "replay.csv");
  write_file(out, [&](std::ostream& o) { write_replay_csv(o, sweep.replays); });
  write_file(sibling(out, "_aggregate"), [&](std::ostream& o) { write_sweep_csv(o, sweep.rows); });
  if (args.summary) write_sweep_csv(std::cout, sweep.rows);
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const ClickLog log = cfg.load_log();
  const auto sweep = run_sweep(log, cfg.deal, cfg.required_clicks, cfg.strategies, cfg.models(), cfg.seed,
                               args.threads);
  const fs::path out = output_path(args, cfg, "sweep.csv");
  write_file(out, [&](std::ostream& o) { write_sweep_csv(o, sweep.rows); });
  if (args.summary) write_sweep_csv(std::cout, sweep.rows);
  return 0;
}

int cmd_select(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const ClickLog log = cfg.load_log();
  const auto rows = run_selection(log, cfg.selection_max_required_clicks, cfg.optimizer, cfg.models(),
                                  cfg.selection, cfg.seed, args.threads);
  const fs::path out = output_path(args, cfg, "selection.csv");
  write_file(out, [&](std::ostream& o) { write_selection_csv(o, rows); });
  if (args.summary) write_selection_csv(std::cout, rows);
  return 0;
}

int cmd_admit(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const ClickLog log = cfg.load_log();
  const auto res = run_admission(log, cfg.deal, cfg.required_clicks, cfg.strategies, cfg.models(),
                                 cfg.optimizer, cfg.admission_threshold, cfg.seed, args.threads);
  const fs::path out = output_path(args, cfg, "admission.csv");
  write_file(out, [&](std::ostream& o) { write_admission_csv(o, res.rows); });
  write_file(sibling(out, "_decisions"), [&](std::ostream& o) {
    write_admission_decisions_csv(o, log, cfg.required_clicks, res.decisions);
  });
  if (args.summary) write_admission_csv(std::cout, res.rows);
  return 0;
}

int cmd_bench(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const auto rows = run_bench(cfg.bench, cfg.win, cfg.payment, cfg.optimizer, cfg.seed);
  const fs::path out = output_path(args, cfg, "bench.csv");
  write_file(out, [&](std::ostream& o) { write_bench_csv(o, rows); });
  write_file(sibling(out, "_timing"), [&](std::ostream& o) { write_bench_timing_csv(o, rows); });
  if (args.summary) write_bench_timing_csv(std::cout, rows);
  return 0;
}

int cmd_gen_log(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const ClickLog log = generate_synthetic_log(cfg.synthetic);
  const fs::path out = output_path(args, cfg, "click_log.csv");
  write_file(out, [&](std::ostream& o) { write_click_log(o, log); });
  if (args.summary) {
    long long impressions = 0;
    long long clicks = 0;
    for (const auto& ad : log) {
      impressions += ad.impressions();
      clicks += ad.total_clicks();
    }
    std::cout << "ads,impressions,clicks\n" << log.size() << ',' << impressions << ',' << clicks << '\n';
  }
  return 0;
}

int cmd_curve(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const auto rows = objective_curve(cfg.curve, cfg.win, cfg.payment);
  const fs::path out = output_path(args, cfg, "objective_curve.csv");
  write_file(out, [&](std::ostream& o) { write_curve_csv(o, rows); });
  if (args.summary) {
    std::vector<double> exact;
    for (const auto& r : rows) exact.push_back(r.exact);
    std::cout << "bid,expected_profit_exact\n";
    for (auto i : strict_local_maxima(exact)) {
      std::cout << format_number(rows[i].bid) << ',' << format_number(rows[i].exact) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time bid optimization for group-buying deals"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const CommonArgs&);
  };
  const Command commands[] = {
      {"replay", "Replay the click log per ad and strategy", cmd_replay},
      {"sweep", "Mean profit per (required clicks, strategy)", cmd_sweep},
      {"select", "Deal selection within groups of ads", cmd_select},
      {"admit", "Admission control against replayed profit", cmd_admit},
      {"bench", "Time the bid optimizer", cmd_bench},
      {"gen-log", "Write a synthetic click log", cmd_gen_log},
      {"objective-curve", "Expected profit over a bid grid", cmd_curve},
  };
  CommonArgs args;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, args);
    subs.emplace_back(sub, &c);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->run(args);
    }
  } catch (const ClickLogError& e) {
    std::cerr << "error: click log: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
