#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dealbid/experiments.hpp"

namespace dealbid {

/// Invalid run configuration. `path()` names the offending key, e.g.
/// "optimizer.max_iters".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Everything a CLI command needs. Every block is optional in the file and
/// falls back to the defaults below; unknown keys are rejected.
struct RunConfig {
  std::uint64_t seed = 0;

  // Click log: a file, or a synthetic spec when no path is given.
  std::optional<std::filesystem::path> log_path;
  SyntheticLogSpec synthetic{50, 10000, 10000, 0.005, 0.02, 0};

  DealTemplate deal;
  std::vector<int> required_clicks = {0};

  WinModel win = WinModel::uniform(0.0, 0.04, 4);
  CompetitorField competitors = CompetitorField::matching(WinModel::uniform(0.0, 0.04, 4));
  PaymentModel payment = PaymentModel::first_price();

  OptimizerConfig optimizer;
  std::vector<StrategySpec> strategies;  // defaults to rt + static + adaptive + random

  double admission_threshold = 0.0;

  SelectionSettings selection;
  std::vector<int> selection_max_required_clicks = {0, 50, 100, 150, 200};

  BenchSettings bench;
  CurveSpec curve;

  std::optional<std::filesystem::path> output;

  // The synthetic log follows `seed` unless the file pins its own.
  bool synthetic_seed_pinned = false;

  /// Replaces the run seed, carrying it into the synthetic spec when unpinned.
  void set_seed(std::uint64_t s) {
    seed = s;
    if (!synthetic_seed_pinned) synthetic.seed = s;
  }

  MarketModels models() const { return {win, competitors, payment}; }
  /// Reads log_path, or generates the synthetic log.
  ClickLog load_log() const;
};

/// Parses JSON text. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace dealbid
