#include "dealbid/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace dealbid {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

// Rejects keys outside `allowed`; typos should not silently fall back to defaults.
void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(join(path, key), "unknown key");
  }
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

int get_int(const json& j, const std::string& path) {
  const long long v = get_integer(j, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(path, "out of range");
  }
  return static_cast<int>(v);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  throw ConfigError(path, "expected a nonnegative integer");
}

std::vector<int> get_int_list(const json& j, const std::string& path) {
  std::vector<int> out;
  if (j.is_array()) {
    if (j.empty()) throw ConfigError(path, "must not be empty");
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], path + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(get_int(j, path));
  }
  return out;
}

// Runs `fn` and turns std::invalid_argument from validation into a ConfigError at `path`.
template <typename F>
auto at_path(const std::string& path, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

// {"type": "uniform", "lo", "hi", "n_bidders"} and friends. Competitor groups
// give "count" (competitors) instead of "n_bidders".
WinModel parse_win_model(const json& j, const std::string& path, bool competitor_group) {
  require_object(j, path);
  if (!j.contains("type")) throw ConfigError(join(path, "type"), "missing");
  const std::string type = get_string(j["type"], join(path, "type"));
  const char* count_key = competitor_group ? "count" : "n_bidders";
  auto bidders = [&](int fallback) {
    if (!j.contains(count_key)) return fallback;
    const int v = get_int(j[count_key], join(path, count_key));
    return competitor_group ? v + 1 : v;
  };
  auto num = [&](const char* key, double fallback) {
    return j.contains(key) ? get_double(j[key], join(path, key)) : fallback;
  };
  if (type == "uniform") {
    check_keys(j, path, {"type", "lo", "hi", count_key});
    return at_path(path, [&] { return WinModel::uniform(num("lo", 0.0), num("hi", 0.04), bidders(4)); });
  }
  if (type == "gaussian") {
    check_keys(j, path, {"type", "mean", "sigma", count_key});
    return at_path(path, [&] { return WinModel::gaussian(num("mean", 0.02), num("sigma", 0.01), bidders(4)); });
  }
  if (type == "constant") {
    if (competitor_group) throw ConfigError(join(path, "type"), "competitor groups must sample bids");
    check_keys(j, path, {"type", "p"});
    return at_path(path, [&] { return WinModel::constant(num("p", 1.0)); });
  }
  throw ConfigError(join(path, "type"), "unknown win model '" + type + "' (uniform, gaussian, constant)");
}

void parse_optimizer(const json& j, const std::string& path, OptimizerConfig& cfg) {
  check_keys(j, path,
             {"abs_tol", "max_iters", "multi_start_impressions", "starts_per_impression",
              "recompute_interval", "warm_jitter", "tail_mode", "normal_min_variance",
              "printed_theta_form"});
  if (j.contains("abs_tol")) cfg.abs_tol = get_double(j["abs_tol"], join(path, "abs_tol"));
  if (j.contains("max_iters")) cfg.max_iters = get_int(j["max_iters"], join(path, "max_iters"));
  if (j.contains("multi_start_impressions")) {
    cfg.multi_start_impressions = get_int(j["multi_start_impressions"], join(path, "multi_start_impressions"));
  }
  if (j.contains("starts_per_impression")) {
    cfg.starts_per_impression = get_int(j["starts_per_impression"], join(path, "starts_per_impression"));
  }
  if (j.contains("recompute_interval")) {
    cfg.recompute_interval = get_int(j["recompute_interval"], join(path, "recompute_interval"));
  }
  if (j.contains("warm_jitter")) cfg.warm_jitter = get_double(j["warm_jitter"], join(path, "warm_jitter"));
  if (j.contains("tail_mode")) {
    const auto p = join(path, "tail_mode");
    cfg.tail.mode = at_path(p, [&] { return parse_tail_mode(get_string(j["tail_mode"], p)); });
  }
  if (j.contains("normal_min_variance")) {
    cfg.tail.normal_min_variance = get_double(j["normal_min_variance"], join(path, "normal_min_variance"));
  }
  if (j.contains("printed_theta_form")) {
    cfg.tail.printed_theta_form = get_bool(j["printed_theta_form"], join(path, "printed_theta_form"));
  }
  at_path(path, [&] { cfg.validate(); return 0; });
}

StrategySpec parse_strategy(const json& j, const std::string& path, const OptimizerConfig& opt) {
  StrategySpec s;
  s.optimizer = opt;
  if (j.is_string()) {
    s.kind = at_path(path, [&] { return parse_strategy_kind(j.get<std::string>()); });
    return s;
  }
  check_keys(j, path, {"type", "name", "lo", "hi"});
  if (!j.contains("type")) throw ConfigError(join(path, "type"), "missing");
  const auto tp = join(path, "type");
  s.kind = at_path(tp, [&] { return parse_strategy_kind(get_string(j["type"], tp)); });
  if (j.contains("name")) s.name = get_string(j["name"], join(path, "name"));
  if (j.contains("lo") || j.contains("hi")) {
    if (s.kind != StrategyKind::random) throw ConfigError(path, "lo/hi only apply to the random strategy");
    if (j.contains("lo")) s.random_lo = get_double(j["lo"], join(path, "lo"));
    if (j.contains("hi")) s.random_hi = get_double(j["hi"], join(path, "hi"));
    if (s.random_lo && s.random_hi && *s.random_hi < *s.random_lo) throw ConfigError(path, "need lo <= hi");
    if (s.random_lo && *s.random_lo < 0.0) throw ConfigError(join(path, "lo"), "must be >= 0");
  }
  return s;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void parse_log(const json& j, RunConfig& cfg, const std::filesystem::path& base) {
  check_keys(j, "log", {"path", "synthetic"});
  if (j.contains("path") && j.contains("synthetic")) throw ConfigError("log", "give either path or synthetic");
  if (j.contains("path")) cfg.log_path = resolve(base, get_string(j["path"], "log.path"));
  if (j.contains("synthetic")) {
    const json& s = j["synthetic"];
    const std::string p = "log.synthetic";
    check_keys(s, p, {"n_ads", "impressions_min", "impressions_max", "ctr_lo", "ctr_hi", "seed"});
    auto& spec = cfg.synthetic;
    if (s.contains("n_ads")) spec.n_ads = get_int(s["n_ads"], join(p, "n_ads"));
    if (s.contains("impressions_min")) spec.impressions_min = get_int(s["impressions_min"], join(p, "impressions_min"));
    if (s.contains("impressions_max")) spec.impressions_max = get_int(s["impressions_max"], join(p, "impressions_max"));
    if (s.contains("ctr_lo")) spec.ctr_lo = get_double(s["ctr_lo"], join(p, "ctr_lo"));
    if (s.contains("ctr_hi")) spec.ctr_hi = get_double(s["ctr_hi"], join(p, "ctr_hi"));
    if (s.contains("seed")) {
      spec.seed = get_seed(s["seed"], join(p, "seed"));
      cfg.synthetic_seed_pinned = true;
    }
    at_path(p, [&] { spec.validate(); return 0; });
  }
}

void parse_deal(const json& j, RunConfig& cfg) {
  check_keys(j, "deal", {"required_clicks", "pay_per_click", "ctr_override", "expiry"});
  if (j.contains("required_clicks")) {
    cfg.required_clicks = get_int_list(j["required_clicks"], "deal.required_clicks");
    for (int m : cfg.required_clicks) {
      if (m < 0) throw ConfigError("deal.required_clicks", "must be >= 0");
    }
  }
  if (j.contains("pay_per_click")) {
    cfg.deal.pay_per_click = get_double(j["pay_per_click"], "deal.pay_per_click");
    if (cfg.deal.pay_per_click < 0.0) throw ConfigError("deal.pay_per_click", "must be >= 0");
  }
  if (j.contains("ctr_override") && !j["ctr_override"].is_null()) {
    const double v = get_double(j["ctr_override"], "deal.ctr_override");
    if (v < 0.0 || v > 1.0) throw ConfigError("deal.ctr_override", "must lie in [0, 1]");
    cfg.deal.ctr_override = v;
  }
  if (j.contains("expiry") && !j["expiry"].is_null()) {
    const int v = get_int(j["expiry"], "deal.expiry");
    if (v < 1) throw ConfigError("deal.expiry", "must be >= 1");
    cfg.deal.expiry = v;
  }
}

void parse_selection(const json& j, RunConfig& cfg) {
  const std::string p = "selection";
  check_keys(j, p, {"group_size", "total_visits", "pay_per_click", "max_ctr", "max_required_clicks"});
  auto& s = cfg.selection;
  if (j.contains("group_size")) s.group_size = get_int(j["group_size"], join(p, "group_size"));
  if (j.contains("total_visits")) s.total_visits = get_int(j["total_visits"], join(p, "total_visits"));
  if (j.contains("pay_per_click")) s.pay_per_click = get_double(j["pay_per_click"], join(p, "pay_per_click"));
  if (j.contains("max_ctr")) {
    if (j["max_ctr"].is_null()) s.max_ctr.reset();
    else s.max_ctr = get_double(j["max_ctr"], join(p, "max_ctr"));
  }
  if (j.contains("max_required_clicks")) {
    cfg.selection_max_required_clicks = get_int_list(j["max_required_clicks"], join(p, "max_required_clicks"));
  }
  if (s.group_size < 1) throw ConfigError(join(p, "group_size"), "must be >= 1");
  if (s.total_visits < 1) throw ConfigError(join(p, "total_visits"), "must be >= 1");
  if (s.pay_per_click < 0.0) throw ConfigError(join(p, "pay_per_click"), "must be >= 0");
  for (int m : cfg.selection_max_required_clicks) {
    if (m < 0) throw ConfigError(join(p, "max_required_clicks"), "must be >= 0");
  }
}

void parse_bench(const json& j, RunConfig& cfg) {
  const std::string p = "bench";
  check_keys(j, p, {"required_clicks", "modes", "repetitions", "remaining_visits", "clicks", "ctr", "pay_per_click"});
  auto& b = cfg.bench;
  if (j.contains("required_clicks")) b.required_clicks = get_int_list(j["required_clicks"], join(p, "required_clicks"));
  if (j.contains("modes")) {
    const auto mp = join(p, "modes");
    const json& m = j["modes"];
    b.modes.clear();
    if (m.is_string()) {
      b.modes.push_back(at_path(mp, [&] { return parse_tail_mode(m.get<std::string>()); }));
    } else if (m.is_array() && !m.empty()) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto ip = mp + "[" + std::to_string(i) + "]";
        b.modes.push_back(at_path(ip, [&] { return parse_tail_mode(get_string(m[i], ip)); }));
      }
    } else {
      throw ConfigError(mp, "expected a mode name or a non-empty list of them");
    }
  }
  if (j.contains("repetitions")) b.repetitions = get_int(j["repetitions"], join(p, "repetitions"));
  if (j.contains("remaining_visits")) b.remaining_visits = get_int(j["remaining_visits"], join(p, "remaining_visits"));
  if (j.contains("clicks")) b.clicks = get_int(j["clicks"], join(p, "clicks"));
  if (j.contains("ctr")) b.ctr = get_double(j["ctr"], join(p, "ctr"));
  if (j.contains("pay_per_click")) b.pay_per_click = get_double(j["pay_per_click"], join(p, "pay_per_click"));
  if (b.repetitions < 1) throw ConfigError(join(p, "repetitions"), "must be >= 1");
  if (b.remaining_visits < 1) throw ConfigError(join(p, "remaining_visits"), "must be >= 1");
  if (b.clicks < 0) throw ConfigError(join(p, "clicks"), "must be >= 0");
  for (int m : b.required_clicks) {
    if (m < 0) throw ConfigError(join(p, "required_clicks"), "must be >= 0");
  }
  at_path(p, [&] {
    Deal d{0, b.remaining_visits, b.pay_per_click, b.ctr};
    d.validate();
    return 0;
  });
}

// Deal and position for the objective curve, given directly rather than via a log.
void parse_curve(const json& j, RunConfig& cfg) {
  const std::string p = "curve";
  check_keys(j, p, {"required_clicks", "clicks", "remaining_visits", "spend", "pay_per_click", "ctr", "lo", "hi", "points"});
  auto& c = cfg.curve;
  int m = c.deal.required_clicks;
  if (j.contains("required_clicks")) m = get_int(j["required_clicks"], join(p, "required_clicks"));
  if (j.contains("clicks")) c.pos.clicks = get_int(j["clicks"], join(p, "clicks"));
  if (j.contains("remaining_visits")) c.pos.remaining_visits = get_int(j["remaining_visits"], join(p, "remaining_visits"));
  if (j.contains("spend")) c.pos.spend = get_double(j["spend"], join(p, "spend"));
  if (j.contains("pay_per_click")) c.deal.pay_per_click = get_double(j["pay_per_click"], join(p, "pay_per_click"));
  if (j.contains("ctr")) c.deal.ctr = get_double(j["ctr"], join(p, "ctr"));
  if (j.contains("lo")) c.lo = get_double(j["lo"], join(p, "lo"));
  if (j.contains("hi")) c.hi = get_double(j["hi"], join(p, "hi"));
  if (j.contains("points")) c.points = get_int(j["points"], join(p, "points"));
  if (m < 0 || c.pos.clicks < 0) throw ConfigError(p, "required_clicks and clicks must be >= 0");
  if (c.pos.remaining_visits < 0) throw ConfigError(join(p, "remaining_visits"), "must be >= 0");
  if (c.lo < 0.0 || c.hi < c.lo) throw ConfigError(p, "need 0 <= lo <= hi");
  if (c.points < 1) throw ConfigError(join(p, "points"), "must be >= 1");
  c.deal.required_clicks = m;
  c.deal.expiry = std::max(1, c.pos.clicks + c.pos.remaining_visits);
  c.pos.remaining_clicks = std::max(m - c.pos.clicks, 0);
  at_path(p, [&] { c.deal.validate(); return 0; });
}

std::vector<StrategySpec> default_strategies(const OptimizerConfig& opt) {
  std::vector<StrategySpec> out;
  for (auto k : {StrategyKind::real_time, StrategyKind::static_optimal, StrategyKind::adaptive, StrategyKind::random}) {
    StrategySpec s;
    s.kind = k;
    s.optimizer = opt;
    out.push_back(s);
  }
  return out;
}

CurveSpec default_curve() {
  CurveSpec c;
  c.deal = Deal{25, 3020, 15.0, 0.002};
  c.pos = Position{20, 5, 3000, 0.0};
  return c;
}

}  // namespace

ClickLog RunConfig::load_log() const {
  if (log_path) return read_click_log(*log_path);
  return generate_synthetic_log(synthetic);
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "",
             {"seed", "log", "deal", "win_model", "competitors", "payment", "optimizer", "strategies",
              "admission", "selection", "bench", "curve", "output"});

  RunConfig cfg;
  cfg.curve = default_curve();
  if (j.contains("seed")) cfg.set_seed(get_seed(j["seed"], "seed"));
  if (j.contains("log")) parse_log(j["log"], cfg, base_dir);
  if (j.contains("deal")) parse_deal(j["deal"], cfg);
  if (j.contains("win_model")) {
    cfg.win = parse_win_model(j["win_model"], "win_model", false);
  }
  if (j.contains("competitors")) {
    const json& c = j["competitors"];
    if (!c.is_array() || c.empty()) throw ConfigError("competitors", "expected a non-empty list");
    std::vector<WinModel> groups;
    for (std::size_t i = 0; i < c.size(); ++i) {
      groups.push_back(parse_win_model(c[i], "competitors[" + std::to_string(i) + "]", true));
    }
    cfg.competitors = CompetitorField(std::move(groups));
  } else if (!cfg.win.samples_bids()) {
    cfg.competitors = CompetitorField();
  } else {
    cfg.competitors = CompetitorField::matching(cfg.win);
  }
  if (j.contains("payment")) {
    const std::string p = get_string(j["payment"], "payment");
    if (p != "first_price") throw ConfigError("payment", "only first_price is supported");
  }
  if (j.contains("optimizer")) parse_optimizer(j["optimizer"], "optimizer", cfg.optimizer);
  if (j.contains("strategies")) {
    const json& s = j["strategies"];
    if (!s.is_array() || s.empty()) throw ConfigError("strategies", "expected a non-empty list");
    for (std::size_t i = 0; i < s.size(); ++i) {
      cfg.strategies.push_back(parse_strategy(s[i], "strategies[" + std::to_string(i) + "]", cfg.optimizer));
    }
    for (std::size_t a = 0; a < cfg.strategies.size(); ++a) {
      for (std::size_t b = a + 1; b < cfg.strategies.size(); ++b) {
        if (cfg.strategies[a].label() == cfg.strategies[b].label()) {
          throw ConfigError("strategies", "duplicate strategy label '" + cfg.strategies[a].label() + "'");
        }
      }
    }
  } else {
    cfg.strategies = default_strategies(cfg.optimizer);
  }
  if (j.contains("admission")) {
    check_keys(j["admission"], "admission", {"threshold"});
    if (j["admission"].contains("threshold")) {
      cfg.admission_threshold = get_double(j["admission"]["threshold"], "admission.threshold");
    }
  }
  if (j.contains("selection")) parse_selection(j["selection"], cfg);
  if (j.contains("bench")) parse_bench(j["bench"], cfg);
  if (j.contains("curve")) parse_curve(j["curve"], cfg);
  if (j.contains("output")) cfg.output = std::filesystem::path(get_string(j["output"], "output"));
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

}  // namespace dealbid
