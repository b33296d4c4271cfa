#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dealbid/config.hpp"
#include "dealbid/report.hpp"

namespace py = pybind11;
using namespace dealbid;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Real-time bid optimization for group-buying deals";

  py::enum_<TailMode>(m, "TailMode")
      .value("exact", TailMode::exact)
      .value("tail", TailMode::tail)
      .value("normal", TailMode::normal)
      .value("automatic", TailMode::automatic);

  py::class_<TailSettings>(m, "TailSettings")
      .def(py::init<>())
      .def(py::init([](TailMode mode, double normal_min_variance, bool printed_theta_form) {
             return TailSettings{mode, normal_min_variance, printed_theta_form};
           }),
           py::arg("mode") = TailMode::automatic, py::arg("normal_min_variance") = kDefaultNormalMinVariance,
           py::arg("printed_theta_form") = false)
      .def_readwrite("mode", &TailSettings::mode)
      .def_readwrite("normal_min_variance", &TailSettings::normal_min_variance)
      .def_readwrite("printed_theta_form", &TailSettings::printed_theta_form);

  m.def("binomial_pmf", &binomial_pmf, py::arg("k"), py::arg("n"), py::arg("p"));
  m.def("phi", py::overload_cast<int, int, double, TailMode>(&phi), py::arg("r"), py::arg("u"), py::arg("p"),
        py::arg("mode") = TailMode::automatic);
  m.def("theta", py::overload_cast<int, int, double, TailMode>(&theta), py::arg("r"), py::arg("u"),
        py::arg("p"), py::arg("mode") = TailMode::automatic);

  py::register_exception<InvalidModel>(m, "InvalidModel", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ClickLogError>(m, "ClickLogError", PyExc_ValueError);

  py::class_<BidBounds>(m, "BidBounds")
      .def_readonly("lo", &BidBounds::lo)
      .def_readonly("hi", &BidBounds::hi)
      .def("__repr__", [](const BidBounds& b) {
        return "BidBounds(" + format_number(b.lo) + ", " + format_number(b.hi) + ")";
      });

  py::class_<WinModel>(m, "WinModel")
      .def_static("uniform", &WinModel::uniform, py::arg("lo"), py::arg("hi"), py::arg("n_bidders"))
      .def_static("gaussian", &WinModel::gaussian, py::arg("mean"), py::arg("sigma"), py::arg("n_bidders"))
      .def_static("constant", &WinModel::constant, py::arg("p"))
      .def("win_probability", &WinModel::win_probability, py::arg("bid"))
      .def("bounds", &WinModel::bounds)
      .def("competitor_count", &WinModel::competitor_count)
      .def("__repr__", &WinModel::describe);

  py::class_<PaymentModel>(m, "PaymentModel")
      .def_static("first_price", &PaymentModel::first_price)
      .def("payment", &PaymentModel::payment, py::arg("bid"));

  py::class_<Deal>(m, "Deal")
      .def(py::init([](int required_clicks, int expiry, double pay_per_click, double ctr) {
             Deal d{required_clicks, expiry, pay_per_click, ctr};
             d.validate();
             return d;
           }),
           py::arg("required_clicks"), py::arg("expiry"), py::arg("pay_per_click"), py::arg("ctr"))
      .def_readwrite("required_clicks", &Deal::required_clicks)
      .def_readwrite("expiry", &Deal::expiry)
      .def_readwrite("pay_per_click", &Deal::pay_per_click)
      .def_readwrite("ctr", &Deal::ctr);

  py::class_<Position>(m, "Position")
      .def(py::init([](int clicks, int remaining_clicks, int remaining_visits, double spend) {
             return Position{clicks, remaining_clicks, remaining_visits, spend};
           }),
           py::arg("clicks") = 0, py::arg("remaining_clicks") = 0, py::arg("remaining_visits") = 0,
           py::arg("spend") = 0.0)
      .def_static("fresh", &Position::fresh, py::arg("deal"), py::arg("visits"))
      .def_readwrite("clicks", &Position::clicks)
      .def_readwrite("remaining_clicks", &Position::remaining_clicks)
      .def_readwrite("remaining_visits", &Position::remaining_visits)
      .def_readwrite("spend", &Position::spend);

  py::class_<DealState>(m, "DealState")
      .def(py::init<>())
      .def_readwrite("visits", &DealState::visits)
      .def_readwrite("clicks", &DealState::clicks)
      .def_readwrite("spend", &DealState::spend)
      .def_readonly("cached_bid", &DealState::cached_bid)
      .def_readonly("opportunities_since_recompute", &DealState::opportunities_since_recompute)
      .def_readonly("starts_done", &DealState::starts_done)
      .def("position", &DealState::position, py::arg("deal"))
      .def("tipped", &DealState::tipped, py::arg("deal"))
      .def("expired", &DealState::expired, py::arg("deal"))
      .def("record", &DealState::record, py::arg("won"), py::arg("clicked"), py::arg("payment"));

  const auto first_price = PaymentModel::first_price();
  m.def("future_profit", &future_profit, py::arg("deal"), py::arg("pos"), py::arg("bid"), py::arg("win"),
        py::arg("pay") = first_price, py::arg("tail") = TailSettings{});
  m.def("expected_profit", &expected_profit, py::arg("deal"), py::arg("pos"), py::arg("bid"), py::arg("win"),
        py::arg("pay") = first_price, py::arg("tail") = TailSettings{});
  m.def("marginal_value", &marginal_value, py::arg("deal"), py::arg("pos"), py::arg("bid"), py::arg("win"),
        py::arg("tail") = TailSettings{});
  m.def("static_optimal_bid", &static_optimal_bid, py::arg("deal"), py::arg("win"),
        py::arg("pay") = first_price);

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("abs_tol", &OptimizerConfig::abs_tol)
      .def_readwrite("max_iters", &OptimizerConfig::max_iters)
      .def_readwrite("multi_start_impressions", &OptimizerConfig::multi_start_impressions)
      .def_readwrite("starts_per_impression", &OptimizerConfig::starts_per_impression)
      .def_readwrite("recompute_interval", &OptimizerConfig::recompute_interval)
      .def_readwrite("warm_jitter", &OptimizerConfig::warm_jitter)
      .def_readwrite("tail", &OptimizerConfig::tail);

  py::class_<BidDecision>(m, "BidDecision")
      .def_readonly("bid", &BidDecision::bid)
      .def_property_readonly("path", [](const BidDecision& d) { return std::string(to_string(d.path)); })
      .def_readonly("evaluations", &BidDecision::evaluations)
      .def_readonly("objective", &BidDecision::objective);

  m.def(
      "next_bid",
      [](const Deal& deal, DealState& state, const WinModel& win, const OptimizerConfig& cfg,
         std::uint64_t seed) {
        Rng rng(seed);
        return next_bid(deal, state, win, PaymentModel::first_price(), cfg, rng);
      },
      py::arg("deal"), py::arg("state"), py::arg("win"), py::arg("cfg") = OptimizerConfig{},
      py::arg("seed") = 0, "One bid decision; mutates `state`'s optimizer bookkeeping.");
  m.def(
      "optimize_bid",
      [](const Deal& deal, const Position& pos, const WinModel& win, const OptimizerConfig& cfg,
         std::uint64_t seed) {
        Rng rng(seed);
        const auto r = optimize_bid(deal, pos, win, PaymentModel::first_price(), cfg, rng);
        return py::make_tuple(r.bid, r.value);
      },
      py::arg("deal"), py::arg("pos"), py::arg("win"), py::arg("cfg") = OptimizerConfig{},
      py::arg("seed") = 0, "Returns (bid, future_profit at bid).");
  m.def(
      "assess_admission",
      [](const Deal& deal, const WinModel& win, double threshold, const OptimizerConfig& cfg,
         std::uint64_t seed) {
        Rng rng(seed);
        const auto d = assess_admission(deal, deal.expiry, win, PaymentModel::first_price(), cfg, threshold, rng);
        return py::make_tuple(d.admitted, d.bid, d.expected_profit);
      },
      py::arg("deal"), py::arg("win"), py::arg("threshold") = 0.0, py::arg("cfg") = OptimizerConfig{},
      py::arg("seed") = 0, "Returns (admitted, bid, expected_profit).");

  py::class_<AdLog>(m, "AdLog")
      .def(py::init([](std::string ad_id, const std::vector<int>& clicks) {
             AdLog ad{std::move(ad_id), {}};
             for (int c : clicks) {
               if (c != 0 && c != 1) throw py::value_error("clicks must be 0 or 1");
               ad.clicks.push_back(static_cast<std::uint8_t>(c));
             }
             return ad;
           }),
           py::arg("ad_id"), py::arg("clicks"))
      .def_readonly("ad_id", &AdLog::ad_id)
      .def_property_readonly("clicks", [](const AdLog& a) { return std::vector<int>(a.clicks.begin(), a.clicks.end()); })
      .def("impressions", &AdLog::impressions)
      .def("total_clicks", &AdLog::total_clicks)
      .def("empirical_ctr", &AdLog::empirical_ctr);

  m.def(
      "generate_synthetic_log",
      [](int n_ads, int impressions_min, int impressions_max, double ctr_lo, double ctr_hi, std::uint64_t seed) {
        return generate_synthetic_log({n_ads, impressions_min, impressions_max, ctr_lo, ctr_hi, seed});
      },
      py::arg("n_ads"), py::arg("impressions_min"), py::arg("impressions_max"), py::arg("ctr_lo"),
      py::arg("ctr_hi"), py::arg("seed") = 0);
  m.def("read_click_log", py::overload_cast<const std::filesystem::path&>(&read_click_log), py::arg("path"));
  m.def("write_click_log",
        py::overload_cast<const std::filesystem::path&, const ClickLog&>(&write_click_log), py::arg("path"),
        py::arg("log"));

  m.def(
      "sweep",
      [](const ClickLog& log, const std::vector<int>& m_values, const std::vector<std::string>& strategies,
         const WinModel& win, double pay_per_click, std::uint64_t seed) {
        std::vector<StrategySpec> specs;
        for (const auto& s : strategies) {
          StrategySpec spec;
          spec.kind = parse_strategy_kind(s);
          specs.push_back(spec);
        }
        DealTemplate tmpl;
        tmpl.pay_per_click = pay_per_click;
        const auto res = run_sweep(log, tmpl, m_values, specs, MarketModels::matching(win), seed);
        py::list rows;
        for (const auto& r : res.rows) {
          py::dict d;
          d["required_clicks"] = r.required_clicks;
          d["strategy"] = r.strategy;
          d["ads"] = r.ads;
          d["mean_profit"] = r.mean_profit;
          d["mean_pre_tip_profit"] = r.mean_pre_tip_profit;
          d["tipped_fraction"] = r.tipped_fraction;
          d["mean_spend"] = r.mean_spend;
          rows.append(d);
        }
        return rows;
      },
      py::arg("log"), py::arg("m_values"), py::arg("strategies"), py::arg("win"), py::arg("pay_per_click") = 10.0,
      py::arg("seed") = 0, "Paired replay of every ad; one dict per (m, strategy).");

  m.def(
      "objective_curve",
      [](const Deal& deal, const Position& pos, const WinModel& win, double lo, double hi, int points) {
        CurveSpec spec{deal, pos, lo, hi, points};
        py::list out;
        for (const auto& r : objective_curve(spec, win, PaymentModel::first_price())) {
          out.append(py::make_tuple(r.bid, r.exact, r.tail, r.normal));
        }
        return out;
      },
      py::arg("deal"), py::arg("pos"), py::arg("win"), py::arg("lo") = 0.0, py::arg("hi") = 0.1,
      py::arg("points") = 1000, "List of (bid, exact, tail, normal) expected-profit tuples.");
}
