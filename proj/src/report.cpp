#include "dealbid/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace dealbid {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Quotes a field if it would break the row.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_replay_csv(std::ostream& out, std::span<const ReplayReport> reps) {
  out << "ad_id,strategy,required_clicks,impressions,wins,clicks_won,spend,tipped,tip_impression,"
         "realized_profit,pre_tip_profit,mean_bid,optimizations,evaluations\n";
  for (const auto& r : reps) {
    out << field(r.ad_id) << ',' << field(r.strategy) << ',' << r.required_clicks << ',' << r.impressions
        << ',' << r.wins << ',' << r.clicks_won << ',' << format_number(r.spend) << ','
        << (r.tipped ? 1 : 0) << ',' << r.tip_impression << ',' << format_number(r.realized_profit) << ','
        << format_number(r.pre_tip_profit) << ',' << format_number(r.mean_bid) << ',' << r.optimizations
        << ',' << r.evaluations << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "required_clicks,strategy,ads,mean_profit,mean_pre_tip_profit,tipped_fraction,mean_spend,"
         "mean_wins,mean_clicks\n";
  for (const auto& r : rows) {
    out << r.required_clicks << ',' << field(r.strategy) << ',' << r.ads << ','
        << format_number(r.mean_profit) << ',' << format_number(r.mean_pre_tip_profit) << ','
        << format_number(r.tipped_fraction) << ',' << format_number(r.mean_spend) << ','
        << format_number(r.mean_wins) << ',' << format_number(r.mean_clicks) << '\n';
  }
}

void write_selection_csv(std::ostream& out, std::span<const SelectionRow> rows) {
  out << "max_required_clicks,selector,groups,mean_group_profit,mean_deal_profit,tipped_fraction\n";
  for (const auto& r : rows) {
    out << r.max_required_clicks << ',' << field(r.selector) << ',' << r.groups << ','
        << format_number(r.mean_group_profit) << ',' << format_number(r.mean_deal_profit) << ','
        << format_number(r.tipped_fraction) << '\n';
  }
}

void write_admission_csv(std::ostream& out, std::span<const AdmissionRow> rows) {
  out << "required_clicks,strategy,deals,admitted,mean_profit_all,mean_profit_admitted,"
         "total_profit_all,total_profit_admitted\n";
  for (const auto& r : rows) {
    out << r.required_clicks << ',' << field(r.strategy) << ',' << r.deals << ',' << r.admitted << ','
        << format_number(r.mean_profit_all) << ',' << format_number(r.mean_profit_admitted) << ','
        << format_number(r.total_profit_all) << ',' << format_number(r.total_profit_admitted) << '\n';
  }
}

void write_admission_decisions_csv(std::ostream& out, const ClickLog& log, std::span<const int> m_values,
                                   std::span<const AdmissionDecision> decisions) {
  out << "required_clicks,ad_id,bid,expected_profit,admitted\n";
  std::size_t k = 0;
  for (int m : m_values) {
    for (const auto& ad : log) {
      if (k >= decisions.size()) return;
      const auto& d = decisions[k++];
      out << m << ',' << field(ad.ad_id) << ',' << format_number(d.bid) << ','
          << format_number(d.expected_profit) << ',' << (d.admitted ? 1 : 0) << '\n';
    }
  }
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "required_clicks,mode,repetitions,mean_evaluations,bid,objective\n";
  for (const auto& r : rows) {
    out << r.required_clicks << ',' << to_string(r.mode) << ',' << r.repetitions << ','
        << format_number(r.mean_evaluations) << ',' << format_number(r.bid) << ','
        << format_number(r.objective) << '\n';
  }
}

void write_bench_timing_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "required_clicks,mode,samples,mean_seconds,p99_seconds,stderr_seconds\n";
  for (const auto& r : rows) {
    out << r.required_clicks << ',' << to_string(r.mode) << ',' << r.time.samples << ','
        << format_number(r.time.mean_seconds) << ',' << format_number(r.time.p99_seconds) << ','
        << format_number(r.time.stderr_seconds) << '\n';
  }
}

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
  out << "bid,expected_profit_exact,expected_profit_tail,expected_profit_normal,"
         "expected_profit_normal_printed\n";
  for (const auto& r : rows) {
    out << format_number(r.bid) << ',' << format_number(r.exact) << ',' << format_number(r.tail) << ','
        << format_number(r.normal) << ',' << format_number(r.normal_printed) << '\n';
  }
}

}  // namespace dealbid
