#include "dealbid/click_log.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace dealbid {

int AdLog::total_clicks() const {
  int n = 0;
  for (auto c : clicks) n += c;
  return n;
}

double AdLog::empirical_ctr() const {
  return clicks.empty() ? 0.0 : static_cast<double>(total_clicks()) / impressions();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, const char* field, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ClickLogError(std::string("bad ") + field + " '" + std::string(s) + "'", line);
  }
  return v;
}

// Appends one record to `log`, checking seq continuity.
void append(ClickLog& log, std::unordered_map<std::string, std::size_t>& index,
            const ImpressionRecord& rec, int line) {
  auto [it, inserted] = index.try_emplace(rec.ad_id, log.size());
  if (inserted) log.push_back(AdLog{rec.ad_id, {}});
  AdLog& ad = log[it->second];
  if (rec.seq != ad.impressions()) {
    throw ClickLogError("ad '" + rec.ad_id + "': expected seq " +
                            std::to_string(ad.impressions()) + ", got " + std::to_string(rec.seq),
                        line);
  }
  ad.clicks.push_back(rec.clicked ? 1 : 0);
}

}  // namespace

ClickLog group_records(const std::vector<ImpressionRecord>& records) {
  ClickLog log;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : records) append(log, index, r, 0);
  return log;
}

ClickLog read_click_log(std::istream& in) {
  ClickLog log;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty()) continue;
    if (!header) {
      if (s != "ad_id,seq,clicked") throw ClickLogError("expected header 'ad_id,seq,clicked'", lineno);
      header = true;
      continue;
    }
    const auto c1 = s.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
    if (c2 == std::string_view::npos || s.find(',', c2 + 1) != std::string_view::npos) {
      throw ClickLogError("expected 3 comma-separated fields", lineno);
    }
    ImpressionRecord rec;
    rec.ad_id = std::string(trim(s.substr(0, c1)));
    if (rec.ad_id.empty()) throw ClickLogError("empty ad_id", lineno);
    rec.seq = parse_int(trim(s.substr(c1 + 1, c2 - c1 - 1)), "seq", lineno);
    const int clicked = parse_int(trim(s.substr(c2 + 1)), "clicked", lineno);
    if (clicked != 0 && clicked != 1) throw ClickLogError("clicked must be 0 or 1", lineno);
    rec.clicked = clicked == 1;
    append(log, index, rec, lineno);
  }
  if (!header) throw ClickLogError("missing header line", 0);
  return log;
}

ClickLog read_click_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open click log " + path.string());
  return read_click_log(in);
}

void write_click_log(std::ostream& out, const ClickLog& log) {
  out << "ad_id,seq,clicked\n";
  for (const auto& ad : log) {
    for (int i = 0; i < ad.impressions(); ++i) {
      out << ad.ad_id << ',' << i << ',' << static_cast<int>(ad.clicks[static_cast<std::size_t>(i)])
          << '\n';
    }
  }
}

void write_click_log(const std::filesystem::path& path, const ClickLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write click log " + path.string());
  write_click_log(out, log);
}

}  // namespace dealbid
