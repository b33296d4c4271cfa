#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dealbid {

struct ImpressionRecord {
  std::string ad_id;
  int seq = 0;  // 0-based impression index within the ad
  bool clicked = false;
};

/// All impressions of one ad, in order.
struct AdLog {
  std::string ad_id;
  std::vector<std::uint8_t> clicks;  // 1 if the impression was clicked

  int impressions() const { return static_cast<int>(clicks.size()); }
  int total_clicks() const;
  /// clicks / impressions; 0 for an empty ad.
  double empirical_ctr() const;
};

using ClickLog = std::vector<AdLog>;

/// Malformed click-log input; `line()` is 1-based, 0 when not tied to a line.
class ClickLogError : public std::runtime_error {
 public:
  ClickLogError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Groups records by ad in order of first appearance. seq must strictly
/// increase within an ad; gaps are not allowed either, since a replay walks
/// impressions by index.
ClickLog group_records(const std::vector<ImpressionRecord>& records);

/// Reads the `ad_id,seq,clicked` format (header line required, clicked in {0,1}).
ClickLog read_click_log(std::istream& in);
ClickLog read_click_log(const std::filesystem::path& path);

void write_click_log(std::ostream& out, const ClickLog& log);
void write_click_log(const std::filesystem::path& path, const ClickLog& log);

}  // namespace dealbid
