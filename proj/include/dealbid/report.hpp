#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "dealbid/experiments.hpp"

namespace dealbid {

/// Shortest text that parses back to the same double; "nan", "inf" or "-inf"
/// for non-finite values. Locale-independent.
std::string format_number(double v);

// CSV tables, header row first, '\n' line endings.
void write_replay_csv(std::ostream& out, std::span<const ReplayReport> reps);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_selection_csv(std::ostream& out, std::span<const SelectionRow> rows);
void write_admission_csv(std::ostream& out, std::span<const AdmissionRow> rows);
/// Per-deal admission decisions; `log` supplies the ad ids, decisions are
/// ordered (m, ad) as in AdmissionResult.
void write_admission_decisions_csv(std::ostream& out, const ClickLog& log, std::span<const int> m_values,
                                   std::span<const AdmissionDecision> decisions);
/// Work and result columns only; these are reproducible.
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);
/// Wall-clock columns. These vary from run to run.
void write_bench_timing_csv(std::ostream& out, std::span<const BenchRow> rows);
void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows);

}  // namespace dealbid
