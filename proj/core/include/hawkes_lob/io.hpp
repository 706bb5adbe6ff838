#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <tuple>
#include <vector>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "hawkes_lob/calibrator.hpp"
#include "hawkes_lob/diagnostics.hpp"
#include "hawkes_lob/lob_events.hpp"
#include "hawkes_lob/model.hpp"
#include "hawkes_lob/simulator.hpp"

namespace hawkes_lob::io {

// EventLog CSV: header `type_index,timestamp_sec`, timestamps to 6 decimals,
// 1-based type indices.
void write_event_log_csv(std::ostream& out, const EventLog& log);
EventLog read_event_log_csv(std::istream& in);

// HawkesModel JSON: R, M, T, knots, baseline_values[type][], alpha/tau
// [target][source][i].
nlohmann::json model_to_json(const HawkesModel& model);
HawkesModel model_from_json(const nlohmann::json& j);

nlohmann::json fit_result_to_json(const FitResult& fit);
FitResult fit_result_from_json(const nlohmann::json& j);

nlohmann::json simulation_metadata(const HawkesModel& model, const SimulationResult& result,
                                   std::uint64_t seed);

void write_rejects_csv(std::ostream& out, const std::vector<RejectRecord>& rejects);
void write_book_trace_csv(std::ostream& out, const std::vector<BookTraceRow>& trace);
void write_session_stats_csv(std::ostream& out, const SessionStats& stats,
                             const std::vector<std::string>& labels);

// TestReport rows: day,target,M,test,statistic,p_value,accept.
void write_test_reports_csv(std::ostream& out,
                            const std::vector<std::tuple<std::string, std::size_t, std::size_t,
                                                         TestReport>>& rows);

// Table rows: M,KS_H0,KS_p,ED_H0,ED_p,LBQ_H0,LBQ_p,KPSS_H0,KPSS_p.
void write_summary_table_csv(std::ostream& out, const std::vector<StabilityTestRow>& rows);

std::string format_double(double v);  // fixed, 6 decimal places

// Write-temp-then-rename so concurrent runs never observe partial files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace hawkes_lob::io
