#pragma once

#include <string>
#include <vector>

#include "prodrank/corpus.hpp"
#include "prodrank/pipeline.hpp"

namespace prodrank {

// Stamp block written at the top of every emitted file so a result can be
// traced back to the exact inputs and settings that produced it.
struct ReportMeta {
  std::string config_stamp;
  std::string corpus_digest;
  std::string census_date;
};

ReportMeta report_meta(const AnalysisRun& run);

std::string render_sds_indicators_csv(const std::vector<RankedSdsRow>& rows,
                                      const ReportMeta& meta);
std::string render_uda_indicators_csv(const std::vector<RankedUdaRow>& rows,
                                      const ReportMeta& meta);
std::string render_sds_indicators_json(const std::vector<RankedSdsRow>& rows,
                                       const ReportMeta& meta);
std::string render_uda_indicators_json(const std::vector<RankedUdaRow>& rows,
                                       const ReportMeta& meta);

std::string render_compare_csv(const PairComparison& comparison,
                               const ReportMeta& meta);
std::string render_compare_json(const PairComparison& comparison,
                                const ReportMeta& meta);

std::string render_summary_json(const ComparisonBattery& battery,
                                const ReportMeta& meta);

std::string render_validation_json(const std::vector<Violation>& violations);

std::string render_exclusions_text(const ExclusionReport& report);

// Writes the whole string, creating parent directories. Throws Io.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace prodrank
