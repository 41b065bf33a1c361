#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prodrank/aggregate.hpp"
#include "prodrank/compare.hpp"
#include "prodrank/config.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/indicators.hpp"

namespace prodrank {

enum class Level { Sds, Uda };

const char* level_name(Level level);

// Indicator row plus the university's percentile within its field (or
// discipline). An impact percentile is empty when the university has no
// cited publications in the scope, an output percentile when it has no
// publications at all (such rows only appear at discipline level, where a
// university can hold staff in a field without output).
template <typename RowT>
struct RankedRow {
  RowT row;
  std::array<std::optional<double>, 6> percentile;
};

using RankedSdsRow = RankedRow<SdsIndicatorRow>;
using RankedUdaRow = RankedRow<UdaIndicatorRow>;

// Everything one config computes, shared by the emitters and comparisons.
struct AnalysisRun {
  Corpus corpus;  // after exclusions
  ExclusionReport exclusions;
  std::string input_digest;
  std::string config_stamp;
  std::string census_date;
  SdsIndicatorTable sds_table;
  UdaIndicatorTable uda_table;
  NationalAverages averages;
  std::set<UniversitySds> sds_output;
  std::set<UniversitySds> sds_impact;
  std::set<std::pair<std::string, std::string>> uda_output;
  std::set<std::pair<std::string, std::string>> uda_impact;
  std::vector<RankedSdsRow> ranked_sds;  // output subset, ranked per field
  std::vector<RankedUdaRow> ranked_uda;
};

// Throws EmptyAnalysis when the exclusions leave nothing to analyse.
AnalysisRun run_analysis(const Corpus& input, const RunConfig& config);

struct PairSpec {
  IndicatorKind first;
  IndicatorKind second;
};

// "wfo:fo,wfi:i" style. Throws Params on unknown indicator names.
// A self-pair is allowed and compares a ranking with itself.
std::vector<PairSpec> parse_pairs(const std::string& text);

// The standard battery: each impact indicator against its siblings, and
// the output analogues.
inline constexpr const char* kDefaultPairs =
    "wfi:i,wfi:fi,fi:i,wfo:o,wfo:fo,fo:o";

struct PairScopeRow {
  std::string scope;
  int n = 0;
  double rho = 0.0;
  QuartileShiftStats shifts;
  double churn = 0.0;  // share of the first quartile that drops out
};

struct PairComparison {
  PairSpec spec;
  std::vector<PairScopeRow> rows;  // scopes that could be compared, sorted
  CorrelationSummary summary;
  // Pooled over every compared scope.
  int pooled_n = 0;
  int pooled_shifted = 0;
  int pooled_total_abs_shift = 0;
  int pooled_max_abs_shift = 0;
  int pooled_two_or_more = 0;
};

struct ComparisonBattery {
  Level level = Level::Sds;
  std::vector<PairComparison> pairs;
  // (scope, university) combos compared in at least one pair, and how many
  // of them changed quartile in at least one pair.
  int scoped_universities = 0;
  int shifted_any = 0;
};

ComparisonBattery run_comparisons(const AnalysisRun& run, Level level,
                                  const std::vector<PairSpec>& pairs);

}  // namespace prodrank
