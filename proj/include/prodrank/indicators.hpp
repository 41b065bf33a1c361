#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prodrank/corpus.hpp"
#include "prodrank/credit.hpp"

namespace prodrank {

enum class IndicatorKind { Wfo, Fo, O, Wfi, Fi, I };

inline constexpr std::array<IndicatorKind, 6> kAllIndicators = {
    IndicatorKind::Wfo, IndicatorKind::Fo, IndicatorKind::O,
    IndicatorKind::Wfi, IndicatorKind::Fi, IndicatorKind::I};

const char* indicator_name(IndicatorKind kind);
bool indicator_uses_impact(IndicatorKind kind);

// Median citation counts over cited publications (citations >= 1), keyed by
// publication year and subject category. Years never fall back across each
// other; a category missing in its year falls back to the year-wide median.
struct CitationBaseline {
  std::map<std::pair<int, std::string>, double> cell_median;
  std::map<int, double> year_median;

  // Median for (year, category), with year-wide fallback. Throws Baseline
  // when the year itself is unknown.
  double cell(int year, const std::string& category) const;

  // Mean of the per-category medians for this publication.
  double expected(const PublicationRecord& pub) const;
};

// Throws Baseline when some publication year has no cited publications at
// all, since scores in that year would be undefined.
CitationBaseline build_citation_baseline(const Corpus& corpus);

// citations / expected citations. Zero for uncited publications.
double normalized_citation_score(const PublicationRecord& pub,
                                 const CitationBaseline& baseline);

enum class RsDenominator { FullRoster, PublishingOnly };
enum class FullCounting { PerInstitution, PerStaff };

struct IndicatorOptions {
  RsDenominator rs_denominator = RsDenominator::FullRoster;
  FullCounting full_counting = FullCounting::PerInstitution;
};

// The six per-staff productivity values for one university and field.
// Output basis counts publications, impact basis counts field-normalized
// citations; weighted, fractional, and full counting differ in how a
// publication is shared across its byline.
struct IndicatorSet {
  double wfo = 0.0;
  double fo = 0.0;
  double o = 0.0;
  double wfi = 0.0;
  double fi = 0.0;
  double i = 0.0;
  int rs = 0;  // staff denominator the values were divided by

  double get(IndicatorKind kind) const;
  void set(IndicatorKind kind, double value);
};

IndicatorSet sds_indicator(const Corpus& corpus, const StaffLookup& lookup,
                           const CitationBaseline& baseline,
                           const CreditScheme& scheme,
                           const std::string& university_id,
                           const std::string& sds_code,
                           const IndicatorOptions& options = {});

struct SdsIndicatorRow {
  std::string university_id;
  std::string sds_code;
  IndicatorSet values;
};

// One row per (university, field) cell with at least one roster member,
// sorted by university then field. Single pass over the publications.
using SdsIndicatorTable = std::vector<SdsIndicatorRow>;

SdsIndicatorTable compute_sds_table(const Corpus& corpus,
                                    const CitationBaseline& baseline,
                                    const CreditScheme& scheme,
                                    const IndicatorOptions& options = {});

// Maps values (higher is better) onto 0..100 percentile ranks; the best
// value maps to 100, the worst to 0, ties share the mean rank of their
// block. A single value maps to 100.
std::vector<double> percentile_scale(const std::vector<double>& values);

}  // namespace prodrank
