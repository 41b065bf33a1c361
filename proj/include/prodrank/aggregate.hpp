#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prodrank/corpus.hpp"
#include "prodrank/indicators.hpp"

namespace prodrank {

// Per-field national means of the six indicators. A slot is empty when the
// field has no rows in the averaging subset or when the mean is not
// positive; ratios against such a mean are undefined, but every university
// score there is zero anyway, so nothing is lost.
struct NationalAverages {
  std::map<std::string, std::array<std::optional<double>, 6>> by_sds;
  std::vector<std::string> warnings;

  std::optional<double> mean(const std::string& sds_code,
                             IndicatorKind kind) const;
};

// Means over the rows whose (university, field) lies in the subset.
NationalAverages national_averages(const SdsIndicatorTable& table,
                                   const std::set<UniversitySds>& subset);

enum class AverageSubset { NonNil, AllWithStaff };

// Output-basis indicators averaged over the output subset, impact-basis
// over the impact subset; or all six over every staffed cell.
NationalAverages national_averages_by_basis(const SdsIndicatorTable& table,
                                            const Corpus& corpus,
                                            AverageSubset mode);

// Discipline-level score: each field contributes its score relative to the
// national mean, weighted by its share of the university's staff in the
// discipline. rs carries the summed staff count.
IndicatorSet uda_indicator(const Corpus& corpus, const SdsIndicatorTable& table,
                           const NationalAverages& averages,
                           const std::string& university_id,
                           const std::string& uda_code);

struct UdaIndicatorRow {
  std::string university_id;
  std::string uda_code;
  IndicatorSet values;
  // Number of the university's staffed fields inside the discipline.
  int n_sds = 0;
};

using UdaIndicatorTable = std::vector<UdaIndicatorRow>;

// One row per (university, discipline) with staff, sorted by university
// then discipline.
UdaIndicatorTable compute_uda_table(const Corpus& corpus,
                                    const SdsIndicatorTable& table,
                                    const NationalAverages& averages);

}  // namespace prodrank
