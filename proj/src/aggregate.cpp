#include "prodrank/aggregate.hpp"

#include <algorithm>

#include "prodrank/errors.hpp"

namespace prodrank {

std::optional<double> NationalAverages::mean(const std::string& sds_code,
                                             IndicatorKind kind) const {
  auto it = by_sds.find(sds_code);
  if (it == by_sds.end()) return std::nullopt;
  return it->second[static_cast<std::size_t>(kind)];
}

NationalAverages national_averages(const SdsIndicatorTable& table,
                                   const std::set<UniversitySds>& subset) {
  struct Acc {
    std::array<double, 6> sum = {};
    int n = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& row : table) {
    if (!subset.count({row.university_id, row.sds_code})) continue;
    auto& a = acc[row.sds_code];
    a.n += 1;
    for (auto kind : kAllIndicators) {
      a.sum[static_cast<std::size_t>(kind)] += row.values.get(kind);
    }
  }

  NationalAverages out;
  std::set<std::string> seen;
  for (const auto& row : table) {
    if (!seen.insert(row.sds_code).second) continue;
    if (!acc.count(row.sds_code)) {
      out.warnings.push_back("no universities in the averaging subset for " +
                             row.sds_code + "; its means are unavailable");
    }
  }
  for (const auto& [sds, a] : acc) {
    auto& slots = out.by_sds[sds];
    for (auto kind : kAllIndicators) {
      const double mean = a.sum[static_cast<std::size_t>(kind)] / a.n;
      if (mean > 0.0) {
        slots[static_cast<std::size_t>(kind)] = mean;
      } else {
        out.warnings.push_back(std::string("national mean of ") +
                               indicator_name(kind) + " in " + sds +
                               " is not positive; the field scores zero "
                               "everywhere");
      }
    }
  }
  return out;
}

NationalAverages national_averages_by_basis(const SdsIndicatorTable& table,
                                            const Corpus& corpus,
                                            AverageSubset mode) {
  if (mode == AverageSubset::AllWithStaff) {
    std::set<UniversitySds> all;
    for (const auto& row : table) {
      all.insert({row.university_id, row.sds_code});
    }
    return national_averages(table, all);
  }

  NationalAverages output_means =
      national_averages(table, non_nil_subset(corpus, Basis::Output));
  NationalAverages impact_means =
      national_averages(table, non_nil_subset(corpus, Basis::Impact));

  NationalAverages merged;
  std::set<std::string> seen_warnings;
  for (auto* source : {&output_means, &impact_means}) {
    for (auto& w : source->warnings) {
      if (seen_warnings.insert(w).second) merged.warnings.push_back(std::move(w));
    }
  }
  std::set<std::string> sds_codes;
  for (const auto& [sds, slots] : output_means.by_sds) sds_codes.insert(sds);
  for (const auto& [sds, slots] : impact_means.by_sds) sds_codes.insert(sds);
  for (const auto& sds : sds_codes) {
    auto& slots = merged.by_sds[sds];
    for (auto kind : kAllIndicators) {
      const NationalAverages& source =
          indicator_uses_impact(kind) ? impact_means : output_means;
      slots[static_cast<std::size_t>(kind)] = source.mean(sds, kind);
    }
  }
  return merged;
}

IndicatorSet uda_indicator(const Corpus& corpus, const SdsIndicatorTable& table,
                           const NationalAverages& averages,
                           const std::string& university_id,
                           const std::string& uda_code) {
  if (!corpus.taxonomy.has_uda(uda_code)) {
    fail(ErrorKind::Lookup, "unknown discipline code '" + uda_code + "'");
  }

  std::vector<const SdsIndicatorRow*> rows;
  int rs_total = 0;
  for (const auto& row : table) {
    if (row.university_id != university_id) continue;
    const std::string* uda = corpus.taxonomy.uda_of(row.sds_code);
    if (!uda || *uda != uda_code) continue;
    rows.push_back(&row);
    rs_total += row.values.rs;
  }

  IndicatorSet set;
  set.rs = rs_total;
  if (rs_total == 0) return set;

  for (auto kind : kAllIndicators) {
    double total = 0.0;
    for (const SdsIndicatorRow* row : rows) {
      const double value = row->values.get(kind);
      if (value == 0.0) continue;  // no mean needed for a zero score
      const auto mean = averages.mean(row->sds_code, kind);
      if (!mean) {
        fail(ErrorKind::Aggregation,
             std::string("cannot scale ") + indicator_name(kind) + " for " +
                 university_id + "/" + row->sds_code +
                 ": no national mean available");
      }
      total += (value / *mean) *
               (static_cast<double>(row->values.rs) / rs_total);
    }
    set.set(kind, total);
  }
  return set;
}

UdaIndicatorTable compute_uda_table(const Corpus& corpus,
                                    const SdsIndicatorTable& table,
                                    const NationalAverages& averages) {
  std::map<std::pair<std::string, std::string>, int> pairs;
  for (const auto& row : table) {
    const std::string* uda = corpus.taxonomy.uda_of(row.sds_code);
    if (uda && row.values.rs > 0) pairs[{row.university_id, *uda}] += 1;
  }

  UdaIndicatorTable out;
  out.reserve(pairs.size());
  for (const auto& [key, field_count] : pairs) {
    UdaIndicatorRow row;
    row.university_id = key.first;
    row.uda_code = key.second;
    row.values = uda_indicator(corpus, table, averages, key.first, key.second);
    row.n_sds = field_count;
    if (row.values.rs == 0) continue;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace prodrank
