#include "prodrank/pipeline.hpp"

#include <algorithm>
#include <map>

#include "prodrank/csv.hpp"
#include "prodrank/errors.hpp"

namespace prodrank {

const char* level_name(Level level) {
  return level == Level::Sds ? "sds" : "uda";
}

namespace {

// Percentiles for every (scope, university) in the subset, one ranking per
// scope and indicator.
template <typename RowT, typename ScopeOf>
std::vector<RankedRow<RowT>> rank_rows(
    const std::vector<RowT>& table, ScopeOf scope_of,
    const std::set<std::pair<std::string, std::string>>& output_subset,
    const std::set<std::pair<std::string, std::string>>& impact_subset) {
  std::vector<RankedRow<RowT>> ranked;
  std::map<std::string, std::vector<std::size_t>> by_scope;
  for (const auto& row : table) {
    if (!output_subset.count({row.university_id, scope_of(row)})) continue;
    RankedRow<RowT> r;
    r.row = row;
    by_scope[scope_of(row)].push_back(ranked.size());
    ranked.push_back(std::move(r));
  }

  for (auto& [scope, indices] : by_scope) {
    for (auto kind : kAllIndicators) {
      const auto& subset =
          indicator_uses_impact(kind) ? impact_subset : output_subset;
      std::vector<std::size_t> eligible;
      std::vector<double> values;
      for (std::size_t idx : indices) {
        const auto& row = ranked[idx].row;
        if (!subset.count({row.university_id, scope})) continue;
        eligible.push_back(idx);
        values.push_back(row.values.get(kind));
      }
      if (eligible.empty()) continue;
      const std::vector<double> pct = percentile_scale(values);
      for (std::size_t k = 0; k < eligible.size(); ++k) {
        ranked[eligible[k]].percentile[static_cast<std::size_t>(kind)] = pct[k];
      }
    }
  }
  return ranked;
}

}  // namespace

AnalysisRun run_analysis(const Corpus& input, const RunConfig& config) {
  AnalysisRun run;
  run.input_digest = corpus_digest(input);
  run.config_stamp = config_hash(config);
  run.census_date = input.census_date;

  if (config.apply_exclusions) {
    auto [kept, report] = apply_exclusions(input, config.exclusion_rules);
    run.corpus = std::move(kept);
    run.exclusions = std::move(report);
  } else {
    run.corpus = input;
    for (const auto& entry : run.corpus.taxonomy.entries) {
      run.exclusions.retained.push_back(entry.sds_code);
    }
    std::sort(run.exclusions.retained.begin(), run.exclusions.retained.end());
  }

  if (run.corpus.taxonomy.entries.empty()) {
    fail(ErrorKind::EmptyAnalysis,
         "every field was excluded; nothing to analyse");
  }

  run.sds_output = non_nil_subset(run.corpus, Basis::Output);
  run.sds_impact = non_nil_subset(run.corpus, Basis::Impact);
  if (run.sds_output.empty()) {
    fail(ErrorKind::EmptyAnalysis,
         "no university published in any retained field; nothing to analyse");
  }

  const CitationBaseline baseline = build_citation_baseline(run.corpus);
  run.sds_table = compute_sds_table(run.corpus, baseline, config.scheme,
                                    config.indicator_options);
  run.averages = national_averages_by_basis(run.sds_table, run.corpus,
                                            config.average_subset);
  run.uda_table = compute_uda_table(run.corpus, run.sds_table, run.averages);

  for (const auto& [university, sds] : run.sds_output) {
    const std::string* uda = run.corpus.taxonomy.uda_of(sds);
    if (uda) run.uda_output.insert({university, *uda});
  }
  for (const auto& [university, sds] : run.sds_impact) {
    const std::string* uda = run.corpus.taxonomy.uda_of(sds);
    if (uda) run.uda_impact.insert({university, *uda});
  }

  run.ranked_sds = rank_rows(
      run.sds_table,
      [](const SdsIndicatorRow& row) { return row.sds_code; }, run.sds_output,
      run.sds_impact);
  run.ranked_uda = rank_rows(
      run.uda_table,
      [](const UdaIndicatorRow& row) { return row.uda_code; }, run.uda_output,
      run.uda_impact);
  return run;
}

std::vector<PairSpec> parse_pairs(const std::string& text) {
  auto kind_of = [](const std::string& name) {
    for (auto kind : kAllIndicators) {
      if (name == indicator_name(kind)) return kind;
    }
    fail(ErrorKind::Params, "unknown indicator '" + name + "'");
  };

  std::vector<PairSpec> pairs;
  for (const auto& part : csv::split(text, ',')) {
    if (part.empty()) {
      fail(ErrorKind::Params, "empty pair in '" + text + "'");
    }
    const auto colon = part.find(':');
    if (colon == std::string::npos || part.find(':', colon + 1) != std::string::npos) {
      fail(ErrorKind::Params,
           "pair '" + part + "' must look like 'wfo:fo'");
    }
    pairs.push_back(
        {kind_of(part.substr(0, colon)), kind_of(part.substr(colon + 1))});
  }
  if (pairs.empty()) {
    fail(ErrorKind::Params, "no pairs given");
  }
  return pairs;
}

namespace {

struct ScopedValues {
  // university -> (first value, second value), sorted by university.
  std::map<std::string, std::pair<double, double>> by_university;
};

}  // namespace

ComparisonBattery run_comparisons(const AnalysisRun& run, Level level,
                                  const std::vector<PairSpec>& pairs) {
  ComparisonBattery battery;
  battery.level = level;

  std::map<std::string, std::string> scope_group;
  if (level == Level::Sds) {
    for (const auto& entry : run.corpus.taxonomy.entries) {
      scope_group[entry.sds_code] = entry.uda_code;
    }
  }

  std::set<std::pair<std::string, std::string>> seen;     // (scope, university)
  std::set<std::pair<std::string, std::string>> shifted;  // changed in any pair

  for (const auto& spec : pairs) {
    const bool impact_pair = indicator_uses_impact(spec.first) ||
                             indicator_uses_impact(spec.second);

    // Collect paired values per scope over the pair's subset.
    std::map<std::string, ScopedValues> scoped;
    auto collect = [&](const std::string& scope, const std::string& university,
                       const IndicatorSet& values, bool in_subset) {
      if (!in_subset) return;
      scoped[scope].by_university[university] = {values.get(spec.first),
                                                 values.get(spec.second)};
    };
    if (level == Level::Sds) {
      for (const auto& row : run.sds_table) {
        const auto& subset = impact_pair ? run.sds_impact : run.sds_output;
        collect(row.sds_code, row.university_id, row.values,
                subset.count({row.university_id, row.sds_code}) > 0);
      }
    } else {
      for (const auto& row : run.uda_table) {
        const auto& subset = impact_pair ? run.uda_impact : run.uda_output;
        collect(row.uda_code, row.university_id, row.values,
                subset.count({row.university_id, row.uda_code}) > 0);
      }
    }

    PairComparison comparison;
    comparison.spec = spec;

    std::map<std::string, std::vector<std::pair<double, double>>> by_scope;
    for (const auto& [scope, values] : scoped) {
      auto& list = by_scope[scope];
      for (const auto& [university, pair] : values.by_university) {
        list.push_back(pair);
      }
    }
    comparison.summary = correlation_summary(by_scope, scope_group);

    std::set<std::string> compared;
    for (const auto& entry : comparison.summary.scopes) {
      compared.insert(entry.scope);
    }

    for (const auto& [scope, values] : scoped) {
      if (!compared.count(scope)) continue;
      std::vector<std::pair<std::string, double>> first_items, second_items;
      for (const auto& [university, pair] : values.by_university) {
        first_items.push_back({university, pair.first});
        second_items.push_back({university, pair.second});
      }
      const Ranking first_ranking = make_ranking(first_items);
      const Ranking second_ranking = make_ranking(second_items);
      const std::vector<int> first_q = assign_quartiles(first_ranking);
      const std::vector<int> second_q = assign_quartiles(second_ranking);
      std::map<std::string, int> second_by_id;
      for (std::size_t k = 0; k < second_ranking.ids.size(); ++k) {
        second_by_id[second_ranking.ids[k]] = second_q[k];
      }
      std::vector<int> aligned_second;
      aligned_second.reserve(first_ranking.ids.size());
      for (const auto& id : first_ranking.ids) {
        aligned_second.push_back(second_by_id.at(id));
      }

      PairScopeRow row;
      row.scope = scope;
      row.n = static_cast<int>(first_ranking.ids.size());
      for (const auto& entry : comparison.summary.scopes) {
        if (entry.scope == scope) row.rho = entry.rho;
      }
      row.shifts = quartile_shift_stats(first_q, aligned_second);
      row.churn = top_quartile_churn(first_q, aligned_second);
      comparison.rows.push_back(row);

      comparison.pooled_n += row.shifts.n;
      comparison.pooled_shifted += row.shifts.shifted;
      comparison.pooled_total_abs_shift += row.shifts.total_abs_shift;
      comparison.pooled_max_abs_shift =
          std::max(comparison.pooled_max_abs_shift, row.shifts.max_abs_shift);
      comparison.pooled_two_or_more += row.shifts.shifted_two_or_more;

      for (std::size_t k = 0; k < first_ranking.ids.size(); ++k) {
        seen.insert({scope, first_ranking.ids[k]});
        if (first_q[k] != aligned_second[k]) {
          shifted.insert({scope, first_ranking.ids[k]});
        }
      }
    }
    battery.pairs.push_back(std::move(comparison));
  }

  battery.scoped_universities = static_cast<int>(seen.size());
  battery.shifted_any = static_cast<int>(shifted.size());
  return battery;
}

}  // namespace prodrank
