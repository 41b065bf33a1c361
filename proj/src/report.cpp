#include "prodrank/report.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "prodrank/errors.hpp"
#include "prodrank/format.hpp"

namespace prodrank {

namespace {

using nlohmann::ordered_json;

std::string stamp_block(const ReportMeta& meta) {
  std::string out;
  out += "# tool: prodrank\n";
  out += "# config: " + meta.config_stamp + "\n";
  out += "# corpus: " + meta.corpus_digest + "\n";
  out += "# census: " + meta.census_date + "\n";
  return out;
}

ordered_json meta_json(const ReportMeta& meta) {
  ordered_json out;
  out["tool"] = "prodrank";
  out["config"] = meta.config_stamp;
  out["corpus"] = meta.corpus_digest;
  out["census"] = meta.census_date;
  return out;
}

std::string cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

template <typename RowT>
std::string render_indicator_csv(const std::vector<RankedRow<RowT>>& rows,
                                 const ReportMeta& meta,
                                 const char* scope_column,
                                 const std::string& (*scope_of)(const RowT&)) {
  std::string out = stamp_block(meta);
  out += std::string("university_id,") + scope_column +
         ",wfo,fo,o,wfi,fi,i,p_wfo,p_fo,p_o,p_wfi,p_fi,p_i\n";
  for (const auto& r : rows) {
    out += r.row.university_id + "," + scope_of(r.row);
    for (auto kind : kAllIndicators) {
      out += "," + format_double(r.row.values.get(kind));
    }
    for (auto kind : kAllIndicators) {
      out += "," + cell(r.percentile[static_cast<std::size_t>(kind)]);
    }
    out += "\n";
  }
  return out;
}

template <typename RowT>
ordered_json indicator_rows_json(const std::vector<RankedRow<RowT>>& rows,
                                 const char* scope_column,
                                 const std::string& (*scope_of)(const RowT&)) {
  ordered_json list = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["university_id"] = r.row.university_id;
    row[scope_column] = scope_of(r.row);
    row["rs"] = r.row.values.rs;
    for (auto kind : kAllIndicators) {
      row[indicator_name(kind)] = r.row.values.get(kind);
    }
    for (auto kind : kAllIndicators) {
      const auto& pct = r.percentile[static_cast<std::size_t>(kind)];
      const std::string key = std::string("p_") + indicator_name(kind);
      if (pct) {
        row[key] = *pct;
      } else {
        row[key] = nullptr;
      }
    }
    list.push_back(std::move(row));
  }
  return list;
}

const std::string& sds_scope(const SdsIndicatorRow& row) { return row.sds_code; }
const std::string& uda_scope(const UdaIndicatorRow& row) { return row.uda_code; }

ordered_json pair_summary_json(const PairComparison& comparison) {
  ordered_json out;
  out["first"] = indicator_name(comparison.spec.first);
  out["second"] = indicator_name(comparison.spec.second);
  out["scopes_compared"] = comparison.summary.scopes.size();
  ordered_json skipped = ordered_json::array();
  for (const auto& s : comparison.summary.skipped) {
    skipped.push_back({{"scope", s.scope}, {"reason", s.reason}});
  }
  out["scopes_skipped"] = std::move(skipped);
  if (comparison.summary.mean_rho) {
    out["mean_rho"] = *comparison.summary.mean_rho;
    out["min_rho"] = *comparison.summary.min_rho;
    out["min_scope"] = comparison.summary.min_scope;
  } else {
    out["mean_rho"] = nullptr;
    out["min_rho"] = nullptr;
    out["min_scope"] = nullptr;
  }
  ordered_json above;
  for (const auto& [threshold, count] : comparison.summary.above) {
    above[format_double(threshold)] = count;
  }
  out["rho_above"] = std::move(above);
  if (!comparison.summary.group_means.empty()) {
    ordered_json groups;
    for (const auto& [group, mean] : comparison.summary.group_means) {
      groups[group] = mean;
    }
    out["group_mean_rho"] = std::move(groups);
  }
  ordered_json shift;
  shift["n"] = comparison.pooled_n;
  shift["shifted"] = comparison.pooled_shifted;
  shift["pct_shifted"] = comparison.pooled_n > 0
                             ? 100.0 * comparison.pooled_shifted /
                                   comparison.pooled_n
                             : 0.0;
  shift["avg_abs_shift"] =
      comparison.pooled_n > 0
          ? static_cast<double>(comparison.pooled_total_abs_shift) /
                comparison.pooled_n
          : 0.0;
  shift["max_abs_shift"] = comparison.pooled_max_abs_shift;
  shift["total_abs_shift"] = comparison.pooled_total_abs_shift;
  shift["shifted_two_or_more"] = comparison.pooled_two_or_more;
  out["shift"] = std::move(shift);
  return out;
}

}  // namespace

ReportMeta report_meta(const AnalysisRun& run) {
  return {run.config_stamp, run.input_digest, run.census_date};
}

std::string render_sds_indicators_csv(const std::vector<RankedSdsRow>& rows,
                                      const ReportMeta& meta) {
  return render_indicator_csv(rows, meta, "sds_code", sds_scope);
}

std::string render_uda_indicators_csv(const std::vector<RankedUdaRow>& rows,
                                      const ReportMeta& meta) {
  return render_indicator_csv(rows, meta, "uda_code", uda_scope);
}

std::string render_sds_indicators_json(const std::vector<RankedSdsRow>& rows,
                                       const ReportMeta& meta) {
  ordered_json out;
  out["meta"] = meta_json(meta);
  out["rows"] = indicator_rows_json(rows, "sds_code", sds_scope);
  return out.dump(2) + "\n";
}

std::string render_uda_indicators_json(const std::vector<RankedUdaRow>& rows,
                                       const ReportMeta& meta) {
  ordered_json out;
  out["meta"] = meta_json(meta);
  out["rows"] = indicator_rows_json(rows, "uda_code", uda_scope);
  return out.dump(2) + "\n";
}

std::string render_compare_csv(const PairComparison& comparison,
                               const ReportMeta& meta) {
  std::string out = stamp_block(meta);
  out += "# pair: " + std::string(indicator_name(comparison.spec.first)) +
         ":" + indicator_name(comparison.spec.second) + "\n";
  out += "scope,n,rho,shifted,pct_shifted,avg_abs_shift,max_abs_shift,"
         "total_abs_shift,shifted_two_or_more,top_quartile_churn\n";
  for (const auto& row : comparison.rows) {
    out += row.scope + "," + std::to_string(row.n) + "," +
           format_double(row.rho) + "," + std::to_string(row.shifts.shifted) +
           "," + format_double(row.shifts.pct_shifted) + "," +
           format_double(row.shifts.avg_abs_shift) + "," +
           std::to_string(row.shifts.max_abs_shift) + "," +
           std::to_string(row.shifts.total_abs_shift) + "," +
           std::to_string(row.shifts.shifted_two_or_more) + "," +
           format_double(row.churn) + "\n";
  }
  return out;
}

std::string render_compare_json(const PairComparison& comparison,
                                const ReportMeta& meta) {
  ordered_json out;
  out["meta"] = meta_json(meta);
  out["pair"] = pair_summary_json(comparison);
  ordered_json rows = ordered_json::array();
  for (const auto& row : comparison.rows) {
    ordered_json r;
    r["scope"] = row.scope;
    r["n"] = row.n;
    r["rho"] = row.rho;
    r["shifted"] = row.shifts.shifted;
    r["pct_shifted"] = row.shifts.pct_shifted;
    r["avg_abs_shift"] = row.shifts.avg_abs_shift;
    r["max_abs_shift"] = row.shifts.max_abs_shift;
    r["total_abs_shift"] = row.shifts.total_abs_shift;
    r["shifted_two_or_more"] = row.shifts.shifted_two_or_more;
    r["top_quartile_churn"] = row.churn;
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out.dump(2) + "\n";
}

std::string render_summary_json(const ComparisonBattery& battery,
                                const ReportMeta& meta) {
  ordered_json out;
  out["meta"] = meta_json(meta);
  out["level"] = level_name(battery.level);
  ordered_json pairs = ordered_json::array();
  for (const auto& comparison : battery.pairs) {
    pairs.push_back(pair_summary_json(comparison));
  }
  out["pairs"] = std::move(pairs);
  ordered_json any;
  any["scoped_universities"] = battery.scoped_universities;
  any["shifted"] = battery.shifted_any;
  any["pct_shifted"] = battery.scoped_universities > 0
                           ? 100.0 * battery.shifted_any /
                                 battery.scoped_universities
                           : 0.0;
  out["any_pair"] = std::move(any);
  return out.dump(2) + "\n";
}

std::string render_validation_json(const std::vector<Violation>& violations) {
  ordered_json out;
  out["valid"] = violations.empty();
  out["count"] = violations.size();
  ordered_json list = ordered_json::array();
  for (const auto& v : violations) {
    list.push_back({{"code", v.code}, {"message", v.message}});
  }
  out["violations"] = std::move(list);
  return out.dump(2) + "\n";
}

std::string render_exclusions_text(const ExclusionReport& report) {
  std::string out;
  for (const auto& e : report.excluded) {
    out += "excluded " + e.sds_code + " (";
    for (std::size_t k = 0; k < e.rules.size(); ++k) {
      if (k > 0) out += ", ";
      out += e.rules[k];
    }
    out += "; publishing_fraction=" + format_double(e.publishing_fraction) +
           ", university_span=" + std::to_string(e.university_span) + ")\n";
  }
  out += "retained " + std::to_string(report.retained.size()) + " field(s)\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) {
      fail(ErrorKind::Io, "cannot create directory " + p.parent_path().string());
    }
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << content;
  out.flush();
  if (!out) fail(ErrorKind::Io, "write failure on " + path);
}

}  // namespace prodrank
