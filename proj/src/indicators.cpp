#include "prodrank/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "prodrank/errors.hpp"

namespace prodrank {

namespace {

// Median of a non-empty vector; even lengths average the middle two.
double median(std::vector<long long>& values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return static_cast<double>(values[n / 2]);
  return (static_cast<double>(values[n / 2 - 1]) +
          static_cast<double>(values[n / 2])) /
         2.0;
}

}  // namespace

const char* indicator_name(IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::Wfo: return "wfo";
    case IndicatorKind::Fo: return "fo";
    case IndicatorKind::O: return "o";
    case IndicatorKind::Wfi: return "wfi";
    case IndicatorKind::Fi: return "fi";
    case IndicatorKind::I: return "i";
  }
  fail(ErrorKind::Domain, "unknown indicator");
}

bool indicator_uses_impact(IndicatorKind kind) {
  return kind == IndicatorKind::Wfi || kind == IndicatorKind::Fi ||
         kind == IndicatorKind::I;
}

double IndicatorSet::get(IndicatorKind kind) const {
  switch (kind) {
    case IndicatorKind::Wfo: return wfo;
    case IndicatorKind::Fo: return fo;
    case IndicatorKind::O: return o;
    case IndicatorKind::Wfi: return wfi;
    case IndicatorKind::Fi: return fi;
    case IndicatorKind::I: return i;
  }
  fail(ErrorKind::Domain, "unknown indicator");
}

void IndicatorSet::set(IndicatorKind kind, double value) {
  switch (kind) {
    case IndicatorKind::Wfo: wfo = value; return;
    case IndicatorKind::Fo: fo = value; return;
    case IndicatorKind::O: o = value; return;
    case IndicatorKind::Wfi: wfi = value; return;
    case IndicatorKind::Fi: fi = value; return;
    case IndicatorKind::I: i = value; return;
  }
  fail(ErrorKind::Domain, "unknown indicator");
}

double CitationBaseline::cell(int year, const std::string& category) const {
  auto it = cell_median.find({year, category});
  if (it != cell_median.end()) return it->second;
  auto yit = year_median.find(year);
  if (yit == year_median.end()) {
    fail(ErrorKind::Baseline,
         "no citation baseline for year " + std::to_string(year));
  }
  return yit->second;
}

double CitationBaseline::expected(const PublicationRecord& pub) const {
  if (pub.categories.empty()) {
    fail(ErrorKind::Baseline,
         "publication '" + pub.pub_id + "' has no subject categories");
  }
  double sum = 0.0;
  for (const auto& cat : pub.categories) sum += cell(pub.year, cat);
  return sum / static_cast<double>(pub.categories.size());
}

CitationBaseline build_citation_baseline(const Corpus& corpus) {
  std::map<std::pair<int, std::string>, std::vector<long long>> cells;
  std::map<int, std::vector<long long>> years;
  std::unordered_set<int> all_years;
  for (const auto& pub : corpus.publications) {
    all_years.insert(pub.year);
    if (pub.citations < 1) continue;
    years[pub.year].push_back(pub.citations);
    for (const auto& cat : pub.categories) {
      cells[{pub.year, cat}].push_back(pub.citations);
    }
  }
  for (int year : all_years) {
    if (!years.count(year)) {
      fail(ErrorKind::Baseline, "no cited publications in year " +
                                    std::to_string(year) +
                                    "; medians are undefined there");
    }
  }
  CitationBaseline baseline;
  for (auto& [key, values] : cells) {
    baseline.cell_median[key] = median(values);
  }
  for (auto& [year, values] : years) {
    baseline.year_median[year] = median(values);
  }
  return baseline;
}

double normalized_citation_score(const PublicationRecord& pub,
                                 const CitationBaseline& baseline) {
  if (pub.citations == 0) return 0.0;
  return static_cast<double>(pub.citations) / baseline.expected(pub);
}

IndicatorSet sds_indicator(const Corpus& corpus, const StaffLookup& lookup,
                           const CitationBaseline& baseline,
                           const CreditScheme& scheme,
                           const std::string& university_id,
                           const std::string& sds_code,
                           const IndicatorOptions& options) {
  int roster_count = 0;
  std::unordered_set<std::string> members;
  for (const auto& m : corpus.roster) {
    if (m.university_id == university_id && m.sds_code == sds_code) {
      ++roster_count;
      members.insert(m.researcher_id);
    }
  }

  IndicatorSet set;
  int publishing = 0;
  std::unordered_set<std::string> seen_publishing;
  for (const auto& pub : corpus.publications) {
    const int authors = full_author_count(pub, university_id, sds_code, lookup);
    if (authors == 0) continue;
    const double wf = weighted_fraction(pub, university_id, sds_code, lookup, scheme);
    const double pf = plain_fraction(pub, university_id, sds_code, lookup);
    const double full = options.full_counting == FullCounting::PerStaff
                            ? static_cast<double>(authors)
                            : 1.0;
    const double score = normalized_citation_score(pub, baseline);
    set.wfo += wf;
    set.fo += pf;
    set.o += full;
    set.wfi += wf * score;
    set.fi += pf * score;
    set.i += full * score;
    for (const auto& slot : pub.byline) {
      if (slot.researcher_id && members.count(*slot.researcher_id)) {
        if (seen_publishing.insert(*slot.researcher_id).second) ++publishing;
      }
    }
  }

  set.rs = options.rs_denominator == RsDenominator::PublishingOnly
               ? publishing
               : roster_count;
  if (set.rs == 0) {
    // Nothing to normalize by; with no publishing staff every numerator is
    // zero as well, so the row reads as all zeros.
    set = IndicatorSet{};
    return set;
  }
  const double rs = static_cast<double>(set.rs);
  set.wfo /= rs;
  set.fo /= rs;
  set.o /= rs;
  set.wfi /= rs;
  set.fi /= rs;
  set.i /= rs;
  return set;
}

SdsIndicatorTable compute_sds_table(const Corpus& corpus,
                                    const CitationBaseline& baseline,
                                    const CreditScheme& scheme,
                                    const IndicatorOptions& options) {
  scheme.validate();
  StaffLookup lookup(corpus);

  struct Cell {
    IndicatorSet sums;
    int roster = 0;
    std::unordered_set<std::string> publishing;
  };
  std::map<UniversitySds, Cell> cells;
  for (const auto& m : corpus.roster) {
    cells[{m.university_id, m.sds_code}].roster += 1;
  }

  struct Contribution {
    double wf = 0.0;
    int authors = 0;
  };
  for (const auto& pub : corpus.publications) {
    std::map<UniversitySds, Contribution> touched;
    std::vector<double> weights;
    bool weights_ready = false;
    for (const auto& slot : pub.byline) {
      if (!slot.researcher_id) continue;
      const StaffMember* m = lookup.find(*slot.researcher_id);
      if (!m) continue;
      if (!weights_ready) {
        weights = position_weights(pub.byline.size(),
                                   classify_collaboration(pub), scheme);
        weights_ready = true;
      }
      if (slot.position < 1 ||
          slot.position > static_cast<int>(pub.byline.size())) {
        fail(ErrorKind::Domain, "publication '" + pub.pub_id +
                                    "' byline position out of range");
      }
      auto& c = touched[{m->university_id, m->sds_code}];
      c.wf += weights[static_cast<std::size_t>(slot.position) - 1];
      c.authors += 1;
      cells[{m->university_id, m->sds_code}].publishing.insert(
          *slot.researcher_id);
    }
    if (touched.empty()) continue;
    const double score = normalized_citation_score(pub, baseline);
    const double n = static_cast<double>(pub.byline.size());
    for (const auto& [key, c] : touched) {
      auto& cell = cells[key];
      const double pf = static_cast<double>(c.authors) / n;
      const double full = options.full_counting == FullCounting::PerStaff
                              ? static_cast<double>(c.authors)
                              : 1.0;
      cell.sums.wfo += c.wf;
      cell.sums.fo += pf;
      cell.sums.o += full;
      cell.sums.wfi += c.wf * score;
      cell.sums.fi += pf * score;
      cell.sums.i += full * score;
    }
  }

  SdsIndicatorTable table;
  table.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    if (cell.roster == 0) continue;  // byline-only cell, no roster backing
    SdsIndicatorRow row;
    row.university_id = key.first;
    row.sds_code = key.second;
    row.values = cell.sums;
    row.values.rs = options.rs_denominator == RsDenominator::PublishingOnly
                        ? static_cast<int>(cell.publishing.size())
                        : cell.roster;
    if (row.values.rs == 0) {
      row.values = IndicatorSet{};
    } else {
      const double rs = static_cast<double>(row.values.rs);
      for (auto kind : kAllIndicators) {
        row.values.set(kind, row.values.get(kind) / rs);
      }
    }
    table.push_back(std::move(row));
  }
  return table;
}

std::vector<double> percentile_scale(const std::vector<double>& values) {
  const std::size_t n = values.size();
  for (double v : values) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::Domain, "percentile input must be finite");
    }
  }
  if (n == 0) return {};
  std::vector<double> out(n, 100.0);
  if (n == 1) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });

  const double denom = static_cast<double>(n - 1);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // ranks i+1 .. j+1 share their mean
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    const double pct = 100.0 * (static_cast<double>(n) - mean_rank) / denom;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = pct;
    i = j + 1;
  }
  return out;
}

}  // namespace prodrank
