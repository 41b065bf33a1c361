#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "prodrank/errors.hpp"
#include "prodrank/indicators.hpp"
#include "testutil.hpp"

using namespace prodrank;
using testutil::CorpusBuilder;

namespace {

// Corpus with a hand-checkable baseline: 2006 biochemistry citations
// {0, 0, 3, 5, 10} -> cited subset {3, 5, 10} -> median 5.
Corpus baseline_corpus() {
  CorpusBuilder builder;
  builder.taxonomy("BIO/10", "LIFE").staff("R1", "U1", "BIO/10");
  int n = 0;
  for (long long cites : {0, 0, 3, 5, 10}) {
    builder.pub("P" + std::to_string(++n), 2006, cites, {"biochemistry"},
                {{"R1", "U1"}});
  }
  // Even-sized cell: {2, 4} -> 3.
  builder.pub("P6", 2006, 2, {"genetics"}, {{"R1", "U1"}});
  builder.pub("P7", 2006, 4, {"genetics"}, {{"R1", "U1"}});
  // Singleton cell in another year.
  builder.pub("P8", 2007, 7, {"biochemistry"}, {{"R1", "U1"}});
  return builder.build();
}

}  // namespace

TEST_CASE("cell medians skip uncited publications") {
  auto baseline = build_citation_baseline(baseline_corpus());
  CHECK(baseline.cell(2006, "biochemistry") == 5.0);
  CHECK(baseline.cell(2006, "genetics") == 3.0);
  CHECK(baseline.cell(2007, "biochemistry") == 7.0);
}

TEST_CASE("missing categories fall back to the year median") {
  auto baseline = build_citation_baseline(baseline_corpus());
  // 2006 cited citations pooled: {3, 5, 10, 2, 4} -> median 4.
  CHECK(baseline.cell(2006, "nosuchcat") == 4.0);
  // 2007 pooled: {7}.
  CHECK(baseline.cell(2007, "nosuchcat") == 7.0);
}

TEST_CASE("unknown years are a baseline error") {
  auto baseline = build_citation_baseline(baseline_corpus());
  CHECK_THROWS_AS(baseline.cell(1999, "biochemistry"), Error);
  try {
    baseline.cell(1999, "biochemistry");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Baseline);
  }
}

TEST_CASE("a year of entirely uncited publications cannot be normalized") {
  auto corpus = baseline_corpus();
  CorpusBuilder extra;
  corpus.publications.push_back(
      CorpusBuilder()
          .pub("P9", 2008, 0, {"biochemistry"}, {{"R1", "U1"}})
          .build()
          .publications[0]);
  try {
    build_citation_baseline(corpus);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Baseline);
    CHECK(std::string(e.what()).find("2008") != std::string::npos);
  }
}

TEST_CASE("normalized scores divide by the expected citation count") {
  auto corpus = baseline_corpus();
  auto baseline = build_citation_baseline(corpus);

  auto score = [&](long long cites, std::vector<std::string> cats) {
    auto pub = CorpusBuilder()
                   .pub("PX", 2006, cites, std::move(cats), {{"R1", "U1"}})
                   .build()
                   .publications[0];
    return normalized_citation_score(pub, baseline);
  };

  CHECK(score(10, {"biochemistry"}) == doctest::Approx(2.0));
  CHECK(score(0, {"biochemistry"}) == 0.0);
  // Mean of medians: (5 + 3) / 2 = 4, so 6 / 4 = 1.5.
  CHECK(score(6, {"biochemistry", "genetics"}) == doctest::Approx(1.5));
}

namespace {

// Two universities, one field; U1 has two staff (one silent), U2 has one.
// All citation cells are hand-pinned via a single category per year.
Corpus indicator_corpus() {
  return CorpusBuilder()
      .taxonomy("BIO/10", "LIFE")
      .staff("R1", "U1", "BIO/10")
      .staff("R2", "U1", "BIO/10")
      .staff("R3", "U2", "BIO/10")
      .staff("R4", "U1", "BIO/10")  // never publishes
      // 2006 medians: cited {4, 2} -> 3.
      .pub("A1", 2006, 4, {"biochemistry"}, {{"R1", "U1"}, {"R3", "U2"}})
      .pub("A2", 2006, 2, {"biochemistry"}, {{"R2", "U1"}, {"", ""}, {"", ""}})
      .pub("A3", 2006, 0, {"biochemistry"}, {{"R3", "U2"}})
      .build();
}

}  // namespace

TEST_CASE("field indicators match the hand computation") {
  auto corpus = indicator_corpus();
  StaffLookup lookup(corpus);
  auto baseline = build_citation_baseline(corpus);
  CreditScheme scheme;

  auto u1 = sds_indicator(corpus, lookup, baseline, scheme, "U1", "BIO/10");
  CHECK(u1.rs == 3);
  // A1: two authors, extramural -> [0.5, 0.5]; U1 holds position 1.
  // A2: three authors, extramural (unknown end) -> [0.4, 0.2, 0.4]; U1 pos 1.
  CHECK(u1.wfo == doctest::Approx((0.5 + 0.4) / 3).epsilon(1e-12));
  CHECK(u1.fo == doctest::Approx((0.5 + 1.0 / 3) / 3).epsilon(1e-12));
  CHECK(u1.o == doctest::Approx(2.0 / 3).epsilon(1e-12));
  // Normalized scores: A1 -> 4/3, A2 -> 2/3.
  CHECK(u1.wfi ==
        doctest::Approx((0.5 * 4 / 3.0 + 0.4 * 2 / 3.0) / 3).epsilon(1e-12));
  CHECK(u1.fi == doctest::Approx((0.5 * 4 / 3.0 + (1.0 / 3) * 2 / 3.0) / 3)
                     .epsilon(1e-12));
  CHECK(u1.i ==
        doctest::Approx((4 / 3.0 + 2 / 3.0) / 3).epsilon(1e-12));

  auto u2 = sds_indicator(corpus, lookup, baseline, scheme, "U2", "BIO/10");
  CHECK(u2.rs == 1);
  CHECK(u2.wfo == doctest::Approx(0.5 + 1.0).epsilon(1e-12));
  CHECK(u2.o == 2.0);
  // A3 is uncited and contributes nothing on the impact basis.
  CHECK(u2.i == doctest::Approx(4 / 3.0).epsilon(1e-12));
}

TEST_CASE("publishing-only denominators shrink rs") {
  auto corpus = indicator_corpus();
  StaffLookup lookup(corpus);
  auto baseline = build_citation_baseline(corpus);
  CreditScheme scheme;
  IndicatorOptions options;
  options.rs_denominator = RsDenominator::PublishingOnly;

  auto u1 =
      sds_indicator(corpus, lookup, baseline, scheme, "U1", "BIO/10", options);
  CHECK(u1.rs == 2);  // R4 never publishes
  CHECK(u1.o == 1.0);
}

TEST_CASE("per-staff full counting counts heads, not publications") {
  auto corpus = CorpusBuilder()
                    .taxonomy("BIO/10", "LIFE")
                    .staff("R1", "U1", "BIO/10")
                    .staff("R2", "U1", "BIO/10")
                    .pub("A1", 2006, 1, {"biochemistry"},
                         {{"R1", "U1"}, {"R2", "U1"}})
                    .build();
  StaffLookup lookup(corpus);
  auto baseline = build_citation_baseline(corpus);
  CreditScheme scheme;

  auto per_institution =
      sds_indicator(corpus, lookup, baseline, scheme, "U1", "BIO/10");
  CHECK(per_institution.o == doctest::Approx(0.5));

  IndicatorOptions options;
  options.full_counting = FullCounting::PerStaff;
  auto per_staff =
      sds_indicator(corpus, lookup, baseline, scheme, "U1", "BIO/10", options);
  CHECK(per_staff.o == doctest::Approx(1.0));
}

TEST_CASE("cells without staff score zero everywhere") {
  auto corpus = indicator_corpus();
  StaffLookup lookup(corpus);
  auto baseline = build_citation_baseline(corpus);
  CreditScheme scheme;
  auto empty =
      sds_indicator(corpus, lookup, baseline, scheme, "U9", "BIO/10");
  CHECK(empty.rs == 0);
  for (auto kind : kAllIndicators) CHECK(empty.get(kind) == 0.0);
}

TEST_CASE("the table agrees with the per-cell evaluation") {
  auto corpus = indicator_corpus();
  StaffLookup lookup(corpus);
  auto baseline = build_citation_baseline(corpus);
  CreditScheme scheme;

  for (auto options :
       {IndicatorOptions{},
        IndicatorOptions{RsDenominator::PublishingOnly,
                         FullCounting::PerInstitution},
        IndicatorOptions{RsDenominator::FullRoster, FullCounting::PerStaff}}) {
    auto table = compute_sds_table(corpus, baseline, scheme, options);
    REQUIRE(table.size() == 2);
    CHECK(std::is_sorted(table.begin(), table.end(),
                         [](const SdsIndicatorRow& a, const SdsIndicatorRow& b) {
                           return std::tie(a.university_id, a.sds_code) <
                                  std::tie(b.university_id, b.sds_code);
                         }));
    for (const auto& row : table) {
      auto cell = sds_indicator(corpus, lookup, baseline, scheme,
                                row.university_id, row.sds_code, options);
      CHECK(row.values.rs == cell.rs);
      for (auto kind : kAllIndicators) {
        CHECK(row.values.get(kind) ==
              doctest::Approx(cell.get(kind)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("output times staff recovers the distinct publication count") {
  auto corpus = indicator_corpus();
  auto baseline = build_citation_baseline(corpus);
  auto table = compute_sds_table(corpus, baseline, CreditScheme{});
  for (const auto& row : table) {
    double count = row.values.o * row.values.rs;
    CHECK(std::fabs(count - std::round(count)) <= 1e-9);
  }
}

// ---------------------------------------------------------------------------
// Percentile scaling

namespace {

// Quadratic-time reference: percentile from explicit average ranks.
std::vector<double> percentile_reference(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n == 0) return {};
  if (n == 1) return {100.0};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    int better = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (values[j] > values[i]) ++better;
      if (values[j] == values[i]) ++equal;
    }
    // Average display rank of i's tie block, 1-based.
    double rank = better + (equal + 1) / 2.0;
    out[i] = 100.0 * (n - rank) / (n - 1);
  }
  return out;
}

}  // namespace

TEST_CASE("percentiles run from 100 for the best to 0 for the worst") {
  CHECK(percentile_scale({5, 3, 1}) == std::vector<double>{100, 50, 0});
  CHECK(percentile_scale({1, 3, 5}) == std::vector<double>{0, 50, 100});
  CHECK(percentile_scale({42}) == std::vector<double>{100});
  CHECK(percentile_scale({}).empty());
}

TEST_CASE("tied values share their block's mean percentile") {
  CHECK(percentile_scale({5, 5, 1}) == std::vector<double>{75, 75, 0});
  CHECK(percentile_scale({1, 5, 5}) == std::vector<double>{0, 75, 75});
  auto all_equal = percentile_scale({2, 2, 2, 2});
  for (double p : all_equal) CHECK(p == doctest::Approx(50.0));
}

TEST_CASE("percentiles reject non-finite values") {
  CHECK_THROWS_AS(
      percentile_scale({1.0, std::numeric_limits<double>::quiet_NaN()}),
      Error);
}

TEST_CASE("percentile scaling matches exhaustive enumeration") {
  // Every value vector over a small alphabet, up to length 6.
  const std::vector<double> alphabet = {0.0, 1.0, 2.0};
  for (std::size_t len = 2; len <= 6; ++len) {
    std::vector<std::size_t> digits(len, 0);
    for (;;) {
      std::vector<double> values(len);
      for (std::size_t i = 0; i < len; ++i) values[i] = alphabet[digits[i]];
      auto got = percentile_scale(values);
      auto want = percentile_reference(values);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < len; ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
      }
      std::size_t pos = 0;
      while (pos < len && ++digits[pos] == alphabet.size()) {
        digits[pos++] = 0;
      }
      if (pos == len) break;
    }
  }
}

TEST_CASE("percentiles are strictly monotone on tie-free data") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(15);
    for (auto& v : values) v = dist(rng);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    auto percentiles = percentile_scale(values);
    for (std::size_t i = 1; i < values.size(); ++i) {
      CHECK(percentiles[i] > percentiles[i - 1]);
    }
    CHECK(percentiles.front() == 0.0);
    CHECK(percentiles.back() == 100.0);
  }
}
