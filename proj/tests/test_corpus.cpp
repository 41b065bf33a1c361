#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "prodrank/corpus.hpp"
#include "prodrank/errors.hpp"
#include "testutil.hpp"

using namespace prodrank;
using testutil::CorpusBuilder;
using testutil::TempDir;
using testutil::write_file;

namespace {

Corpus small_corpus() {
  return CorpusBuilder()
      .census("2009-06-30")
      .taxonomy("BIO/10", "LIFE")
      .taxonomy("FIS/03", "PHYS")
      .staff("R1", "U1", "BIO/10")
      .staff("R2", "U2", "BIO/10")
      .staff("R3", "U1", "FIS/03")
      .pub("P1", 2006, 4, {"biochemistry"}, {{"R1", "U1"}, {"R2", "U2"}})
      .pub("P2", 2007, 0, {"optics"}, {{"R3", "U1"}, {"", ""}})
      .pub("P3", 2007, 2, {"optics", "biochemistry"},
           {{"R3", "U1"}, {"R1", "U1"}})
      .build();
}

CorpusPaths paths_in(const TempDir& dir) {
  return {dir.file("staff.csv"), dir.file("publications.csv"),
          dir.file("byline.csv"), dir.file("taxonomy.csv")};
}

bool has_violation(const std::vector<Violation>& violations,
                   const std::string& code) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

}  // namespace

TEST_CASE("write and load round-trips the corpus") {
  auto corpus = small_corpus();
  TempDir dir;
  write_corpus(corpus, dir.path().string());
  auto loaded = load_corpus(paths_in(dir), "2009-06-30");
  CHECK(loaded == corpus);
}

TEST_CASE("validate accepts a well-formed corpus") {
  CHECK(validate(small_corpus()).empty());
}

TEST_CASE("validate flags roster problems") {
  auto corpus = small_corpus();
  corpus.roster.push_back({"R1", "U3", "BIO/10"});
  CHECK(has_violation(validate(corpus), "duplicate_researcher_id"));

  corpus = small_corpus();
  corpus.roster.push_back({"R9", "U1", "XXX/99"});
  CHECK(has_violation(validate(corpus), "unknown_sds"));

  corpus = small_corpus();
  corpus.taxonomy.entries.push_back({"BIO/10", "MED"});
  CHECK(has_violation(validate(corpus), "duplicate_sds"));
}

TEST_CASE("validate flags publication problems") {
  auto corpus = small_corpus();
  corpus.publications[1].pub_id = "P1";
  CHECK(has_violation(validate(corpus), "duplicate_pub_id"));

  corpus = small_corpus();
  corpus.publications[0].citations = -1;
  CHECK(has_violation(validate(corpus), "negative_citations"));

  corpus = small_corpus();
  corpus.publications[0].categories.clear();
  CHECK(has_violation(validate(corpus), "empty_categories"));

  corpus = small_corpus();
  corpus.publications[0].byline.clear();
  CHECK(has_violation(validate(corpus), "empty_byline"));
}

TEST_CASE("validate flags byline problems") {
  auto corpus = small_corpus();
  corpus.publications[0].byline[1].position = 1;
  CHECK(has_violation(validate(corpus), "duplicate_position"));

  corpus = small_corpus();
  corpus.publications[0].byline[1].position = 3;
  CHECK(has_violation(validate(corpus), "position_gap"));

  corpus = small_corpus();
  corpus.publications[0].byline[1].researcher_id = "R1";
  CHECK(has_violation(validate(corpus), "duplicate_researcher_in_byline"));

  corpus = small_corpus();
  corpus.publications[0].byline[0].researcher_id = "R9";
  CHECK(has_violation(validate(corpus), "unknown_researcher"));

  corpus = small_corpus();
  corpus.publications[0].byline[0].university_id = "U2";
  CHECK(has_violation(validate(corpus), "university_mismatch"));
}

TEST_CASE("stray byline rows are reported with their location") {
  auto corpus = small_corpus();
  TempDir dir;
  write_corpus(corpus, dir.path().string());
  write_file(dir.file("byline.csv"),
             "pub_id,position,researcher_id,university_id\n"
             "P1,1,R1,U1\n"
             "P1,2,R2,U2\n"
             "P9,1,R1,U1\n"       // unknown publication
             "P2,1,R3,U1\n"
             "P2,2,,\n"
             "P3,1,R3,U1\n"
             "P3,2,R1,U1\n");
  auto result = load_corpus_checked(paths_in(dir));
  CHECK_FALSE(result.corpus.has_value());
  REQUIRE(result.violations.size() == 1);
  CHECK(result.violations[0].code == "unknown_pub_id");
  CHECK(result.violations[0].message.find("P9") != std::string::npos);
  CHECK(result.violations[0].message.find("byline.csv:4") !=
        std::string::npos);
}

TEST_CASE("the integrity pass accumulates all findings") {
  auto corpus = small_corpus();
  TempDir dir;
  write_corpus(corpus, dir.path().string());
  // Clean parse, two independent integrity findings: a duplicated pub row
  // and a byline affiliation that contradicts the roster.
  write_file(dir.file("publications.csv"),
             "pub_id,year,citations,categories\n"
             "P1,2006,4,biochemistry\n"
             "P1,2006,4,biochemistry\n"
             "P2,2007,0,optics\n"
             "P3,2007,2,optics;biochemistry\n");
  write_file(dir.file("byline.csv"),
             "pub_id,position,researcher_id,university_id\n"
             "P1,1,R1,U1\n"
             "P1,2,R2,U2\n"
             "P2,1,R3,U1\n"
             "P2,2,,\n"
             "P3,1,R3,U1\n"
             "P3,2,R1,U2\n");     // roster says R1 is at U1
  auto result = load_corpus_checked(paths_in(dir));
  CHECK_FALSE(result.corpus.has_value());
  CHECK(has_violation(result.violations, "duplicate_pub_id"));
  CHECK(has_violation(result.violations, "university_mismatch"));
}

TEST_CASE("malformed rows surface as parse violations with the line") {
  auto corpus = small_corpus();
  TempDir dir;
  write_corpus(corpus, dir.path().string());
  write_file(dir.file("publications.csv"),
             "pub_id,year,citations,categories\n"
             "P1,2006,4,biochemistry\n"
             "P2,timeless,0,optics\n"
             "P3,2007,2,optics;biochemistry\n");
  auto result = load_corpus_checked(paths_in(dir));
  REQUIRE(result.violations.size() == 1);
  CHECK(result.violations[0].code == "parse");
  CHECK(result.violations[0].message.find("publications.csv:3") !=
        std::string::npos);

  CHECK_THROWS_WITH_AS(load_corpus(paths_in(dir)),
                       doctest::Contains("publications.csv:3"), Error);
  try {
    load_corpus(paths_in(dir));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("headers are mandatory and checked") {
  auto corpus = small_corpus();
  TempDir dir;
  write_corpus(corpus, dir.path().string());
  write_file(dir.file("staff.csv"), "R1,U1,BIO/10\n");
  auto result = load_corpus_checked(paths_in(dir));
  CHECK(has_violation(result.violations, "parse"));
}

TEST_CASE("missing files raise io errors") {
  TempDir dir;
  CHECK_THROWS_AS(load_corpus(paths_in(dir)), Error);
  try {
    load_corpus(paths_in(dir));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("integrity failures map to the integrity error kind") {
  auto corpus = small_corpus();
  corpus.publications[0].byline[0].university_id = "U2";  // roster says U1
  TempDir dir;
  write_corpus(corpus, dir.path().string());
  try {
    load_corpus(paths_in(dir));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integrity);
    CHECK(std::string(e.what()).find("university_mismatch") !=
          std::string::npos);
  }
}

TEST_CASE("ids carrying separators are rejected at write time") {
  auto corpus = small_corpus();
  corpus.roster[0].researcher_id = "R,1";
  TempDir dir;
  CHECK_THROWS_AS(write_corpus(corpus, dir.path().string()), Error);

  corpus = small_corpus();
  corpus.publications[0].categories[0] = "bio;chem";
  CHECK_THROWS_AS(write_corpus(corpus, dir.path().string()), Error);
}

TEST_CASE("digest is stable for equal corpora and moves with content") {
  auto a = small_corpus();
  auto b = small_corpus();
  CHECK(corpus_digest(a) == corpus_digest(b));
  b.publications[0].citations += 1;
  CHECK(corpus_digest(a) != corpus_digest(b));
  auto c = small_corpus();
  c.census_date = "2010-01-01";
  CHECK(corpus_digest(a) != corpus_digest(c));
}

namespace {

// Eight universities strong in KEEP; LOWPUB publishes too little; NARROW
// spans too few universities.
Corpus exclusion_corpus() {
  CorpusBuilder builder;
  builder.census("2009-06-30");
  builder.taxonomy("KEEP/01", "LIFE");
  builder.taxonomy("LOWPUB/01", "LIFE");
  builder.taxonomy("NARROW/01", "PHYS");
  int pub = 0;
  auto pub_id = [&pub]() {
    char buf[16];
    std::snprintf(buf, sizeof buf, "P%03d", ++pub);
    return std::string(buf);
  };
  for (int u = 1; u <= 8; ++u) {
    std::string univ = "U" + std::to_string(u);
    std::string keeper = "K" + std::to_string(u);
    builder.staff(keeper, univ, "KEEP/01");
    builder.pub(pub_id(), 2006, u % 3, {"keepcat"}, {{keeper, univ}});
  }
  // LOWPUB: 5 staff across 8 universities is impossible; use 8 staff, 2
  // publishing: fraction 0.25 < 0.5 while the span stays at 8.
  for (int u = 1; u <= 8; ++u) {
    std::string univ = "U" + std::to_string(u);
    std::string member = "L" + std::to_string(u);
    builder.staff(member, univ, "LOWPUB/01");
    if (u <= 2) {
      builder.pub(pub_id(), 2007, 1, {"lowcat"}, {{member, univ}});
    }
  }
  // NARROW: everyone publishes but only 7 universities are present.
  for (int u = 1; u <= 7; ++u) {
    std::string univ = "U" + std::to_string(u);
    std::string member = "N" + std::to_string(u);
    builder.staff(member, univ, "NARROW/01");
    builder.pub(pub_id(), 2008, 2, {"narrowcat"}, {{member, univ}});
  }
  return builder.build();
}

}  // namespace

TEST_CASE("exclusion rules drop weak fields and report why") {
  auto corpus = exclusion_corpus();
  auto [kept, report] = apply_exclusions(corpus, ExclusionRules{});

  REQUIRE(report.excluded.size() == 2);
  CHECK(report.retained == std::vector<std::string>{"KEEP/01"});

  const auto* lowpub = &report.excluded[0];
  const auto* narrow = &report.excluded[1];
  if (lowpub->sds_code != "LOWPUB/01") std::swap(lowpub, narrow);
  CHECK(lowpub->sds_code == "LOWPUB/01");
  CHECK(lowpub->rules == std::vector<std::string>{"publishing_fraction"});
  CHECK(lowpub->publishing_fraction == doctest::Approx(0.25));
  CHECK(narrow->sds_code == "NARROW/01");
  CHECK(narrow->rules == std::vector<std::string>{"university_span"});
  CHECK(narrow->university_span == 7);

  // The taxonomy and roster shrink; publications stay for the baselines.
  CHECK(kept.taxonomy.entries.size() == 1);
  CHECK(kept.roster.size() == 8);
  CHECK(kept.publications.size() == corpus.publications.size());

  // Slots of removed staff keep the university and lose the reference.
  for (const auto& pub : kept.publications) {
    for (const auto& slot : pub.byline) {
      if (slot.researcher_id) {
        CHECK(slot.researcher_id->front() == 'K');
      } else {
        CHECK(slot.university_id.has_value());
      }
    }
  }
  CHECK(validate(kept).empty());
}

TEST_CASE("exclusion is idempotent") {
  auto corpus = exclusion_corpus();
  auto [kept, report] = apply_exclusions(corpus, ExclusionRules{});
  auto [kept2, report2] = apply_exclusions(kept, ExclusionRules{});
  CHECK(kept2 == kept);
  CHECK(report2.excluded.empty());
  CHECK(report2.retained == report.retained);
}

TEST_CASE("thresholds are strict inequalities") {
  // Fraction exactly 0.5 and span exactly 8 both survive.
  CorpusBuilder builder;
  builder.taxonomy("EDGE/01", "LIFE");
  int pub = 0;
  for (int u = 1; u <= 8; ++u) {
    std::string univ = "U" + std::to_string(u);
    std::string member = "E" + std::to_string(u);
    builder.staff(member, univ, "EDGE/01");
    if (u % 2 == 0) {
      builder.pub("P" + std::to_string(++pub), 2006, 1, {"edgecat"},
                  {{member, univ}});
    }
  }
  auto [kept, report] = apply_exclusions(builder.build(), ExclusionRules{});
  CHECK(report.excluded.empty());
  CHECK(report.retained == std::vector<std::string>{"EDGE/01"});
  CHECK(kept.roster.size() == 8);
}

TEST_CASE("non-nil subsets track output and impact") {
  auto corpus = small_corpus();
  auto output = non_nil_subset(corpus, Basis::Output);
  auto impact = non_nil_subset(corpus, Basis::Impact);

  CHECK(output == std::set<UniversitySds>{{"U1", "BIO/10"},
                                          {"U2", "BIO/10"},
                                          {"U1", "FIS/03"}});
  // P2 is uncited, but R3 also appears on the cited P3.
  CHECK(impact == std::set<UniversitySds>{{"U1", "BIO/10"},
                                          {"U2", "BIO/10"},
                                          {"U1", "FIS/03"}});
  for (const auto& cell : impact) CHECK(output.count(cell) == 1);

  // Drop P3: the physics cell loses its only cited publication.
  corpus.publications.pop_back();
  impact = non_nil_subset(corpus, Basis::Impact);
  CHECK(impact == std::set<UniversitySds>{{"U1", "BIO/10"},
                                          {"U2", "BIO/10"}});
}

TEST_CASE("staff counts resolve field and discipline codes") {
  auto corpus = small_corpus();
  CHECK(research_staff_count(corpus, "U1", "BIO/10") == 1);
  CHECK(research_staff_count(corpus, "U1", "LIFE") == 1);
  CHECK(research_staff_count(corpus, "U1", "PHYS") == 1);
  CHECK(research_staff_count(corpus, "U2", "PHYS") == 0);
  CHECK_THROWS_AS(research_staff_count(corpus, "U1", "NOPE"), Error);
}

TEST_CASE("summary splits by discipline and dedups the total") {
  // P3 has authors in both disciplines, so per-UDA publication counts
  // overlap while the total counts it once.
  auto corpus = small_corpus();
  auto summary = summarize(corpus);
  REQUIRE(summary.per_uda.size() == 2);

  const auto& life = summary.per_uda[0];
  CHECK(life.uda_code == "LIFE");
  CHECK(life.n_sds == 1);
  CHECK(life.staff_total == 2);
  CHECK(life.staff_publishing == 2);
  CHECK(life.publications == 2);  // P1, P3
  CHECK(life.citations == 6);
  CHECK(life.universities_output == 2);
  CHECK(life.universities_impact == 2);

  const auto& phys = summary.per_uda[1];
  CHECK(phys.uda_code == "PHYS");
  CHECK(phys.staff_total == 1);
  CHECK(phys.publications == 2);  // P2, P3
  CHECK(phys.citations == 2);
  CHECK(phys.universities_output == 1);
  CHECK(phys.universities_impact == 1);

  CHECK(summary.total.uda_code == "TOTAL");
  CHECK(summary.total.staff_total == 3);
  CHECK(summary.total.publications == 3);
  CHECK(summary.total.citations == 6);
}
